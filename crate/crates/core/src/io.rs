//! JSON documents for instances and assignments.
//!
//! An instance is an object with keys `nodes`, `edges`, `subgraphs` and
//! `laminar`; edges are `{id, u, v, w, c}` with `c` an integer or `"inf"`,
//! subgraphs are `{id, edges, b}` with `b` mapping node ids to bounds, and
//! laminar sets are `{id, nodes, g}`. Unknown keys are rejected. Output is
//! canonical: sorted keys, entities in index order.

use serde_json::{json, Map, Value};

use crate::model::{validate_instance, Assignment, Instance, RawEdge, RawInstance, RawLaminar, RawSubgraph};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema { pointer: pointer.into(), message: message.into() }
}

fn parse_json(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })
}

fn object<'a>(v: &'a Value, at: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>, IoError> {
    let obj = v.as_object().ok_or_else(|| schema(at, "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(schema(format!("{at}/{k}"), "unknown key"));
    }
    Ok(obj)
}

fn field<'a>(obj: &'a Map<String, Value>, at: &str, key: &str) -> Result<&'a Value, IoError> {
    obj.get(key).ok_or_else(|| schema(format!("{at}/{key}"), "missing key"))
}

fn string(v: &Value, at: &str) -> Result<String, IoError> {
    v.as_str().map(str::to_owned).ok_or_else(|| schema(at, "expected a string"))
}

fn int(v: &Value, at: &str) -> Result<i64, IoError> {
    v.as_i64().ok_or_else(|| schema(at, "expected an integer"))
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| schema(at, "expected an array"))
}

fn strings(v: &Value, at: &str) -> Result<Vec<String>, IoError> {
    array(v, at)?.iter().enumerate().map(|(i, s)| string(s, &format!("{at}/{i}"))).collect()
}

/// Optional top-level list; absent means empty.
fn list<'a>(root: &'a Map<String, Value>, key: &str) -> Result<&'a [Value], IoError> {
    match root.get(key) {
        None => Ok(&[]),
        Some(v) => Ok(array(v, &format!("/{key}"))?),
    }
}

pub fn parse_raw(text: &str) -> Result<RawInstance, IoError> {
    let doc = parse_json(text)?;
    let root = object(&doc, "", &["nodes", "edges", "subgraphs", "laminar"])?;
    let nodes = match root.get("nodes") {
        None => Vec::new(),
        Some(v) => strings(v, "/nodes")?,
    };
    let mut edges = Vec::new();
    for (i, e) in list(root, "edges")?.iter().enumerate() {
        let at = format!("/edges/{i}");
        let obj = object(e, &at, &["id", "u", "v", "w", "c"])?;
        let c = field(obj, &at, "c")?;
        let capacity = match c {
            Value::String(s) if s == "inf" => None,
            _ => Some(int(c, &format!("{at}/c")).map_err(|_| schema(format!("{at}/c"), "expected an integer or \"inf\""))?),
        };
        edges.push(RawEdge {
            id: string(field(obj, &at, "id")?, &format!("{at}/id"))?,
            u: string(field(obj, &at, "u")?, &format!("{at}/u"))?,
            v: string(field(obj, &at, "v")?, &format!("{at}/v"))?,
            weight: int(field(obj, &at, "w")?, &format!("{at}/w"))?,
            capacity,
        });
    }
    let mut subgraphs = Vec::new();
    for (i, s) in list(root, "subgraphs")?.iter().enumerate() {
        let at = format!("/subgraphs/{i}");
        let obj = object(s, &at, &["id", "edges", "b"])?;
        let b = field(obj, &at, "b")?.as_object().ok_or_else(|| schema(format!("{at}/b"), "expected an object"))?;
        let bounds = b
            .iter()
            .map(|(node, v)| Ok((node.clone(), int(v, &format!("{at}/b/{node}"))?)))
            .collect::<Result<_, IoError>>()?;
        subgraphs.push(RawSubgraph {
            id: string(field(obj, &at, "id")?, &format!("{at}/id"))?,
            edges: strings(field(obj, &at, "edges")?, &format!("{at}/edges"))?,
            bounds,
        });
    }
    let mut laminar = Vec::new();
    for (i, l) in list(root, "laminar")?.iter().enumerate() {
        let at = format!("/laminar/{i}");
        let obj = object(l, &at, &["id", "nodes", "g"])?;
        laminar.push(RawLaminar {
            id: string(field(obj, &at, "id")?, &format!("{at}/id"))?,
            nodes: strings(field(obj, &at, "nodes")?, &format!("{at}/nodes"))?,
            limit: int(field(obj, &at, "g")?, &format!("{at}/g"))?,
        });
    }
    Ok(RawInstance { nodes, edges, subgraphs, laminar })
}

/// Parses and validates; the first validation error is reported with its
/// pointer.
pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    let raw = parse_raw(text)?;
    validate_instance(&raw).map_err(|errs| {
        let first = &errs[0];
        schema(first.pointer(), first.to_string())
    })
}

pub fn instance_to_json(inst: &Instance) -> Value {
    let raw = inst.to_raw();
    let capacity = |c: Option<i64>| c.map_or(json!("inf"), |c| json!(c));
    json!({
        "nodes": raw.nodes,
        "edges": raw.edges.iter().map(|e| json!({"id": e.id, "u": e.u, "v": e.v, "w": e.weight, "c": capacity(e.capacity)})).collect::<Vec<_>>(),
        "subgraphs": raw.subgraphs.iter().map(|s| {
            let b: Map<String, Value> = s.bounds.iter().map(|(n, b)| (n.clone(), json!(b))).collect();
            json!({"id": s.id, "edges": s.edges, "b": b})
        }).collect::<Vec<_>>(),
        "laminar": raw.laminar.iter().map(|l| json!({"id": l.id, "nodes": l.nodes, "g": l.limit})).collect::<Vec<_>>(),
    })
}

/// Canonical pretty-printed document with a trailing newline.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = serde_json::to_string_pretty(&instance_to_json(inst)).expect("serializable");
    out.push('\n');
    out
}

pub fn assignment_to_json(x: &Assignment) -> Value {
    json!({"objective": x.objective, "values": x.values})
}

/// Reads `{"values": {edge: n}, "objective": n}`; `objective` is optional
/// and recomputed when absent. Edges missing from `values` are zero.
pub fn parse_assignment(text: &str, inst: &Instance) -> Result<Assignment, IoError> {
    let doc = parse_json(text)?;
    let root = object(&doc, "", &["values", "objective"])?;
    let values = field(root, "", "values")?.as_object().ok_or_else(|| schema("/values", "expected an object"))?;
    let mut x = vec![0; inst.edge_count()];
    for (id, v) in values {
        let at = format!("/values/{id}");
        let e = inst.edge_index(id).ok_or_else(|| schema(&at, "unknown edge"))?;
        x[e] = v.as_u64().ok_or_else(|| schema(&at, "expected a non-negative integer"))?;
    }
    let assignment = Assignment::from_vector(inst, &x);
    if let Some(obj) = root.get("objective") {
        let stated = obj.as_u64().ok_or_else(|| schema("/objective", "expected a non-negative integer"))?;
        if stated != assignment.objective {
            return Err(schema("/objective", format!("stated {stated}, weighted sum is {}", assignment.objective)));
        }
    }
    Ok(assignment)
}
