//! Seeded random instance generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use simassign::netmatrix::local_interval_order;
use simassign::{is_locally_laminar, Capacity, Instance, InstanceBuilder};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub max_cap: u64,
    pub max_weight: u64,
    pub max_k: usize,
    pub min_k: usize,
    pub laminar: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_nodes: 8, max_edges: 8, max_cap: 2, max_weight: 3, max_k: 3, min_k: 0, laminar: true }
    }
}

fn add_subgraphs(
    mut b: InstanceBuilder,
    rng: &mut ChaCha8Rng,
    edges: &[(String, String, String)],
    k: usize,
) -> InstanceBuilder {
    for h in 0..k {
        let mut members: Vec<&(String, String, String)> = edges.iter().filter(|_| rng.gen_bool(0.6)).collect();
        if members.is_empty() {
            members.push(edges.choose(rng).expect("at least one edge"));
        }
        let mut nodes: Vec<&str> = members.iter().flat_map(|e| [e.1.as_str(), e.2.as_str()]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        let bounds: Vec<(&str, u64)> = nodes.iter().map(|&v| (v, rng.gen_range(0..=2))).collect();
        let ids: Vec<&str> = members.iter().map(|e| e.0.as_str()).collect();
        b = b.subgraph(&format!("H{h}"), &ids, &bounds);
    }
    b
}

/// Up to two degree-sum sets, nested or disjoint, drawn from `pool`.
fn add_laminar(mut b: InstanceBuilder, rng: &mut ChaCha8Rng, pool: &[String]) -> InstanceBuilder {
    if pool.is_empty() {
        return b;
    }
    let mut shuffled = pool.to_vec();
    shuffled.shuffle(rng);
    let size = rng.gen_range(1..=shuffled.len().min(3));
    let first: Vec<String> = shuffled[..size].to_vec();
    let refs: Vec<&str> = first.iter().map(String::as_str).collect();
    b = b.laminar("L0", &refs, rng.gen_range(0..=4));
    if rng.gen_bool(0.5) {
        let second: Vec<&str> = if size > 1 && rng.gen_bool(0.5) {
            refs[..size - 1].to_vec()
        } else if shuffled.len() > size {
            vec![shuffled[size].as_str()]
        } else {
            return b;
        };
        b = b.laminar("L1", &second, rng.gen_range(0..=3));
    }
    b
}

fn random_edges(rng: &mut ChaCha8Rng, shape: &Shape, pairs: &[(String, String)]) -> Vec<(String, String, String)> {
    let m = rng.gen_range(1..=shape.max_edges);
    (0..m)
        .map(|i| {
            let (u, v) = pairs.choose(rng).expect("some pair").clone();
            (format!("e{i}"), u, v)
        })
        .collect()
}

fn finish(
    mut b: InstanceBuilder,
    rng: &mut ChaCha8Rng,
    shape: &Shape,
    edges: &[(String, String, String)],
) -> InstanceBuilder {
    for (id, u, v) in edges {
        b = b.edge(id, u, v, rng.gen_range(0..=shape.max_weight), Capacity::Finite(rng.gen_range(0..=shape.max_cap)));
    }
    let k = rng.gen_range(shape.min_k..=shape.max_k);
    add_subgraphs(b, rng, edges, k)
}

/// General instance (parallel edges allowed).
pub fn random_instance(rng: &mut ChaCha8Rng, shape: &Shape) -> Instance {
    let n = rng.gen_range(2..=shape.max_nodes);
    let nodes: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let pairs: Vec<(String, String)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (nodes[i].clone(), nodes[j].clone())).collect();
    let edges = random_edges(rng, shape, &pairs);
    let mut b = finish(InstanceBuilder::new(), rng, shape, &edges);
    if shape.laminar {
        b = add_laminar(b, rng, &nodes);
    }
    b.build().expect("generated instance is valid")
}

/// Bipartite, locally laminar instance whose degree-sum sets each lie on one
/// side.
pub fn random_bipartite(rng: &mut ChaCha8Rng, shape: &Shape) -> Instance {
    loop {
        let s = rng.gen_range(1..=shape.max_nodes / 2);
        let t = rng.gen_range(1..=shape.max_nodes - s);
        let side_s: Vec<String> = (0..s).map(|i| format!("s{i}")).collect();
        let side_t: Vec<String> = (0..t).map(|i| format!("t{i}")).collect();
        let pairs: Vec<(String, String)> =
            side_s.iter().flat_map(|a| side_t.iter().map(move |b| (a.clone(), b.clone()))).collect();
        let edges = random_edges(rng, shape, &pairs);
        let mut b = finish(InstanceBuilder::new(), rng, shape, &edges);
        if shape.laminar {
            let pool = if rng.gen_bool(0.5) { &side_s } else { &side_t };
            b = add_laminar(b, rng, pool);
        }
        let inst = b.build().expect("generated instance is valid");
        if is_locally_laminar(&inst) {
            return inst;
        }
    }
}

/// Tree without degree-sum sets whose subgraph traces admit an interval
/// order at every node.
pub fn random_tree_interval(rng: &mut ChaCha8Rng, shape: &Shape) -> Instance {
    loop {
        let n = rng.gen_range(2..=shape.max_nodes.min(shape.max_edges + 1));
        let nodes: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, String, String)> = (1..n)
            .map(|i| (format!("e{i}"), nodes[rng.gen_range(0..i)].clone(), nodes[i].clone()))
            .collect();
        let inst = finish(InstanceBuilder::new(), rng, shape, &edges).build().expect("generated instance is valid");
        if (0..inst.node_count()).all(|v| local_interval_order(&inst, v).is_some()) {
            return inst;
        }
    }
}

/// Locally laminar instance, not necessarily bipartite.
pub fn random_locally_laminar(rng: &mut ChaCha8Rng, shape: &Shape) -> Instance {
    loop {
        let inst = random_instance(rng, shape);
        if is_locally_laminar(&inst) {
            return inst;
        }
    }
}

/// Triangle plus up to one extra edge, so that odd-set inequalities matter.
pub fn random_odd_cycle(rng: &mut ChaCha8Rng, shape: &Shape) -> Instance {
    loop {
        let nodes = ["a", "b", "c", "d"];
        let mut edges: Vec<(String, String, String)> = [("a", "b"), ("b", "c"), ("c", "a")]
            .iter()
            .enumerate()
            .map(|(i, (u, v))| (format!("e{i}"), u.to_string(), v.to_string()))
            .collect();
        if rng.gen_bool(0.5) {
            let u = nodes[rng.gen_range(0..3)];
            let v = if rng.gen_bool(0.5) { "d" } else { nodes[(nodes.iter().position(|&x| x == u).unwrap() + 1) % 3] };
            edges.push(("e3".into(), u.into(), v.into()));
        }
        let mut b = InstanceBuilder::new();
        for (id, u, v) in &edges {
            b = b.edge(id, u, v, rng.gen_range(1..=2), Capacity::Finite(rng.gen_range(1..=shape.max_cap)));
        }
        let ids: Vec<&str> = edges.iter().map(|e| e.0.as_str()).collect();
        let mut touched: Vec<&str> = edges.iter().flat_map(|e| [e.1.as_str(), e.2.as_str()]).collect();
        touched.sort_unstable();
        touched.dedup();
        let bounds: Vec<(&str, u64)> = touched.iter().map(|&v| (v, if rng.gen_bool(0.8) { 1 } else { 2 })).collect();
        b = b.subgraph("T", &ids, &bounds);
        let k = rng.gen_range(shape.min_k..=shape.max_k.saturating_sub(1));
        b = add_subgraphs(b, rng, &edges, k);
        if shape.laminar && rng.gen_bool(0.25) {
            let pool: Vec<String> = nodes[..3].iter().map(|s| s.to_string()).collect();
            b = add_laminar(b, rng, &pool);
        }
        let inst = b.build().expect("generated instance is valid");
        if is_locally_laminar(&inst) {
            return inst;
        }
    }
}

/// Cycle with pendant trees (a pseudo-tree), two subgraphs with bound 1
/// everywhere; every node has at most two incident edges in each subgraph.
pub fn random_pseudo_tree(rng: &mut ChaCha8Rng, max_nodes: usize) -> Instance {
    let c = rng.gen_range(3..=max_nodes.clamp(3, 5));
    let n = rng.gen_range(c..=max_nodes.max(c));
    let mut edges: Vec<(String, String, String)> =
        (0..c).map(|i| (format!("c{i}"), format!("v{i}"), format!("v{}", (i + 1) % c))).collect();
    for i in c..n {
        edges.push((format!("p{i}"), format!("v{}", rng.gen_range(0..i)), format!("v{i}")));
    }
    let mut b = InstanceBuilder::new();
    for (id, u, v) in &edges {
        b = b.edge(id, u, v, rng.gen_range(1..=2), Capacity::Finite(1));
    }
    for h in 0..2 {
        let mut ids: Vec<&str> = edges.iter().filter(|_| rng.gen_bool(0.7)).map(|e| e.0.as_str()).collect();
        if ids.is_empty() {
            ids.push(edges[0].0.as_str());
        }
        b = b.subgraph_uniform(&format!("H{h}"), &ids, 1);
    }
    b.build().expect("generated instance is valid")
}
