use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::{format_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

/// A variable with optional bounds; `None` means unbounded on that side.
#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub name: String,
    /// Sparse coefficients by column index, without duplicates.
    pub coeffs: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Row {
    pub fn activity(&self, values: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, a)| a * &values[*j]).sum()
    }
}

/// A linear program over exact rationals with named rows and columns.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub direction: Direction,
    columns: Vec<Column>,
    rows: Vec<Row>,
    objective: Vec<Rational>,
    column_names: HashMap<String, usize>,
    row_names: HashMap<String, usize>,
}

impl LinearProgram {
    pub fn new(direction: Direction) -> Self {
        LinearProgram {
            direction,
            columns: Vec::new(),
            rows: Vec::new(),
            objective: Vec::new(),
            column_names: HashMap::new(),
            row_names: HashMap::new(),
        }
    }

    /// Adds a column with objective coefficient zero.
    ///
    /// # Panics
    /// On a duplicate column name.
    pub fn add_column(&mut self, name: impl Into<String>, lower: Option<Rational>, upper: Option<Rational>) -> usize {
        let name = name.into();
        let j = self.columns.len();
        assert!(self.column_names.insert(name.clone(), j).is_none(), "duplicate column {name}");
        self.columns.push(Column { name, lower, upper });
        self.objective.push(Rational::zero());
        j
    }

    pub fn set_objective(&mut self, column: usize, coeff: Rational) {
        self.objective[column] = coeff;
    }

    /// Adds a row; repeated column indices are summed and zeros dropped.
    ///
    /// # Panics
    /// On a duplicate row name or a column index out of range.
    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        coeffs: impl IntoIterator<Item = (usize, Rational)>,
        sense: Sense,
        rhs: Rational,
    ) -> usize {
        let name = name.into();
        let mut merged: Vec<(usize, Rational)> = Vec::new();
        let mut sorted: Vec<(usize, Rational)> = coeffs.into_iter().collect();
        sorted.sort_by_key(|(j, _)| *j);
        for (j, a) in sorted {
            assert!(j < self.columns.len(), "row {name} references missing column {j}");
            match merged.last_mut() {
                Some((k, b)) if *k == j => *b += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|(_, a)| !a.is_zero());
        let i = self.rows.len();
        assert!(self.row_names.insert(name.clone(), i).is_none(), "duplicate row {name}");
        self.rows.push(Row { name, coeffs: merged, sense, rhs });
        i
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.column_names.get(name).copied()
    }

    pub fn row_index(&self, name: &str) -> Option<usize> {
        self.row_names.get(name).copied()
    }

    pub fn set_bounds(&mut self, column: usize, lower: Option<Rational>, upper: Option<Rational>) {
        self.columns[column].lower = lower;
        self.columns[column].upper = upper;
    }

    pub fn objective_value(&self, values: &[Rational]) -> Rational {
        self.objective.iter().zip(values).map(|(c, x)| c * x).sum()
    }

    /// Exact check of every bound and row; the first failure is described.
    pub fn check_solution(&self, values: &[Rational]) -> Result<(), String> {
        if values.len() != self.columns.len() {
            return Err(format!("expected {} values, got {}", self.columns.len(), values.len()));
        }
        for (col, x) in self.columns.iter().zip(values) {
            if col.lower.as_ref().is_some_and(|l| x < l) || col.upper.as_ref().is_some_and(|u| x > u) {
                return Err(format!("column {} = {} is out of bounds", col.name, format_rational(x)));
            }
        }
        for row in &self.rows {
            let lhs = row.activity(values);
            let ok = match row.sense {
                Sense::Le => lhs <= row.rhs,
                Sense::Eq => lhs == row.rhs,
                Sense::Ge => lhs >= row.rhs,
            };
            if !ok {
                return Err(format!("row {} has activity {}", row.name, format_rational(&lhs)));
            }
        }
        Ok(())
    }

    /// CPLEX-LP text. Non-integral coefficients are written as `p/q`.
    pub fn to_cplex_lp(&self) -> String {
        fn term(out: &mut String, first: bool, a: &Rational, name: &str) {
            let sign = if a.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = a.abs();
            let sep = if first && sign.is_empty() { "" } else { " " };
            if mag == Rational::from_integer(1.into()) {
                let _ = write!(out, "{sign}{sep}{name}");
            } else {
                let _ = write!(out, "{sign}{sep}{} {name}", format_rational(&mag));
            }
        }
        let mut out = String::new();
        out.push_str(match self.direction {
            Direction::Maximize => "Maximize\n",
            Direction::Minimize => "Minimize\n",
        });
        out.push_str(" obj:");
        let mut first = true;
        for (j, c) in self.objective.iter().enumerate() {
            if !c.is_zero() {
                out.push(' ');
                term(&mut out, first, c, &self.columns[j].name);
                first = false;
            }
        }
        if first {
            out.push_str(" 0");
        }
        out.push_str("\nSubject To\n");
        for row in &self.rows {
            let _ = write!(out, " {}:", row.name);
            let mut first = true;
            for (j, a) in &row.coeffs {
                out.push(' ');
                term(&mut out, first, a, &self.columns[*j].name);
                first = false;
            }
            if first {
                out.push_str(" 0");
            }
            let op = match row.sense {
                Sense::Le => "<=",
                Sense::Eq => "=",
                Sense::Ge => ">=",
            };
            let _ = writeln!(out, " {op} {}", format_rational(&row.rhs));
        }
        out.push_str("Bounds\n");
        for col in &self.columns {
            match (&col.lower, &col.upper) {
                (None, None) => {
                    let _ = writeln!(out, " {} free", col.name);
                }
                (l, u) => {
                    let lo = l.as_ref().map_or("-inf".to_string(), format_rational);
                    let hi = u.as_ref().map_or("+inf".to_string(), format_rational);
                    let _ = writeln!(out, " {lo} <= {} <= {hi}", col.name);
                }
            }
        }
        out.push_str("End\n");
        out
    }
}
