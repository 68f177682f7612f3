//! Two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Columns are shifted or reflected onto `s ≥ 0`, finite ranges become
//! explicit rows, and the dense tableau is updated only where the pivot row
//! and column are nonzero.

use num_traits::{One, Signed, Zero};

use super::program::{Direction, LinearProgram, Sense};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal objective in the program's own direction, when optimal.
    pub objective: Option<Rational>,
    /// Column values in program order, when optimal.
    pub values: Vec<Rational>,
}

impl LpSolution {
    pub fn value(&self, lp: &LinearProgram, column: &str) -> Option<&Rational> {
        lp.column_index(column).and_then(|j| self.values.get(j))
    }
}

/// How an original column is expressed in standard-form variables.
enum Map {
    /// `x = l + s`
    Shift(Rational, usize),
    /// `x = u - s`
    Reflect(Rational, usize),
    /// `x = s⁺ - s⁻`
    Split(usize, usize),
}

struct StandardForm {
    rows: Vec<(Vec<(usize, Rational)>, Sense, Rational)>,
    cost: Vec<Rational>,
    constant: Rational,
    maps: Vec<Map>,
    vars: usize,
}

fn standardize(lp: &LinearProgram) -> StandardForm {
    let mut maps = Vec::with_capacity(lp.columns().len());
    let mut vars = 0;
    let mut bound_rows = Vec::new();
    for col in lp.columns() {
        let map = match (&col.lower, &col.upper) {
            (Some(l), u) => {
                if let Some(u) = u {
                    bound_rows.push((vec![(vars, Rational::one())], Sense::Le, u - l));
                }
                Map::Shift(l.clone(), vars)
            }
            (None, Some(u)) => Map::Reflect(u.clone(), vars),
            (None, None) => {
                vars += 1;
                Map::Split(vars - 1, vars)
            }
        };
        vars += 1;
        maps.push(map);
    }
    let sign = match lp.direction {
        Direction::Maximize => Rational::one(),
        Direction::Minimize => -Rational::one(),
    };
    let mut cost = vec![Rational::zero(); vars];
    let mut constant = Rational::zero();
    let expand = |j: usize, a: &Rational, target: &mut Vec<(usize, Rational)>, shift: &mut Rational| match &maps[j] {
        Map::Shift(l, s) => {
            *shift += a * l;
            target.push((*s, a.clone()));
        }
        Map::Reflect(u, s) => {
            *shift += a * u;
            target.push((*s, -a.clone()));
        }
        Map::Split(p, m) => {
            target.push((*p, a.clone()));
            target.push((*m, -a.clone()));
        }
    };
    let mut obj_terms = Vec::new();
    for (j, c) in lp.objective().iter().enumerate() {
        if !c.is_zero() {
            expand(j, &(c * &sign), &mut obj_terms, &mut constant);
        }
    }
    for (s, c) in obj_terms {
        cost[s] += c;
    }
    let mut rows = Vec::with_capacity(lp.rows().len() + bound_rows.len());
    for row in lp.rows() {
        let mut terms = Vec::with_capacity(row.coeffs.len());
        let mut shift = Rational::zero();
        for (j, a) in &row.coeffs {
            expand(*j, a, &mut terms, &mut shift);
        }
        rows.push((terms, row.sense, &row.rhs - shift));
    }
    rows.extend(bound_rows);
    StandardForm { rows, cost, constant, maps, vars }
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    /// Reduced costs; the last entry holds minus the current objective.
    d: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        if !p.is_one() {
            for x in self.a[r].iter_mut() {
                if !x.is_zero() {
                    *x /= &p;
                }
            }
        }
        let support: Vec<usize> = (0..=self.width).filter(|&j| !self.a[r][j].is_zero()).collect();
        let pivot_row = std::mem::take(&mut self.a[r]);
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &support {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !self.d[c].is_zero() {
            let f = self.d[c].clone();
            for &j in &support {
                self.d[j] -= &f * &pivot_row[j];
            }
        }
        self.a[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Maximizes over columns allowed by `eligible`. Returns false if unbounded.
    fn optimize(&mut self, eligible: impl Fn(usize) -> bool) -> bool {
        loop {
            let Some(c) = (0..self.width).find(|&j| eligible(j) && self.d[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.rhs()] / &row[c];
                let better = match &best {
                    None => true,
                    Some((b, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*b]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Solves `lp` exactly. An optimal result satisfies every row and bound with no
/// tolerance; this is re-checked before returning.
pub fn simplex_solve(lp: &LinearProgram) -> LpSolution {
    let sf = standardize(lp);
    let m = sf.rows.len();
    // Column layout: structural vars, one slack per inequality row, artificials.
    let slack_count = sf.rows.iter().filter(|(_, s, _)| *s != Sense::Eq).count();
    let mut art_rows = Vec::new();
    let mut slack_of_row = vec![None; m];
    let mut next = sf.vars;
    for (i, (_, sense, _)) in sf.rows.iter().enumerate() {
        if *sense != Sense::Eq {
            slack_of_row[i] = Some(next);
            next += 1;
        }
    }
    debug_assert_eq!(next, sf.vars + slack_count);
    let first_art = next;
    let mut rows_dense = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (i, (terms, sense, rhs)) in sf.rows.iter().enumerate() {
        let flip = rhs.is_negative();
        let mut row = vec![Rational::zero(); first_art + 1];
        for (j, a) in terms {
            row[*j] += a;
        }
        if let Some(s) = slack_of_row[i] {
            row[s] = if *sense == Sense::Le { Rational::one() } else { -Rational::one() };
        }
        row[first_art] = rhs.clone();
        if flip {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        let slack_basic = slack_of_row[i].filter(|&s| row[s].is_one());
        match slack_basic {
            Some(s) => basis.push(s),
            None => {
                basis.push(first_art + art_rows.len());
                art_rows.push(i);
            }
        }
        rows_dense.push(row);
    }
    let width = first_art + art_rows.len();
    for row in rows_dense.iter_mut() {
        let rhs = row.pop().expect("rhs entry");
        row.resize(width, Rational::zero());
        row.push(rhs);
    }
    for (k, &i) in art_rows.iter().enumerate() {
        rows_dense[i][first_art + k] = Rational::one();
    }
    let mut t = Tableau { a: rows_dense, d: vec![Rational::zero(); width + 1], basis, width };

    if !art_rows.is_empty() {
        for &i in &art_rows {
            for j in 0..first_art {
                if !t.a[i][j].is_zero() {
                    let v = t.a[i][j].clone();
                    t.d[j] += v;
                }
            }
            let b = t.a[i][width].clone();
            t.d[width] += b;
        }
        t.optimize(|_| true);
        if !t.d[width].is_zero() {
            return LpSolution { status: LpStatus::Infeasible, objective: None, values: Vec::new() };
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < t.a.len() {
            if t.basis[r] >= first_art {
                match (0..first_art).find(|&j| !t.a[r][j].is_zero()) {
                    Some(c) => t.pivot(r, c),
                    None => {
                        t.a.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase two: reduced costs of the true objective over non-artificial columns.
    let mut d = vec![Rational::zero(); width + 1];
    d[..sf.vars].clone_from_slice(&sf.cost);
    for (i, &b) in t.basis.iter().enumerate() {
        if b < sf.vars && !sf.cost[b].is_zero() {
            let cb = sf.cost[b].clone();
            for (j, a) in t.a[i].iter().enumerate() {
                if !a.is_zero() {
                    d[j] -= &cb * a;
                }
            }
        }
    }
    t.d = d;
    if !t.optimize(|j| j < first_art) {
        return LpSolution { status: LpStatus::Unbounded, objective: None, values: Vec::new() };
    }

    let mut s = vec![Rational::zero(); sf.vars];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < sf.vars {
            s[b] = t.a[i][width].clone();
        }
    }
    let values: Vec<Rational> = sf
        .maps
        .iter()
        .map(|map| match map {
            Map::Shift(l, k) => l + &s[*k],
            Map::Reflect(u, k) => u - &s[*k],
            Map::Split(p, q) => &s[*p] - &s[*q],
        })
        .collect();
    let objective = lp.objective_value(&values);
    debug_assert_eq!(
        objective,
        match lp.direction {
            Direction::Maximize => &sf.constant - &t.d[width],
            Direction::Minimize => -(&sf.constant - &t.d[width]),
        }
    );
    if let Err(msg) = lp.check_solution(&values) {
        panic!("simplex produced an infeasible point: {msg}");
    }
    LpSolution { status: LpStatus::Optimal, objective: Some(objective), values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{integer, rational};
    use proptest::prelude::*;

    #[test]
    fn box_maximum() {
        let mut lp = LinearProgram::new(Direction::Maximize);
        let x = lp.add_column("x", Some(integer(0)), Some(integer(1)));
        lp.set_objective(x, integer(1));
        let sol = simplex_solve(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, Some(integer(1)));
    }

    #[test]
    fn half_integral_triangle() {
        let mut lp = LinearProgram::new(Direction::Maximize);
        let cols: Vec<usize> = (0..3).map(|i| lp.add_column(format!("x{i}"), Some(integer(0)), None)).collect();
        for &c in &cols {
            lp.set_objective(c, integer(1));
        }
        for i in 0..3 {
            lp.add_row(format!("v{i}"), [(cols[i], integer(1)), (cols[(i + 1) % 3], integer(1))], Sense::Le, integer(1));
        }
        assert_eq!(simplex_solve(&lp).objective, Some(rational(3, 2)));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Direction::Maximize);
        let x = lp.add_column("x", Some(integer(0)), None);
        lp.set_objective(x, integer(1));
        assert_eq!(simplex_solve(&lp).status, LpStatus::Unbounded);
        lp.add_row("r", [(x, integer(1))], Sense::Ge, integer(2));
        lp.add_row("s", [(x, integer(1))], Sense::Le, integer(1));
        assert_eq!(simplex_solve(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn free_and_reflected_columns() {
        let mut lp = LinearProgram::new(Direction::Minimize);
        let x = lp.add_column("x", None, None);
        let y = lp.add_column("y", None, Some(integer(3)));
        lp.set_objective(x, integer(1));
        lp.set_objective(y, integer(-1));
        lp.add_row("r", [(x, integer(1)), (y, integer(-1))], Sense::Ge, integer(-5));
        let sol = simplex_solve(&lp);
        assert_eq!(sol.objective, Some(integer(-5)));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(Direction::Maximize);
        let x = lp.add_column("x", Some(integer(0)), None);
        let y = lp.add_column("y", Some(integer(0)), None);
        lp.set_objective(x, integer(2));
        lp.set_objective(y, integer(1));
        lp.add_row("a", [(x, integer(1)), (y, integer(1))], Sense::Eq, integer(4));
        lp.add_row("b", [(x, integer(2)), (y, integer(2))], Sense::Eq, integer(8));
        lp.add_row("c", [(x, integer(1))], Sense::Le, integer(3));
        assert_eq!(simplex_solve(&lp).objective, Some(integer(7)));
    }

    /// Brute force over the vertices of a 2-variable box-constrained LP.
    fn grid_opt(c: (i64, i64), rows: &[(i64, i64, i64)]) -> Option<Rational> {
        // Candidate points: intersections of every pair of lines among rows and box sides.
        let mut lines: Vec<(i64, i64, i64)> = rows.to_vec();
        lines.extend([(1, 0, 0), (0, 1, 0), (1, 0, 4), (0, 1, 4)]);
        let feasible = |x: &Rational, y: &Rational| {
            *x >= integer(0)
                && *y >= integer(0)
                && *x <= integer(4)
                && *y <= integer(4)
                && rows.iter().all(|&(a, b, r)| integer(a) * x + integer(b) * y <= integer(r))
        };
        let mut best: Option<Rational> = None;
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, r1) = lines[i];
                let (a2, b2, r2) = lines[j];
                let det = a1 * b2 - a2 * b1;
                if det == 0 {
                    continue;
                }
                let x = rational(r1 * b2 - r2 * b1, det);
                let y = rational(a1 * r2 - a2 * r1, det);
                if feasible(&x, &y) {
                    let v = integer(c.0) * &x + integer(c.1) * &y;
                    if best.as_ref().is_none_or(|b| v > *b) {
                        best = Some(v);
                    }
                }
            }
        }
        best
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration(
            c in (-3i64..4, -3i64..4),
            rows in prop::collection::vec((-3i64..4, -3i64..4, -2i64..6), 0..4),
        ) {
            let mut lp = LinearProgram::new(Direction::Maximize);
            let x = lp.add_column("x", Some(integer(0)), Some(integer(4)));
            let y = lp.add_column("y", Some(integer(0)), Some(integer(4)));
            lp.set_objective(x, integer(c.0));
            lp.set_objective(y, integer(c.1));
            for (i, &(a, b, r)) in rows.iter().enumerate() {
                lp.add_row(format!("r{i}"), [(x, integer(a)), (y, integer(b))], Sense::Le, integer(r));
            }
            let sol = simplex_solve(&lp);
            match grid_opt(c, &rows) {
                Some(v) => prop_assert_eq!(sol.objective, Some(v)),
                None => prop_assert_eq!(sol.status, LpStatus::Infeasible),
            }
        }
    }
}
