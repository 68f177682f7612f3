//! Bidirected constraint systems `d ≤ x ≤ c, a ≤ Mx ≤ b` with `Σ_i |M_ij| ≤ 2`
//! and their odd-set (blossom) inequalities.
//!
//! For disjoint row sets `U, W` and a partition `F, H` of
//! `δ(U ∪ W) = {j : Σ_{i∈U∪W} |M_ij| = 1}` with `K = b(U) − a(W) + c(F) − d(H)` odd,
//! the inequality is `½((χ_U − χ_W)M + χ_F − χ_H)x ≤ (K − 1)/2`. Every
//! coefficient on the left is even before halving, so cuts are stored with
//! integer coefficients. Bounds that are infinite exclude their row or column
//! from `U`, `W`, `F` or `H`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::program::{Direction, LinearProgram, Sense};
use crate::{integer, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemRow {
    pub name: String,
    pub coeffs: Vec<(usize, i64)>,
    pub lower: Option<i64>,
    pub upper: Option<i64>,
}

impl SystemRow {
    fn is_equality(&self) -> bool {
        self.lower.is_some() && self.lower == self.upper
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemColumn {
    pub name: String,
    pub lower: Option<i64>,
    pub upper: Option<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BidirectedSystem {
    pub rows: Vec<SystemRow>,
    pub columns: Vec<SystemColumn>,
}

/// One odd-set inequality `Σ coeffs·x ≤ rhs` together with the sets producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlossomCut {
    pub u: Vec<usize>,
    pub w: Vec<usize>,
    pub f: Vec<usize>,
    pub h: Vec<usize>,
    pub coeffs: Vec<(usize, i64)>,
    pub rhs: i64,
}

impl BlossomCut {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, a)| integer(*a) * &x[*j]).sum()
    }

    pub fn is_satisfied_by(&self, x: &[i64]) -> bool {
        self.coeffs.iter().map(|(j, a)| a * x[*j]).sum::<i64>() <= self.rhs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_rows: usize,
    pub max_cuts: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_rows: 12, max_cuts: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BlossomError {
    #[error("system has {rows} rows, enumeration limit is {limit}")]
    TooManyRows { rows: usize, limit: usize },
    #[error("more than {limit} cuts")]
    TooManyCuts { limit: usize },
}

/// Where a row goes in a cut.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Out,
    U,
    W,
}

impl BidirectedSystem {
    pub fn add_column(&mut self, name: impl Into<String>, lower: Option<i64>, upper: Option<i64>) -> usize {
        self.columns.push(SystemColumn { name: name.into(), lower, upper });
        self.columns.len() - 1
    }

    pub fn add_row(&mut self, name: impl Into<String>, coeffs: Vec<(usize, i64)>, lower: Option<i64>, upper: Option<i64>) {
        self.rows.push(SystemRow { name: name.into(), coeffs, lower, upper });
    }

    /// First column whose absolute coefficient sum exceeds two.
    pub fn check_bidirected(&self) -> Result<(), usize> {
        let sums = self.column_weights();
        match sums.iter().position(|&s| s > 2) {
            Some(j) => Err(j),
            None => Ok(()),
        }
    }

    pub fn column_weights(&self) -> Vec<i64> {
        let mut sums = vec![0; self.columns.len()];
        for row in &self.rows {
            for (j, a) in &row.coeffs {
                sums[*j] += a.abs();
            }
        }
        sums
    }

    /// The system as an LP with the given objective (maximized).
    pub fn to_program(&self, objective: &[(usize, i64)]) -> LinearProgram {
        let mut lp = LinearProgram::new(Direction::Maximize);
        for col in &self.columns {
            lp.add_column(col.name.clone(), col.lower.map(integer), col.upper.map(integer));
        }
        for (j, w) in objective {
            lp.set_objective(*j, integer(*w));
        }
        for row in &self.rows {
            let coeffs = row.coeffs.iter().map(|(j, a)| (*j, integer(*a)));
            match (row.lower, row.upper) {
                (Some(l), Some(u)) if l == u => {
                    lp.add_row(row.name.clone(), coeffs, Sense::Eq, integer(l));
                }
                (l, u) => {
                    let coeffs: Vec<_> = coeffs.collect();
                    if let Some(u) = u {
                        lp.add_row(format!("{}:ub", row.name), coeffs.clone(), Sense::Le, integer(u));
                    }
                    if let Some(l) = l {
                        lp.add_row(format!("{}:lb", row.name), coeffs, Sense::Ge, integer(l));
                    }
                }
            }
        }
        lp
    }

    /// Sides each row may take. Rows with `a = b` only go into `U`: for them the
    /// `W` version of a cut differs from the `U` version by a multiple of the
    /// row itself, so it cuts off nothing more.
    fn row_options(&self) -> Vec<Vec<Side>> {
        self.rows
            .iter()
            .map(|r| {
                let mut opts = vec![Side::Out];
                if r.upper.is_some() {
                    opts.push(Side::U);
                }
                if r.lower.is_some() && !r.is_equality() {
                    opts.push(Side::W);
                }
                opts
            })
            .collect()
    }

    /// Calls `visit` for every assignment of rows to sides with `U ∪ W` nonempty.
    fn for_each_row_choice(&self, mut visit: impl FnMut(&[Side]) -> bool) {
        let options = self.row_options();
        let m = self.rows.len();
        let mut digits = vec![0usize; m];
        let mut sides = vec![Side::Out; m];
        loop {
            let mut i = 0;
            while i < m {
                digits[i] += 1;
                if digits[i] < options[i].len() {
                    sides[i] = options[i][digits[i]];
                    break;
                }
                digits[i] = 0;
                sides[i] = Side::Out;
                i += 1;
            }
            if i == m {
                return;
            }
            if !visit(&sides) {
                return;
            }
        }
    }

    /// Signed column sums `(χ_U − χ_W)M`, absolute sums over `U ∪ W`, and `b(U) − a(W)`.
    fn combine(&self, sides: &[Side]) -> (Vec<i64>, Vec<i64>, i64) {
        let n = self.columns.len();
        let mut signed = vec![0; n];
        let mut weight = vec![0; n];
        let mut bound = 0;
        for (row, side) in self.rows.iter().zip(sides) {
            let sign = match side {
                Side::Out => continue,
                Side::U => {
                    bound += row.upper.expect("U rows have finite upper bounds");
                    1
                }
                Side::W => {
                    bound -= row.lower.expect("W rows have finite lower bounds");
                    -1
                }
            };
            for (j, a) in &row.coeffs {
                signed[*j] += sign * a;
                weight[*j] += a.abs();
            }
        }
        (signed, weight, bound)
    }

    fn make_cut(&self, sides: &[Side], signed: &[i64], f: &[usize], h: &[usize], k: i64) -> BlossomCut {
        let mut coeffs = signed.to_vec();
        for &j in f {
            coeffs[j] += 1;
        }
        for &j in h {
            coeffs[j] -= 1;
        }
        debug_assert!(coeffs.iter().all(|a| a % 2 == 0));
        let pick = |s: Side| sides.iter().enumerate().filter(|(_, x)| **x == s).map(|(i, _)| i).collect();
        BlossomCut {
            u: pick(Side::U),
            w: pick(Side::W),
            f: f.to_vec(),
            h: h.to_vec(),
            coeffs: coeffs.iter().enumerate().filter(|(_, a)| **a != 0).map(|(j, a)| (j, a / 2)).collect(),
            rhs: (k - 1).div_euclid(2),
        }
    }
}

/// All odd-set inequalities of `sys`, deduplicated by their coefficient vector
/// and right-hand side. Inequalities with an all-zero left side are dropped.
pub fn enumerate_blossom_cuts(sys: &BidirectedSystem, limits: EnumerationLimits) -> Result<Vec<BlossomCut>, BlossomError> {
    if sys.rows.len() > limits.max_rows {
        return Err(BlossomError::TooManyRows { rows: sys.rows.len(), limit: limits.max_rows });
    }
    let mut seen: BTreeSet<(Vec<(usize, i64)>, i64)> = BTreeSet::new();
    let mut cuts = Vec::new();
    let mut overflow = false;
    sys.for_each_row_choice(|sides| {
        let (signed, weight, bound) = sys.combine(sides);
        let delta: Vec<usize> = (0..weight.len()).filter(|&j| weight[j] == 1).collect();
        if delta.len() > 24 {
            overflow = true;
            return false;
        }
        for mask in 0u32..(1 << delta.len()) {
            let mut k = bound;
            let (mut f, mut h) = (Vec::new(), Vec::new());
            let mut finite = true;
            for (bit, &j) in delta.iter().enumerate() {
                let col = &sys.columns[j];
                let value = if mask >> bit & 1 == 1 {
                    f.push(j);
                    col.upper
                } else {
                    h.push(j);
                    col.lower.map(|d| -d)
                };
                match value {
                    Some(v) => k += v,
                    None => {
                        finite = false;
                        break;
                    }
                }
            }
            if !finite || k.rem_euclid(2) != 1 {
                continue;
            }
            let cut = sys.make_cut(sides, &signed, &f, &h, k);
            if cut.coeffs.is_empty() && cut.rhs >= 0 {
                continue;
            }
            if seen.insert((cut.coeffs.clone(), cut.rhs)) {
                cuts.push(cut);
                if cuts.len() > limits.max_cuts {
                    overflow = true;
                    return false;
                }
            }
        }
        true
    });
    if overflow {
        return Err(BlossomError::TooManyCuts { limit: limits.max_cuts });
    }
    Ok(cuts)
}

/// For each row choice, the most violated odd-set inequality at `x` (if any),
/// sorted by decreasing violation. `x` must satisfy the system's own rows.
///
/// With slack `s = b(U) − a(W) − (χ_U − χ_W)Mx`, an inequality is violated iff
/// `s + Σ_F (c_j − x_j) + Σ_H (x_j − d_j) < 1`; the best `F, H` split for a
/// given parity is found by a two-state dynamic program over `δ(U ∪ W)`.
pub fn separate(sys: &BidirectedSystem, x: &[Rational], max_rows: usize) -> Result<Vec<(Rational, BlossomCut)>, BlossomError> {
    if sys.rows.len() > max_rows {
        return Err(BlossomError::TooManyRows { rows: sys.rows.len(), limit: max_rows });
    }
    let one = Rational::one();
    let mut found: Vec<(Rational, BlossomCut)> = Vec::new();
    let mut seen: BTreeSet<(Vec<(usize, i64)>, i64)> = BTreeSet::new();
    sys.for_each_row_choice(|sides| {
        let (signed, weight, bound) = sys.combine(sides);
        let activity: Rational = signed.iter().zip(x).filter(|(a, _)| **a != 0).map(|(a, v)| integer(*a) * v).sum();
        let slack = integer(bound) - activity;
        if slack >= one {
            return true;
        }
        // best[p] = (cost, choices) for parity p of the F/H contribution.
        type State = Option<(Rational, Vec<bool>)>;
        let mut best: [State; 2] = [Some((Rational::zero(), Vec::new())), None];
        for j in (0..weight.len()).filter(|&j| weight[j] == 1) {
            let col = &sys.columns[j];
            let options = [
                col.upper.map(|c| (integer(c) - &x[j], c.rem_euclid(2) as usize, true)),
                col.lower.map(|d| (&x[j] - integer(d), (-d).rem_euclid(2) as usize, false)),
            ];
            let mut next: [State; 2] = [None, None];
            for (p, state) in best.iter().enumerate() {
                let Some((cost, picks)) = state else { continue };
                for (extra, parity, in_f) in options.iter().flatten() {
                    let q = (p + parity) % 2;
                    let total = cost + extra;
                    if next[q].as_ref().is_none_or(|(c, _)| total < *c) {
                        let mut picks = picks.clone();
                        picks.push(*in_f);
                        next[q] = Some((total, picks));
                    }
                }
            }
            best = next;
            if best.iter().all(Option::is_none) {
                return true;
            }
        }
        let need = (1 - bound.rem_euclid(2)) as usize;
        let Some((cost, picks)) = &best[need] else { return true };
        let total = &slack + cost;
        if total >= one {
            return true;
        }
        let delta: Vec<usize> = (0..weight.len()).filter(|&j| weight[j] == 1).collect();
        let f: Vec<usize> = delta.iter().zip(picks).filter(|(_, p)| **p).map(|(j, _)| *j).collect();
        let h: Vec<usize> = delta.iter().zip(picks).filter(|(_, p)| !**p).map(|(j, _)| *j).collect();
        let k = bound
            + f.iter().map(|&j| sys.columns[j].upper.unwrap()).sum::<i64>()
            - h.iter().map(|&j| sys.columns[j].lower.unwrap()).sum::<i64>();
        let cut = sys.make_cut(sides, &signed, &f, &h, k);
        if seen.insert((cut.coeffs.clone(), cut.rhs)) {
            found.push(((&one - total) / integer(2), cut));
        }
        true
    });
    found.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(found)
}

/// Outcome of solving a system's LP with odd-set inequalities added on demand.
#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub objective: Rational,
    pub values: Vec<Rational>,
    pub cuts: Vec<BlossomCut>,
    pub rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ClosureError {
    #[error(transparent)]
    Blossom(#[from] BlossomError),
    #[error("relaxation is infeasible")]
    Infeasible,
    #[error("relaxation is unbounded")]
    Unbounded,
    #[error("no convergence within {0} rounds")]
    RoundLimit(usize),
}

/// Maximizes `objective` over the system plus every odd-set inequality. Cuts
/// are separated exactly and added until none is violated, so the result is
/// the optimum over the full family.
pub fn solve_with_blossom_closure(
    sys: &BidirectedSystem,
    objective: &[(usize, i64)],
    max_rows: usize,
    max_rounds: usize,
) -> Result<ClosureResult, ClosureError> {
    let mut lp = sys.to_program(objective);
    let mut cuts = Vec::new();
    for round in 0..max_rounds {
        let sol = super::simplex::simplex_solve(&lp);
        match sol.status {
            super::LpStatus::Infeasible => return Err(ClosureError::Infeasible),
            super::LpStatus::Unbounded => return Err(ClosureError::Unbounded),
            super::LpStatus::Optimal => {}
        }
        let violated = separate(sys, &sol.values, max_rows)?;
        if violated.is_empty() {
            return Ok(ClosureResult {
                objective: sol.objective.expect("optimal"),
                values: sol.values,
                cuts,
                rounds: round,
            });
        }
        for (_, cut) in violated.into_iter().take(8) {
            lp.add_row(
                format!("blossom[{}]", cuts.len()),
                cut.coeffs.iter().map(|(j, a)| (*j, integer(*a))),
                Sense::Le,
                integer(cut.rhs),
            );
            cuts.push(cut);
        }
    }
    Err(ClosureError::RoundLimit(max_rounds))
}

/// Cut violation at `x`, positive when violated.
pub fn violation(cut: &BlossomCut, x: &[Rational]) -> Rational {
    let v = cut.lhs(x) - integer(cut.rhs);
    if v.is_negative() {
        Rational::zero()
    } else {
        v
    }
}
