//! Exact two-phase simplex with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bound {
    pub fn nonneg() -> Self {
        Self {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }

    pub fn free() -> Self {
        Self {
            lower: None,
            upper: None,
        }
    }
}

/// `maximize objective . x` subject to linear rows and per-variable bounds.
/// Variables default to `x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    bounds: Vec<Bound>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible {
        x: Vec<Rational>,
        objective: Rational,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Feasible { x, .. } => Some(x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("row {row} has {found} coefficients for {expected} variables")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("variable {0} has lower bound above upper bound")]
    EmptyBounds(usize),
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            bounds: vec![Bound::nonneg(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn maximize(mut self, objective: Vec<Rational>) -> Self {
        self.objective = objective;
        self
    }

    pub fn constraint(mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn bound(mut self, var: usize, bound: Bound) -> Self {
        self.bounds[var] = bound;
        self
    }

    pub fn set_bound(&mut self, var: usize, bound: Bound) {
        self.bounds[var] = bound;
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    fn validate(&self) -> Result<(), LpError> {
        if self.objective.len() != self.num_vars {
            return Err(LpError::DimensionMismatch {
                row: usize::MAX,
                expected: self.num_vars,
                found: self.objective.len(),
            });
        }
        for (row, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(LpError::DimensionMismatch {
                    row,
                    expected: self.num_vars,
                    found: c.coeffs.len(),
                });
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if let (Some(l), Some(u)) = (&b.lower, &b.upper) {
                if l > u {
                    return Err(LpError::EmptyBounds(j));
                }
            }
        }
        Ok(())
    }
}

/// How an original variable is expressed through standard-form columns:
/// `x = offset + sum sign * column`.
struct VarMap {
    offset: Rational,
    parts: Vec<(usize, bool)>,
}

pub fn solve_lp_exact(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let mut maps = Vec::with_capacity(lp.num_vars);
    let mut ncols = 0usize;
    // rows of the form column <= cap produced by two-sided bounds
    let mut caps: Vec<(usize, Rational)> = Vec::new();
    for b in &lp.bounds {
        let map = match (&b.lower, &b.upper) {
            (Some(l), u) => {
                if let Some(u) = u {
                    caps.push((ncols, u - l));
                }
                VarMap {
                    offset: l.clone(),
                    parts: vec![(ncols, true)],
                }
            }
            (None, Some(u)) => VarMap {
                offset: u.clone(),
                parts: vec![(ncols, false)],
            },
            (None, None) => {
                ncols += 1;
                VarMap {
                    offset: Rational::zero(),
                    parts: vec![(ncols - 1, true), (ncols, false)],
                }
            }
        };
        ncols += 1;
        maps.push(map);
    }

    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &lp.constraints {
        let mut row = vec![Rational::zero(); ncols];
        let mut rhs = c.rhs.clone();
        for (a, map) in c.coeffs.iter().zip(&maps) {
            if a.is_zero() {
                continue;
            }
            rhs -= a * &map.offset;
            for &(col, pos) in &map.parts {
                if pos {
                    row[col] += a;
                } else {
                    row[col] -= a;
                }
            }
        }
        rows.push((row, c.relation, rhs));
    }
    for (col, cap) in caps {
        let mut row = vec![Rational::zero(); ncols];
        row[col] = Rational::one();
        rows.push((row, Relation::Le, cap));
    }

    let mut cost = vec![Rational::zero(); ncols];
    for (c, map) in lp.objective.iter().zip(&maps) {
        for &(col, pos) in &map.parts {
            // minimize the negated objective
            if pos {
                cost[col] -= c;
            } else {
                cost[col] += c;
            }
        }
    }
    let offset_value: Rational = lp
        .objective
        .iter()
        .zip(&maps)
        .map(|(c, m)| c * &m.offset)
        .sum();

    let std = match StandardSimplex::build(ncols, rows).solve(&cost) {
        Phase::Optimal(x) => x,
        Phase::Infeasible => return Ok(LpOutcome::Infeasible),
        Phase::Unbounded => return Ok(LpOutcome::Unbounded),
    };
    let x: Vec<Rational> = maps
        .iter()
        .map(|m| {
            m.parts.iter().fold(m.offset.clone(), |acc, &(col, pos)| {
                if pos {
                    acc + &std[col]
                } else {
                    acc - &std[col]
                }
            })
        })
        .collect();
    let objective = lp
        .objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .sum::<Rational>();
    debug_assert_eq!(
        objective.clone(),
        offset_value - cost.iter().zip(&std).map(|(c, v)| c * v).sum::<Rational>()
    );
    Ok(LpOutcome::Feasible { x, objective })
}

enum Phase {
    Optimal(Vec<Rational>),
    Infeasible,
    Unbounded,
}

/// Dense tableau for `min cost . x, A x = b, x >= 0, b >= 0` with slack and
/// artificial columns appended after the structural ones.
struct StandardSimplex {
    structural: usize,
    total: usize,
    artificial_start: usize,
    tableau: Vec<Vec<Rational>>,
    basis: Vec<usize>,
}

impl StandardSimplex {
    fn build(structural: usize, rows: Vec<(Vec<Rational>, Relation, Rational)>) -> Self {
        let m = rows.len();
        let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let mut slack_of = Vec::with_capacity(m);
        let mut next = structural;
        for r in &rows {
            if r.1 == Relation::Eq {
                slack_of.push(None);
            } else {
                slack_of.push(Some(next));
                next += 1;
            }
        }
        let artificial_start = structural + slacks;
        // first pass decides which rows need an artificial
        let mut normalized = Vec::with_capacity(m);
        let mut needs_art = 0;
        for (i, (row, rel, rhs)) in rows.into_iter().enumerate() {
            let mut full = row;
            full.resize(artificial_start, Rational::zero());
            if let Some(s) = slack_of[i] {
                full[s] = if rel == Relation::Le {
                    Rational::one()
                } else {
                    -Rational::one()
                };
            }
            let (full, rhs) = if rhs.is_negative() {
                (full.into_iter().map(|v| -v).collect::<Vec<_>>(), -rhs)
            } else {
                (full, rhs)
            };
            let slack_basic = slack_of[i].filter(|&s| full[s].is_one());
            if slack_basic.is_none() {
                needs_art += 1;
            }
            normalized.push((full, rhs, slack_basic));
        }
        let total = artificial_start + needs_art;
        let mut tableau = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut art = artificial_start;
        for (mut full, rhs, slack_basic) in normalized {
            full.resize(total, Rational::zero());
            match slack_basic {
                Some(s) => basis.push(s),
                None => {
                    full[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
            }
            full.push(rhs);
            tableau.push(full);
        }
        Self {
            structural,
            total,
            artificial_start,
            tableau,
            basis,
        }
    }

    fn reduced_costs(&self, cost: &[Rational], allowed: usize) -> Vec<Rational> {
        let width = self.total + 1;
        let mut d: Vec<Rational> = (0..width)
            .map(|j| {
                if j < allowed {
                    cost[j].clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        for (row, &b) in self.tableau.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (dj, t) in d.iter_mut().zip(row) {
                if !t.is_zero() {
                    *dj -= cb * t;
                }
            }
        }
        d
    }

    fn pivot(&mut self, d: &mut [Rational], r: usize, c: usize) {
        let inv = self.tableau[r][c].recip();
        for v in self.tableau[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.tableau[r].clone();
        for (i, row) in self.tableau.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !d[c].is_zero() {
            let f = d[c].clone();
            for (v, p) in d.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule iterations over columns `< allowed`. Returns false when
    /// unbounded.
    fn iterate(&mut self, d: &mut [Rational], allowed: usize) -> bool {
        let rhs = self.total;
        loop {
            let Some(c) = (0..allowed).find(|&j| d[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.tableau.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(d, r, c);
        }
    }

    fn solve(mut self, cost: &[Rational]) -> Phase {
        let rhs = self.total;
        if self.total > self.artificial_start {
            let phase1: Vec<Rational> = (0..self.total)
                .map(|j| {
                    if j >= self.artificial_start {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let mut d = self.reduced_costs(&phase1, self.total);
            let bounded = self.iterate(&mut d, self.total);
            debug_assert!(bounded, "phase one is bounded below by zero");
            if !d[rhs].is_zero() {
                return Phase::Infeasible;
            }
            // drive remaining artificials out of the basis or drop their rows
            let mut i = 0;
            while i < self.tableau.len() {
                if self.basis[i] < self.artificial_start {
                    i += 1;
                    continue;
                }
                match (0..self.artificial_start).find(|&j| !self.tableau[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(&mut d, i, j);
                        i += 1;
                    }
                    None => {
                        self.tableau.remove(i);
                        self.basis.remove(i);
                    }
                }
            }
        }
        let mut full_cost = cost.to_vec();
        full_cost.resize(self.total, Rational::zero());
        let allowed = self.artificial_start;
        let mut d = self.reduced_costs(&full_cost, allowed);
        if !self.iterate(&mut d, allowed) {
            return Phase::Unbounded;
        }
        let mut x = vec![Rational::zero(); self.structural];
        for (row, &b) in self.tableau.iter().zip(&self.basis) {
            if b < self.structural {
                x[b] = row[rhs].clone();
            }
        }
        Phase::Optimal(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn trivial_examples() {
        let lp = LinearProgram::new(1).constraint(vec![int(1)], Relation::Eq, int(1));
        assert_eq!(
            solve_lp_exact(&lp).unwrap(),
            LpOutcome::Feasible {
                x: vec![int(1)],
                objective: int(0)
            }
        );
        let unb = LinearProgram::new(1).maximize(vec![int(1)]);
        assert_eq!(solve_lp_exact(&unb).unwrap(), LpOutcome::Unbounded);
        let inf = LinearProgram::new(1).constraint(vec![int(1)], Relation::Le, int(-1));
        assert_eq!(solve_lp_exact(&inf).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn motzkin_covering_lp() {
        // lambda over (0,0), (4,2), (2,4) with sum lambda alpha = (2,2)
        let lp = LinearProgram::new(3)
            .maximize(vec![int(1), int(0), int(0)])
            .constraint(vec![int(0), int(4), int(2)], Relation::Eq, int(2))
            .constraint(vec![int(0), int(2), int(4)], Relation::Eq, int(2))
            .constraint(vec![int(1), int(1), int(1)], Relation::Eq, int(1));
        let out = solve_lp_exact(&lp).unwrap();
        assert_eq!(
            out.point().unwrap(),
            &[ratio(1, 3), ratio(1, 3), ratio(1, 3)]
        );
    }

    #[test]
    fn bounds_and_free_variables() {
        // max x - y, x in [-2, 3], y free, y >= x - 10, y >= -x
        let lp = LinearProgram::new(2)
            .maximize(vec![int(1), int(-1)])
            .bound(
                0,
                Bound {
                    lower: Some(int(-2)),
                    upper: Some(int(3)),
                },
            )
            .bound(1, Bound::free())
            .constraint(vec![int(-1), int(1)], Relation::Ge, int(-10))
            .constraint(vec![int(1), int(1)], Relation::Ge, int(0));
        let out = solve_lp_exact(&lp).unwrap();
        assert_eq!(out.point().unwrap(), &[int(3), int(-3)]);
        let upper_only = LinearProgram::new(1).maximize(vec![int(1)]).bound(
            0,
            Bound {
                lower: None,
                upper: Some(ratio(7, 2)),
            },
        );
        assert_eq!(
            solve_lp_exact(&upper_only).unwrap().point().unwrap(),
            &[ratio(7, 2)]
        );
        let bad = LinearProgram::new(1).bound(
            0,
            Bound {
                lower: Some(int(1)),
                upper: Some(int(0)),
            },
        );
        assert!(solve_lp_exact(&bad).is_err());
    }

    #[test]
    fn redundant_equalities() {
        let lp = LinearProgram::new(2)
            .maximize(vec![int(1), int(0)])
            .constraint(vec![int(1), int(1)], Relation::Eq, int(1))
            .constraint(vec![int(2), int(2)], Relation::Eq, int(2));
        assert_eq!(
            solve_lp_exact(&lp).unwrap().point().unwrap(),
            &[int(1), int(0)]
        );
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's classic cycling instance; Bland's rule must terminate.
        let lp = LinearProgram::new(4)
            .maximize(vec![ratio(3, 4), int(-150), ratio(1, 50), int(-6)])
            .constraint(
                vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)],
                Relation::Le,
                int(0),
            )
            .constraint(
                vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)],
                Relation::Le,
                int(0),
            )
            .constraint(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1));
        match solve_lp_exact(&lp).unwrap() {
            LpOutcome::Feasible { objective, .. } => assert_eq!(objective, ratio(1, 20)),
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn optimum_is_feasible_and_beats_vertices(
            raw in prop::collection::vec(prop::collection::vec(-5i64..6, 4), 3),
            rhs in prop::collection::vec(0i64..10, 3),
            obj in prop::collection::vec(-5i64..6, 3),
        ) {
            // 3 variables in [0, 4]^3 so the LP is always bounded
            let mut lp = LinearProgram::new(3).maximize(obj.iter().map(|&v| int(v)).collect());
            for j in 0..3 {
                lp.set_bound(j, Bound { lower: Some(int(0)), upper: Some(int(4)) });
            }
            for (row, b) in raw.iter().zip(&rhs) {
                lp.add_constraint(row[..3].iter().map(|&v| int(v)).collect(), Relation::Le, int(*b));
            }
            match solve_lp_exact(&lp).unwrap() {
                LpOutcome::Feasible { x, objective } => {
                    for (row, b) in raw.iter().zip(&rhs) {
                        let lhs: Rational = row[..3].iter().zip(&x).map(|(a, v)| int(*a) * v).sum();
                        prop_assert!(lhs <= int(*b));
                    }
                    // every integer grid point in the box is no better
                    for a in 0..5 { for b in 0..5 { for c in 0..5 {
                        let p = [a, b, c];
                        let ok = raw.iter().zip(&rhs).all(|(row, r)| {
                            row[..3].iter().zip(&p).map(|(u, v)| u * v).sum::<i64>() <= *r
                        });
                        if ok {
                            let val: i64 = obj.iter().zip(&p).map(|(u, v)| u * v).sum();
                            prop_assert!(int(val) <= objective);
                        }
                    }}}
                }
                // origin is always feasible
                other => prop_assert!(false, "unexpected {:?}", other),
            }
        }
    }
}
