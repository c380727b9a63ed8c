//! Newton polytope vertex tests and simplex covers of the inner terms.

use num_traits::{One, Signed, Zero};

use super::lp::{solve_lp_exact, LinearProgram, LpOutcome, Relation};
use super::matrix::RationalMatrix;
use crate::poly::{Exponent, SparsePolynomial, SupportPartition};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("inner exponent {0:?} lies outside the hull of the monomial squares")]
    CoverFailure(Exponent),
    #[error("inner exponent {0:?} lies on a face of the square hull avoiding the origin")]
    DegenerateCover(Exponent),
    #[error("weights violate the convex combination precondition: {0}")]
    Precondition(String),
}

/// One circuit: inner exponent `beta` written as a convex combination of
/// the support points with positive weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitCover {
    pub beta: Exponent,
    /// Support exponents; when present the origin comes first.
    pub support: Vec<Exponent>,
    pub lambda: Vec<Rational>,
}

impl CircuitCover {
    pub fn origin_weight(&self) -> Option<&Rational> {
        self.support
            .iter()
            .position(|a| a.iter().all(|&e| e == 0))
            .map(|i| &self.lambda[i])
    }

    /// Exact check of `sum lambda a = beta`, `sum lambda = 1`, positivity and
    /// affine independence.
    pub fn check(&self) -> Result<(), String> {
        if self.support.len() != self.lambda.len() || self.support.is_empty() {
            return Err("support and weights differ in length".into());
        }
        if self.lambda.iter().any(|l| !l.is_positive()) {
            return Err("nonpositive barycentric weight".into());
        }
        if self.lambda.iter().sum::<Rational>() != Rational::one() {
            return Err("weights do not sum to one".into());
        }
        let n = self.beta.len();
        for k in 0..n {
            let s: Rational = self
                .support
                .iter()
                .zip(&self.lambda)
                .map(|(a, l)| l * rational::int(a[k] as i64))
                .sum();
            if s != rational::int(self.beta[k] as i64) {
                return Err(format!("convex combination misses coordinate {k}"));
            }
        }
        if !affinely_independent(&self.support) {
            return Err("support points are affinely dependent".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cover {
    pub circuits: Vec<CircuitCover>,
}

impl Cover {
    pub fn check(&self) -> Result<(), String> {
        for c in &self.circuits {
            c.check()
                .map_err(|e| format!("circuit {:?}: {e}", c.beta))?;
        }
        Ok(())
    }
}

/// Columns `(a, 1)` as a matrix with one column per point.
fn lifted(points: &[Exponent], n: usize) -> RationalMatrix {
    RationalMatrix::from_fn(n + 1, points.len(), |i, j| {
        if i < n {
            rational::int(points[j][i] as i64)
        } else {
            Rational::one()
        }
    })
}

pub fn affinely_independent(points: &[Exponent]) -> bool {
    let n = points.first().map_or(0, Vec::len);
    lifted(points, n).rank() == points.len()
}

/// Solves for nonnegative weights on `points` reproducing `target`,
/// maximising the weight of `prefer` when given.
fn convex_weights(
    target: &[i32],
    points: &[Exponent],
    prefer: Option<usize>,
) -> Option<Vec<Rational>> {
    let n = target.len();
    let mut objective = vec![Rational::zero(); points.len()];
    if let Some(p) = prefer {
        objective[p] = Rational::one();
    }
    let mut lp = LinearProgram::new(points.len()).maximize(objective);
    for k in 0..n {
        lp.add_constraint(
            points.iter().map(|a| rational::int(a[k] as i64)).collect(),
            Relation::Eq,
            rational::int(target[k] as i64),
        );
    }
    lp.add_constraint(
        vec![Rational::one(); points.len()],
        Relation::Eq,
        Rational::one(),
    );
    match solve_lp_exact(&lp).expect("well-formed convex hull LP") {
        LpOutcome::Feasible { x, .. } => Some(x),
        _ => None,
    }
}

/// Indices of terms whose exponent is a vertex of the Newton polytope.
pub fn newton_vertices(p: &SparsePolynomial) -> Vec<usize> {
    let points: Vec<Exponent> = p.exponents().cloned().collect();
    (0..points.len())
        .filter(|&i| {
            let others: Vec<Exponent> = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, a)| a.clone())
                .collect();
            others.is_empty() || convex_weights(&points[i], &others, None).is_none()
        })
        .collect()
}

/// Carathéodory reduction: repeatedly moves along an affine dependence
/// until the remaining support is affinely independent.
pub fn reduce_to_affinely_independent(
    point: &[i32],
    supports: &[Exponent],
    weights: &[Rational],
) -> Result<(Vec<Exponent>, Vec<Rational>), CoverError> {
    if supports.len() != weights.len() {
        return Err(CoverError::Precondition("length mismatch".into()));
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(CoverError::Precondition("weights must be positive".into()));
    }
    if weights.iter().sum::<Rational>() != Rational::one() {
        return Err(CoverError::Precondition("weights must sum to one".into()));
    }
    let n = point.len();
    for k in 0..n {
        let s: Rational = supports
            .iter()
            .zip(weights)
            .map(|(a, w)| w * rational::int(a[k] as i64))
            .sum();
        if s != rational::int(point[k] as i64) {
            return Err(CoverError::Precondition(
                "weights do not reproduce the point".into(),
            ));
        }
    }
    let mut pts = supports.to_vec();
    let mut w = weights.to_vec();
    loop {
        let ns = lifted(&pts, n).null_space();
        let Some(mut mu) = ns.into_iter().next() else {
            return Ok((pts, w));
        };
        if !mu.iter().any(Signed::is_positive) {
            mu.iter_mut().for_each(|v| *v = -v.clone());
        }
        // largest step keeping all weights nonnegative; ties drop the first
        let (drop, theta) = mu
            .iter()
            .zip(&w)
            .enumerate()
            .filter(|(_, (m, _))| m.is_positive())
            .map(|(i, (m, wi))| (i, wi / m))
            .fold(None::<(usize, Rational)>, |best, (i, t)| match best {
                Some((_, ref bt)) if *bt <= t => best,
                _ => Some((i, t)),
            })
            .expect("dependence has a positive entry");
        for (wi, m) in w.iter_mut().zip(&mu) {
            *wi -= &theta * m;
        }
        w[drop] = Rational::zero();
        let keep: Vec<usize> = (0..w.len()).filter(|&i| w[i].is_positive()).collect();
        pts = keep.iter().map(|&i| pts[i].clone()).collect();
        w = keep.iter().map(|&i| w[i].clone()).collect();
    }
}

/// Simplex cover of every non-square term by monomial squares, with the
/// origin always admitted as a support point and its weight maximised.
pub fn compute_cover(
    p: &SparsePolynomial,
    partition: &SupportPartition,
) -> Result<Cover, CoverError> {
    let n = p.num_vars();
    let origin = vec![0i32; n];
    let mut candidates: Vec<Exponent> = vec![origin.clone()];
    candidates.extend(
        partition
            .mosq
            .iter()
            .map(|&i| p.exponent(i).to_vec())
            .filter(|a| *a != origin),
    );
    let mut circuits = Vec::with_capacity(partition.nosq.len());
    for &bi in &partition.nosq {
        let beta = p.exponent(bi).to_vec();
        let x = convex_weights(&beta, &candidates, Some(0))
            .ok_or_else(|| CoverError::CoverFailure(beta.clone()))?;
        if x[0].is_zero() {
            return Err(CoverError::DegenerateCover(beta));
        }
        let used: Vec<usize> = (0..x.len()).filter(|&i| x[i].is_positive()).collect();
        let pts: Vec<Exponent> = used.iter().map(|&i| candidates[i].clone()).collect();
        let ws: Vec<Rational> = used.iter().map(|&i| x[i].clone()).collect();
        let (support, lambda) = reduce_to_affinely_independent(&beta, &pts, &ws)?;
        let circuit = CircuitCover {
            beta,
            support,
            lambda,
        };
        debug_assert!(circuit.check().is_ok());
        if circuit.origin_weight().is_none() {
            return Err(CoverError::DegenerateCover(circuit.beta));
        }
        circuits.push(circuit);
    }
    Ok(Cover { circuits })
}
