//! Exact certificates from numeric SONC and SAGE solutions, and their
//! verifiers.

mod certificate;
mod sage;
mod sonc;

use std::time::Duration;

pub use certificate::{Certificate, CertificateError, SageCertificate, SoncCertificate};
pub use sage::{intsage, optsage, verify_sage, IntsageRun, Reduction, SageRun, DEFAULT_MAX_ROUNDS};
pub use sonc::{optsonc, verify_sonc, SoncRun};

use crate::cone::SolverFailure;
use crate::linalg::CoverError;
use crate::poly::{Exponent, PolyError};
use crate::rational::{self, Rational};
use crate::rigorous::RigorousError;

/// Rounding accuracy `delta_hat` and solver accuracy `delta_tilde`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub delta_hat: Rational,
    pub delta_tilde: Rational,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            delta_hat: rational::pow2(-23),
            delta_tilde: rational::pow2(-23),
        }
    }
}

impl Settings {
    pub fn tolerance(&self) -> f64 {
        rational::to_f64(&self.delta_tilde)
    }
}

/// Wall-clock split: the numeric solve, and everything after it returns.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Timings {
    pub solve: Duration,
    pub round: Duration,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CertifyError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Solver(#[from] SolverFailure),
    #[error("no rounded mass left in column {0:?}")]
    ZeroColumn(Exponent),
    #[error("projection LP of block {0} is infeasible")]
    ProjectionLpInfeasible(usize),
    #[error(transparent)]
    Domain(#[from] RigorousError),
    #[error("no certificate after {0} rounds")]
    MaxRoundsExceeded(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl CertifyError {
    /// Short machine-readable status tag.
    pub fn status(&self) -> &'static str {
        match self {
            CertifyError::Cover(_) => "cover-failure",
            CertifyError::Solver(_) => "solver-failure",
            CertifyError::ZeroColumn(_) => "zero-column",
            CertifyError::ProjectionLpInfeasible(_) => "projection-lp-infeasible",
            CertifyError::Domain(_) => "domain-error",
            CertifyError::MaxRoundsExceeded(_) => "max-rounds-exceeded",
            CertifyError::Poly(_) => "polynomial-error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(String),
    /// An entropy inequality could not be decided at the precision cap.
    Inconclusive(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Rounds a positive float, falling back to a purely relative band when
/// the absolute one would swallow it.
pub(crate) fn round_positive(x: f64, delta: &Rational) -> Option<Rational> {
    use num_traits::Signed;
    if !(x > 0.0 && x.is_finite()) {
        return None;
    }
    let q = crate::rigorous::round_rational(x, delta);
    if q.is_positive() {
        return Some(q);
    }
    let exact = rational::from_f64(x)?;
    let one = Rational::from_integer(1.into());
    Some(rational::simplest_in(
        &(&exact * (&one - delta)),
        &(&exact * (&one + delta)),
    ))
}
