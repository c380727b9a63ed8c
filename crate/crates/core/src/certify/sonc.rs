use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_traits::{One, Signed, Zero};

use super::{round_positive, CertifyError, Settings, SoncCertificate, Timings, Verdict};
use crate::cone::models::build_sonc_gp;
use crate::cone::solve_expcone;
use crate::linalg::{compute_cover, Cover};
use crate::poly::{Exponent, SparsePolynomial, SupportPartition};
use crate::rational::{self, Rational};
use crate::rigorous::{check_circuit_power_leq, round_up_exp_log_linear, Check};

#[derive(Debug, Clone)]
pub struct SoncRun {
    pub certificate: SoncCertificate,
    pub numeric_bound: f64,
    pub timings: Timings,
}

fn coeff_of(p: &SparsePolynomial, a: &[i32]) -> Rational {
    p.index_of(a)
        .map(|i| p.coeff(i).clone())
        .unwrap_or_default()
}

fn is_origin(a: &[i32]) -> bool {
    a.iter().all(|&e| e == 0)
}

/// The constant term is the bound slot, never an inner term.
fn inner_partition(p: &SparsePolynomial) -> SupportPartition {
    let mut partition = p.partition_support();
    partition.nosq.retain(|&i| !is_origin(p.exponent(i)));
    partition
}

/// Lower bound of `p` on `R^n` from a single circuit cover, turned into an
/// exact certificate.
pub fn optsonc(p: &SparsePolynomial, settings: &Settings) -> Result<SoncRun, CertifyError> {
    let started = Instant::now();
    let partition = inner_partition(p);
    let b0 = p.constant_term();
    if partition.nosq.is_empty() {
        return Ok(SoncRun {
            certificate: SoncCertificate {
                cover: Cover::default(),
                x: Vec::new(),
                bound: b0.clone(),
            },
            numeric_bound: rational::to_f64(&b0),
            timings: Timings {
                solve: started.elapsed(),
                round: Default::default(),
            },
        });
    }
    let cover = compute_cover(p, &partition)?;
    let model = build_sonc_gp(p, &cover, settings.tolerance());
    let sol = solve_expcone(&model.program)?;
    let x_num = model.extract(&sol.x);
    let numeric_bound = rational::to_f64(&b0) - sol.objective;
    let solved = Instant::now();

    let mut delta = settings.delta_hat.clone();
    let mut result = round_sonc(p, &cover, &x_num, &delta);
    if let Err(CertifyError::ZeroColumn(_)) = result {
        delta /= rational::int(1024);
        result = round_sonc(p, &cover, &x_num, &delta);
    }
    let certificate = result?;
    Ok(SoncRun {
        certificate,
        numeric_bound,
        timings: Timings {
            solve: solved - started,
            round: solved.elapsed(),
        },
    })
}

fn round_sonc(
    p: &SparsePolynomial,
    cover: &Cover,
    x_num: &[Vec<f64>],
    delta: &Rational,
) -> Result<SoncCertificate, CertifyError> {
    let mut x: Vec<Vec<Rational>> = x_num
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| round_positive(v, delta).unwrap_or_default())
                .collect()
        })
        .collect();

    // scale every used column so that it sums to its coefficient
    let mut columns: BTreeMap<Exponent, Vec<(usize, usize)>> = BTreeMap::new();
    for (k, circuit) in cover.circuits.iter().enumerate() {
        for (a, alpha) in circuit.support.iter().enumerate() {
            if !is_origin(alpha) {
                columns.entry(alpha.clone()).or_default().push((k, a));
            }
        }
    }
    for (alpha, entries) in &columns {
        let total: Rational = entries.iter().map(|&(k, a)| &x[k][a]).sum();
        if total.is_zero() {
            return Err(CertifyError::ZeroColumn(alpha.clone()));
        }
        let b = coeff_of(p, alpha);
        for &(k, a) in entries {
            x[k][a] = &b * &x[k][a] / &total;
        }
        debug_assert_eq!(entries.iter().map(|&(k, a)| &x[k][a]).sum::<Rational>(), b);
    }

    // the origin entry of each circuit is rounded up from its closed form
    let mut bound = p.constant_term();
    for (k, circuit) in cover.circuits.iter().enumerate() {
        let origin = circuit
            .support
            .iter()
            .position(|a| is_origin(a))
            .expect("covers contain the origin");
        let l0 = &circuit.lambda[origin];
        let b_abs = coeff_of(p, &circuit.beta).abs();
        let mut terms = vec![(Rational::one(), l0.clone()), (l0.recip(), b_abs)];
        for (a, l) in circuit.lambda.iter().enumerate() {
            if a != origin {
                if !x[k][a].is_positive() {
                    return Err(CertifyError::ZeroColumn(circuit.support[a].clone()));
                }
                terms.push((l / l0, l / &x[k][a]));
            }
        }
        let value = round_up_exp_log_linear(&Rational::zero(), &terms, delta)?;
        bound -= &value;
        x[k][origin] = value;
    }
    Ok(SoncCertificate {
        cover: cover.clone(),
        x,
        bound,
    })
}

/// Checks a SONC certificate for `p` in exact arithmetic.
pub fn verify_sonc(p: &SparsePolynomial, cert: &SoncCertificate) -> Verdict {
    match check_sonc(p, cert) {
        Ok(()) => Verdict::Valid,
        Err(reason) => Verdict::Invalid(reason),
    }
}

fn check_sonc(p: &SparsePolynomial, cert: &SoncCertificate) -> Result<(), String> {
    let n = p.num_vars();
    let partition = inner_partition(p);
    let squares: BTreeSet<&[i32]> = partition.mosq.iter().map(|&i| p.exponent(i)).collect();
    let mut inner: BTreeSet<&[i32]> = partition.nosq.iter().map(|&i| p.exponent(i)).collect();
    if cert.x.len() != cert.cover.circuits.len() {
        return Err("X has one row per circuit".into());
    }
    let mut columns: BTreeMap<&[i32], Rational> = BTreeMap::new();
    let mut constant_mass = Rational::zero();
    for (circuit, row) in cert.cover.circuits.iter().zip(&cert.x) {
        let beta = circuit.beta.as_slice();
        if beta.len() != n || circuit.support.iter().any(|a| a.len() != n) {
            return Err(format!("circuit {beta:?}: wrong number of variables"));
        }
        circuit
            .check()
            .map_err(|e| format!("circuit {beta:?}: {e}"))?;
        if !inner.remove(beta) {
            return Err(format!(
                "circuit {beta:?} is not an uncovered non-square of p"
            ));
        }
        if row.len() != circuit.support.len() {
            return Err(format!(
                "circuit {beta:?}: X row length differs from support"
            ));
        }
        let mut entries = Vec::with_capacity(row.len());
        for ((alpha, l), xv) in circuit.support.iter().zip(&circuit.lambda).zip(row) {
            if !xv.is_positive() {
                return Err(format!(
                    "circuit {beta:?}: X entry at {alpha:?} is not positive"
                ));
            }
            if is_origin(alpha) {
                constant_mass += xv;
            } else if squares.contains(alpha.as_slice()) {
                *columns.entry(alpha.as_slice()).or_default() += xv;
            } else {
                return Err(format!(
                    "circuit {beta:?}: support point {alpha:?} is not a monomial square"
                ));
            }
            entries.push((xv.clone(), l.clone()));
        }
        let b_abs = coeff_of(p, beta).abs();
        match check_circuit_power_leq(&b_abs, &entries) {
            Ok(Check::Holds) => {}
            Ok(_) => return Err(format!("circuit inequality fails for {beta:?}")),
            Err(e) => return Err(format!("circuit {beta:?}: {e}")),
        }
    }
    if let Some(beta) = inner.iter().next() {
        return Err(format!("non-square {beta:?} is not covered"));
    }
    for (alpha, total) in columns {
        if total > coeff_of(p, alpha) {
            return Err(format!("column {alpha:?} exceeds its coefficient"));
        }
    }
    if cert.bound != p.constant_term() - constant_mass {
        return Err("bound differs from b_0 minus the circuit constants".into());
    }
    Ok(())
}
