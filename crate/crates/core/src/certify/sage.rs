use std::time::Instant;

use num_traits::{One, Signed, Zero};

pub use super::certificate::Reduction;
use super::{round_positive, CertifyError, SageCertificate, Settings, Timings, Verdict};
use crate::cone::models::{build_sage_rep, extract_sage, SageMode, SageModel, SignomialSupport};
use crate::cone::solve_expcone;
use crate::linalg::{
    pseudo_inverse_exact, solve_lp_exact, Bound, LinearProgram, LpOutcome, RationalMatrix, Relation,
};
use crate::poly::{PolyError, SparsePolynomial};
use crate::rational::{self, simplest_in, Rational};
use crate::rigorous::{
    check_entropy_leq, enclose_entropy, round_rational, round_up_exp_log_linear, Check, PREC_CAP,
    START_PREC,
};

pub const DEFAULT_MAX_ROUNDS: usize = 20;

impl Reduction {
    /// The signomial whose SAGE bound certifies `g` on `R^n`.
    pub fn apply(&self, g: &SparsePolynomial) -> Result<SparsePolynomial, PolyError> {
        match self {
            Reduction::Sign => {
                if let Some(t) = g.terms().iter().find(|t| t.exponent.iter().any(|&e| e < 0)) {
                    return Err(PolyError::NegativeExponent(t.exponent.clone()));
                }
                Ok(g.sign_relaxation())
            }
            Reduction::Substitution => g.expand_signomial(),
            Reduction::None => Ok(g.clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SageRun {
    pub certificate: SageCertificate,
    pub numeric_bound: f64,
    pub timings: Timings,
}

#[derive(Debug, Clone)]
pub struct IntsageRun {
    pub certificate: SageCertificate,
    /// Numeric solves performed, the last one successful.
    pub rounds: usize,
    /// `(delta_hat, delta_tilde)` of every round.
    pub deltas: Vec<(Rational, Rational)>,
}

impl IntsageRun {
    pub fn halvings(&self) -> usize {
        self.rounds.saturating_sub(1)
    }
}

/// Columns `(a(i), 1)`.
fn lifted(data: &SignomialSupport) -> RationalMatrix {
    let n = data.num_vars;
    RationalMatrix::from_fn(n + 1, data.len(), |r, i| {
        if r < n {
            rational::int(data.exponents[i][r] as i64)
        } else {
            Rational::one()
        }
    })
}

fn empty_certificate(
    data: &SignomialSupport,
    reduction: Reduction,
    bound: Rational,
) -> SageCertificate {
    let t = data.len();
    SageCertificate {
        reduction,
        exponents: data.exponents.clone(),
        q: lifted(data),
        c: vec![vec![Rational::zero(); t]; t],
        nu: vec![vec![Rational::zero(); t]; t],
        bound,
    }
}

/// Puts what is left of every positive coefficient into its own trivial
/// block. When optimising, the constant is the bound slot instead.
fn fill_trivial_blocks(
    data: &SignomialSupport,
    cert: &mut SageCertificate,
    centers: &[usize],
    mode: SageMode,
) {
    for i in 0..data.len() {
        let bound_slot = mode == SageMode::Optimize && i == data.constant;
        if bound_slot || centers.contains(&i) || !data.coeffs[i].is_positive() {
            continue;
        }
        let used: Rational = cert.c.iter().map(|blk| &blk[i]).sum();
        cert.c[i][i] = &data.coeffs[i] - used;
    }
}

/// Lower bound of `g` on `R^n` through the SAGE relaxation of the reduced
/// signomial, turned into an exact certificate.
pub fn optsage(
    g: &SparsePolynomial,
    settings: &Settings,
    reduction: Reduction,
) -> Result<SageRun, CertifyError> {
    let started = Instant::now();
    let f = reduction.apply(g)?;
    let model = build_sage_rep(&f, SageMode::Optimize, settings.tolerance());
    let sol = solve_expcone(&model.program)?;
    let numeric_bound = sol.x[model.bound_var.expect("optimisation mode")];
    let solved = Instant::now();
    let certificate = round_sage(&model, &sol.x, &settings.delta_hat, reduction)?;
    Ok(SageRun {
        certificate,
        numeric_bound,
        timings: Timings {
            solve: solved - started,
            round: solved.elapsed(),
        },
    })
}

fn round_sage(
    model: &SageModel,
    x: &[f64],
    delta: &Rational,
    reduction: Reduction,
) -> Result<SageCertificate, CertifyError> {
    let data = &model.data;
    let konst = data.constant;
    let numeric = extract_sage(model, x);

    let mut c_hat: Vec<Vec<Rational>> = numeric
        .iter()
        .map(|(c, _)| {
            c.iter()
                .map(|&v| {
                    let q = round_rational(v, delta);
                    if q.is_negative() {
                        Rational::zero()
                    } else {
                        q
                    }
                })
                .collect()
        })
        .collect();
    // a vanishing c next to a weight outside the band would pin that weight
    // to zero; keep a sliver of mass there instead
    let delta_f = rational::to_f64(delta);
    for (b, blk) in model.blocks.iter().enumerate() {
        let nu_num = &numeric[b].1;
        let band = delta_f * nu_num.iter().cloned().fold(1.0, f64::max);
        for (p, &i) in blk.support.iter().enumerate() {
            let borrows_constant = i == konst && blk.center != konst;
            if c_hat[b][p].is_zero() && !borrows_constant && nu_num[p] > band {
                c_hat[b][p] = round_positive(delta_f * nu_num[p], delta).unwrap_or_default();
            }
        }
    }
    // positive columns are rescaled to use their coefficient exactly
    for i in 0..data.len() {
        if i == konst || !data.coeffs[i].is_positive() {
            continue;
        }
        let slots: Vec<(usize, usize)> = model
            .blocks
            .iter()
            .enumerate()
            .filter_map(|(b, blk)| blk.support.iter().position(|&s| s == i).map(|p| (b, p)))
            .collect();
        let total: Rational = slots.iter().map(|&(b, p)| &c_hat[b][p]).sum();
        if total.is_positive() {
            for &(b, p) in &slots {
                c_hat[b][p] = &c_hat[b][p] * &data.coeffs[i] / &total;
            }
        }
    }

    let mut cert = empty_certificate(data, reduction, Rational::zero());
    let mut constant_mass = Rational::zero();
    for (b, blk) in model.blocks.iter().enumerate() {
        let j = blk.center;
        let nu_num = &numeric[b].1;
        let nu =
            project_nu(data, blk.center, &blk.support, nu_num, &c_hat[b], delta).or_else(|_| {
                project_nu(
                    data,
                    blk.center,
                    &blk.support,
                    nu_num,
                    &c_hat[b],
                    &(delta * rational::int(2)),
                )
            })?;
        let row_c = &mut cert.c[j];
        let row_nu = &mut cert.nu[j];
        for (p, &i) in blk.support.iter().enumerate() {
            row_c[i] = c_hat[b][p].clone();
            row_nu[i] = nu[p].clone();
        }
        row_nu[j] = -nu.iter().sum::<Rational>();
        if j == konst {
            let (nus, cs) = active(&blk.support, &nu, &c_hat[b]);
            let upper = enclose_entropy(&nus, &cs, START_PREC)?.upper;
            let slack = delta * upper.abs().max(Rational::one());
            row_c[j] = simplest_in(&upper, &(&upper + slack));
            constant_mass += &row_c[j];
        } else {
            row_c[j] = data.coeffs[j].clone();
            let p1 = blk
                .support
                .iter()
                .position(|&i| i == konst)
                .expect("the constant is borrowed by every block");
            let nu1 = &nu[p1];
            // c_1 >= exp(log nu_1 - 1 + (S - c_j) / nu_1) with
            // S = sum_{i != 1, j} nu_i (log(nu_i / c_i) - 1)
            let mut others = Rational::zero();
            let mut terms = vec![(Rational::one(), nu1.clone())];
            for (p, &i) in blk.support.iter().enumerate() {
                if i == konst || nu[p].is_zero() {
                    continue;
                }
                others += &nu[p];
                terms.push((&nu[p] / nu1, &nu[p] / &row_c[i]));
            }
            let constant = -Rational::one() - (&others + &data.coeffs[j]) / nu1;
            let c1 = round_up_exp_log_linear(&constant, &terms, delta)?;
            constant_mass += &c1;
            row_c[konst] = c1;
        }
    }
    let centers: Vec<usize> = model.blocks.iter().map(|b| b.center).collect();
    fill_trivial_blocks(data, &mut cert, &centers, SageMode::Optimize);
    cert.bound = &data.coeffs[konst] - constant_mass;
    Ok(cert)
}

/// Nonzero `(nu_i, c_i)` pairs of a block.
fn active(support: &[usize], nu: &[Rational], c: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    support
        .iter()
        .enumerate()
        .filter(|&(p, _)| !nu[p].is_zero())
        .map(|(p, _)| (nu[p].clone(), c[p].clone()))
        .unzip()
}

/// Exact point of `{sum_i nu_i (a(i) - a(j)) = 0, nu >= 0}` within the
/// band around the numeric `nu`, with the constant's weight at least
/// `delta` in blocks that must borrow from it.
fn project_nu(
    data: &SignomialSupport,
    center: usize,
    support: &[usize],
    nu_num: &[f64],
    c_hat: &[Rational],
    delta: &Rational,
) -> Result<Vec<Rational>, CertifyError> {
    let k = support.len();
    let n = data.num_vars;
    let nu_num: Vec<Rational> = nu_num
        .iter()
        .map(|&v| rational::from_f64(v.max(0.0)).unwrap_or_default())
        .collect();
    let scale = nu_num
        .iter()
        .max()
        .cloned()
        .unwrap_or_default()
        .max(Rational::one());
    let band = delta * scale;
    let mut lp = LinearProgram::new(k);
    let aj = &data.exponents[center];
    for coord in 0..n {
        let row: Vec<Rational> = support
            .iter()
            .map(|&i| rational::int((data.exponents[i][coord] - aj[coord]) as i64))
            .collect();
        if row.iter().any(|a| !a.is_zero()) {
            lp.add_constraint(row, Relation::Eq, Rational::zero());
        }
    }
    for (p, &i) in support.iter().enumerate() {
        let borrows_constant = i == data.constant && center != data.constant;
        if c_hat[p].is_zero() && !borrows_constant {
            lp.set_bound(
                p,
                Bound {
                    lower: Some(Rational::zero()),
                    upper: Some(Rational::zero()),
                },
            );
            continue;
        }
        let mut lower = (&nu_num[p] - &band).max(Rational::zero());
        if borrows_constant {
            lower = lower.max(delta.clone());
        }
        lp.set_bound(
            p,
            Bound {
                lower: Some(lower),
                upper: Some(&nu_num[p] + &band),
            },
        );
    }
    match solve_lp_exact(&lp) {
        Ok(LpOutcome::Feasible { x, .. }) => Ok(x),
        _ => Err(CertifyError::ProjectionLpInfeasible(center)),
    }
}

/// Certificate of membership of the signomial `f` in the SAGE cone,
/// retrying with halved accuracies until one verifies.
pub fn intsage(
    f: &SparsePolynomial,
    settings: &Settings,
    max_rounds: usize,
) -> Result<IntsageRun, CertifyError> {
    let data = SignomialSupport::new(f);
    let (_, centers) = data.index_sets(SageMode::Feasibility);
    if centers.is_empty() {
        let mut certificate = empty_certificate(&data, Reduction::None, Rational::zero());
        fill_trivial_blocks(&data, &mut certificate, &centers, SageMode::Feasibility);
        return Ok(IntsageRun {
            certificate,
            rounds: 0,
            deltas: Vec::new(),
        });
    }
    let mut delta_hat = settings.delta_hat.clone();
    let mut delta_tilde = settings.delta_tilde.clone();
    let mut deltas = Vec::new();
    for round in 1..=max_rounds {
        deltas.push((delta_hat.clone(), delta_tilde.clone()));
        let model = build_sage_rep(f, SageMode::Feasibility, rational::to_f64(&delta_tilde));
        if let Ok(sol) = solve_expcone(&model.program) {
            let cert = round_intsage(&model, &sol.x, &delta_hat);
            if check_certificate(&data, &cert) == Verdict::Valid {
                return Ok(IntsageRun {
                    certificate: cert,
                    rounds: round,
                    deltas,
                });
            }
        }
        delta_hat /= rational::int(2);
        delta_tilde /= rational::int(2);
    }
    Err(CertifyError::MaxRoundsExceeded(max_rounds))
}

fn round_intsage(model: &SageModel, x: &[f64], delta: &Rational) -> SageCertificate {
    let data = &model.data;
    let q_full = lifted(data);
    let mut cert = empty_certificate(data, Reduction::None, Rational::zero());
    for (blk, (c_num, nu_num)) in model.blocks.iter().zip(extract_sage(model, x)) {
        let j = blk.center;
        let nu_hat: Vec<Rational> = nu_num.iter().map(|&v| round_rational(v, delta)).collect();
        let nu_center = round_rational(-nu_num.iter().sum::<f64>(), delta);
        // project onto the kernel of Q restricted to the rounded support
        let mut cols: Vec<usize> = blk
            .support
            .iter()
            .zip(&nu_hat)
            .filter(|(_, v)| !v.is_zero())
            .map(|(&i, _)| i)
            .collect();
        cols.push(j);
        let v: Vec<Rational> = cols
            .iter()
            .map(|&i| {
                if i == j {
                    nu_center.clone()
                } else {
                    let p = blk
                        .support
                        .iter()
                        .position(|&s| s == i)
                        .expect("support index");
                    nu_hat[p].clone()
                }
            })
            .collect();
        let q = q_full.select_columns(&cols);
        let correction = pseudo_inverse_exact(&q).mul_vec(&q.mul_vec(&v));
        for ((&i, vi), ci) in cols.iter().zip(&v).zip(&correction) {
            cert.nu[j][i] = vi - ci;
        }
        for (p, &i) in blk.support.iter().enumerate() {
            cert.c[j][i] = round_rational(c_num[p], delta);
        }
        cert.c[j][j] = data.coeffs[j].clone();
    }
    let centers: Vec<usize> = model.blocks.iter().map(|b| b.center).collect();
    fill_trivial_blocks(data, &mut cert, &centers, SageMode::Feasibility);
    cert
}

/// Checks a SAGE certificate for `g` in exact arithmetic, with the entropy
/// inequalities decided by adaptive-precision enclosures.
pub fn verify_sage(g: &SparsePolynomial, cert: &SageCertificate) -> Verdict {
    let f = match cert.reduction.apply(g) {
        Ok(f) => f,
        Err(e) => return Verdict::Invalid(format!("reduction failed: {e}")),
    };
    let data = SignomialSupport::new(&f);
    if cert.exponents != data.exponents {
        return Verdict::Invalid("certificate support differs from the signomial".into());
    }
    if cert.q != lifted(&data) {
        return Verdict::Invalid("Q is not the lifted exponent matrix".into());
    }
    check_certificate(&data, cert)
}

fn check_certificate(data: &SignomialSupport, cert: &SageCertificate) -> Verdict {
    let t = data.len();
    if cert.c.len() != t
        || cert.nu.len() != t
        || cert.c.iter().chain(&cert.nu).any(|v| v.len() != t)
    {
        return Verdict::Invalid("blocks must be t vectors of length t".into());
    }
    for i in 0..t {
        let total: Rational = cert.c.iter().map(|blk| &blk[i]).sum();
        let expected = if i == data.constant {
            &data.coeffs[i] - &cert.bound
        } else {
            data.coeffs[i].clone()
        };
        if total != expected {
            return Verdict::Invalid(format!(
                "coefficient sum of term {i} is {total}, expected {expected}"
            ));
        }
    }
    let q = lifted(data);
    let mut undecided = None;
    for j in 0..t {
        let (c, nu) = (&cert.c[j], &cert.nu[j]);
        if q.mul_vec(nu).iter().any(|v| !v.is_zero()) {
            return Verdict::Invalid(format!("block {j}: Q nu is not zero"));
        }
        let mut nus = Vec::new();
        let mut cs = Vec::new();
        for i in (0..t).filter(|&i| i != j) {
            if nu[i].is_negative() || c[i].is_negative() {
                return Verdict::Invalid(format!("block {j}: sign constraint fails at term {i}"));
            }
            if nu[i].is_positive() {
                if c[i].is_zero() {
                    return Verdict::Invalid(format!(
                        "block {j}: positive weight on zero coefficient {i}"
                    ));
                }
                nus.push(nu[i].clone());
                cs.push(c[i].clone());
            }
        }
        if nus.is_empty() {
            if c[j].is_negative() {
                return Verdict::Invalid(format!(
                    "block {j}: negative coefficient without weights"
                ));
            }
            continue;
        }
        match check_entropy_leq(&nus, &cs, &c[j], PREC_CAP) {
            Ok(Check::Holds) => {}
            Ok(Check::Fails) => {
                return Verdict::Invalid(format!("block {j}: entropy inequality fails"))
            }
            Ok(Check::Inconclusive) => undecided = Some(j),
            Err(e) => return Verdict::Invalid(format!("block {j}: {e}")),
        }
    }
    match undecided {
        Some(j) => Verdict::Inconclusive(format!(
            "block {j}: entropy inequality undecided at {PREC_CAP} bits"
        )),
        None => Verdict::Valid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::motzkin;
    use crate::rational::{int, ratio};

    fn poly(n: usize, terms: &[(&[i32], i64)]) -> SparsePolynomial {
        SparsePolynomial::from_int_terms(n, terms).unwrap()
    }

    #[test]
    fn motzkin_certificate() {
        let p = motzkin();
        let run = optsage(&p, &Settings::default(), Reduction::Sign).unwrap();
        let c = &run.certificate.bound;
        assert!(c <= &Rational::zero() && c >= &ratio(-1, 100), "{c}");
        assert_eq!(verify_sage(&p, &run.certificate), Verdict::Valid);
    }

    #[test]
    fn small_examples() {
        let g = poly(1, &[(&[0], 1), (&[2], 1)]);
        for reduction in [Reduction::Sign, Reduction::Substitution] {
            let run = optsage(&g, &Settings::default(), reduction).unwrap();
            let c = rational::to_f64(&run.certificate.bound);
            assert!((1.0 - 1e-3..=1.0).contains(&c), "{reduction:?}: {c}");
            assert_eq!(verify_sage(&g, &run.certificate), Verdict::Valid);
        }
        let five = poly(2, &[(&[0, 0], 5)]);
        let run = optsage(&five, &Settings::default(), Reduction::Sign).unwrap();
        assert_eq!(run.certificate.bound, int(5));
        assert_eq!(verify_sage(&five, &run.certificate), Verdict::Valid);

        let p = poly(1, &[(&[0], 1), (&[1], -1), (&[2], 1)]);
        let run = optsage(&p, &Settings::default(), Reduction::Sign).unwrap();
        let c = rational::to_f64(&run.certificate.bound);
        assert!((0.749..=0.75).contains(&c), "{c}");
        assert_eq!(verify_sage(&p, &run.certificate), Verdict::Valid);
    }

    #[test]
    fn tampering_is_detected() {
        let p = motzkin();
        let run = optsage(&p, &Settings::default(), Reduction::Sign).unwrap();
        let cert = &run.certificate;
        let j = (0..cert.nu.len())
            .find(|&j| cert.nu[j].iter().any(|v| v.is_positive()))
            .unwrap();
        let i = (0..cert.nu.len())
            .find(|&i| i != j && cert.nu[j][i].is_positive())
            .unwrap();
        let mut bad = cert.clone();
        bad.nu[j][i] = -bad.nu[j][i].clone();
        assert!(matches!(verify_sage(&p, &bad), Verdict::Invalid(_)));
        let mut bad = cert.clone();
        bad.bound += ratio(1, 1000);
        assert!(matches!(verify_sage(&p, &bad), Verdict::Invalid(_)));
    }

    fn am_gm(shift: Rational) -> SparsePolynomial {
        SparsePolynomial::from_combined(
            1,
            vec![
                crate::poly::Term {
                    exponent: vec![2],
                    coeff: int(1),
                },
                crate::poly::Term {
                    exponent: vec![-2],
                    coeff: int(1),
                },
                crate::poly::Term {
                    exponent: vec![0],
                    coeff: shift,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn intsage_members_and_non_members() {
        let run = intsage(&am_gm(int(3)), &Settings::default(), DEFAULT_MAX_ROUNDS).unwrap();
        assert!(run.halvings() <= 3);
        assert_eq!(
            verify_sage(&am_gm(int(3)), &run.certificate),
            Verdict::Valid
        );

        let inner = am_gm(ratio(-19, 10));
        let run = intsage(&inner, &Settings::default(), DEFAULT_MAX_ROUNDS).unwrap();
        assert_eq!(verify_sage(&inner, &run.certificate), Verdict::Valid);

        let one = poly(1, &[(&[0], 1)]);
        let run = intsage(&one, &Settings::default(), DEFAULT_MAX_ROUNDS).unwrap();
        assert_eq!(run.certificate.c, vec![vec![int(1)]]);

        let outside = am_gm(ratio(-21, 10));
        assert!(matches!(
            intsage(&outside, &Settings::default(), DEFAULT_MAX_ROUNDS),
            Err(CertifyError::MaxRoundsExceeded(20))
        ));
    }
}
