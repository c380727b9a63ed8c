//! Acceptance suite. Runs without the libtest harness so that one
//! PASS/FAIL line per criterion is always printed; exits non-zero when any
//! criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use certify_core::bench::{generate_instance, run_batch, InstanceSpec, Method};
use certify_core::certify::{
    intsage, optsage, optsonc, verify_sage, verify_sonc, Certificate, CertifyError, Reduction,
    SageCertificate, Settings, SoncCertificate, Verdict, DEFAULT_MAX_ROUNDS,
};
use certify_core::cone::models::SignomialSupport;
use certify_core::linalg::{pseudo_inverse_exact, RationalMatrix};
use certify_core::poly::{motzkin, SparsePolynomial, Term};
use certify_core::rational::{self, parse_rational, Rational};
use certify_core::rigorous::{check_circuit_power_leq, enclose_entropy, Check};

type Outcome = Result<String, String>;

/// Certificates collected for the soundness and exactness criteria.
#[derive(Default)]
struct Produced {
    items: Vec<(String, SparsePolynomial, Certificate)>,
}

impl Produced {
    fn push(&mut self, label: impl Into<String>, p: &SparsePolynomial, cert: Certificate) {
        self.items.push((label.into(), p.clone(), cert));
    }
}

fn fixture(name: &str) -> Value {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    serde_json::from_str(&text).unwrap()
}

fn q(v: &Value) -> Rational {
    match v {
        Value::String(s) => parse_rational(s).unwrap(),
        Value::Number(n) => rational::int(n.as_i64().unwrap()),
        _ => panic!("not a rational: {v}"),
    }
}

fn qs(v: &Value) -> Vec<Rational> {
    v.as_array().unwrap().iter().map(q).collect()
}

fn lifted(exponents: &[Vec<i32>]) -> RationalMatrix {
    let n = exponents.first().map_or(0, Vec::len);
    RationalMatrix::from_fn(n + 1, exponents.len(), |r, i| {
        if r < n {
            rational::int(exponents[i][r] as i64)
        } else {
            Rational::one()
        }
    })
}

fn check_time(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.1?}, limit {limit:?}"))
    }
}

fn golden_decomposition() -> Outcome {
    let start = Instant::now();
    let data = fixture("golden_sage_decomposition.json");
    let terms = data["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| Term {
            exponent: t["exponent"]
                .as_array()
                .unwrap()
                .iter()
                .map(|e| e.as_i64().unwrap() as i32)
                .collect(),
            coeff: q(&t["coeff"]),
        })
        .collect();
    let p = SparsePolynomial::new(3, terms).map_err(|e| e.to_string())?;
    let f = Reduction::Sign.apply(&p).map_err(|e| e.to_string())?;
    let support = SignomialSupport::new(&f);
    let t = support.len();
    if t != 12 {
        return Err(format!("support has {t} terms"));
    }

    // printed term order -> support order
    let order: Vec<usize> = data["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|term| {
            let e: Vec<i32> = term["exponent"]
                .as_array()
                .unwrap()
                .iter()
                .map(|e| e.as_i64().unwrap() as i32)
                .collect();
            support.exponents.iter().position(|x| *x == e).unwrap()
        })
        .collect();
    let zero = vec![Rational::zero(); t];
    let mut c = vec![zero.clone(); t];
    let mut nu = vec![zero; t];
    for block in data["blocks"].as_array().unwrap() {
        let j = order[block["center"].as_u64().unwrap() as usize];
        for (k, (cv, nv)) in qs(&block["c"])
            .into_iter()
            .zip(qs(&block["nu"]))
            .enumerate()
        {
            c[j][order[k]] = cv;
            nu[j][order[k]] = nv;
        }
    }

    let qm = lifted(&support.exponents);
    for (j, block) in nu.iter().enumerate() {
        if qm.mul_vec(block).iter().any(|v| !v.is_zero()) {
            return Err(format!("Q nu is not zero for block {j}"));
        }
    }
    for i in (0..t).filter(|&i| i != support.constant) {
        let total: Rational = c.iter().map(|blk| &blk[i]).sum();
        if total != support.coeffs[i] {
            return Err(format!("coefficient sum of term {i} is {total}"));
        }
    }
    let constants: Rational = c.iter().map(|blk| &blk[support.constant]).sum();
    let bound = &support.coeffs[support.constant] - &constants;
    let cert = SageCertificate {
        reduction: Reduction::Sign,
        exponents: support.exponents.clone(),
        q: qm,
        c,
        nu,
        bound: bound.clone(),
    };
    let verdict = verify_sage(&p, &cert);
    let label = match &verdict {
        Verdict::Valid => "valid".to_string(),
        Verdict::Inconclusive(why) => format!("inconclusive at cap ({why})"),
        Verdict::Invalid(why) => return Err(format!("rejected: {why}")),
    };
    check_time(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "6 printed blocks, Q nu = 0 and coefficient sums exact, entropy checks {label}, implied bound {:.6}, {:.2?}",
        rational::to_f64(&bound),
        start.elapsed()
    ))
}

fn closed_form(produced: &mut Produced) -> Outcome {
    let p = SparsePolynomial::from_int_terms(1, &[(&[0], 1), (&[2], 1), (&[1], -1)]).unwrap();
    let run = optsonc(&p, &Settings::default()).map_err(|e| e.to_string())?;
    let c = run.certificate.bound.clone();
    let err = (&c - rational::ratio(3, 4)).abs();
    if err > rational::ratio(1, 1000) {
        return Err(format!("C = {} is too far from 3/4", rational::to_f64(&c)));
    }
    let verdict = verify_sonc(&p, &run.certificate);
    if verdict != Verdict::Valid {
        return Err(format!("{verdict:?}"));
    }
    produced.push("1 + x^2 - x", &p, Certificate::Sonc(run.certificate));
    Ok(format!(
        "C = {} ({:.3e} below 3/4), valid",
        rational::format_rational(&c),
        rational::to_f64(&err)
    ))
}

fn motzkin_both(produced: &mut Produced) -> Outcome {
    let p = motzkin();
    let settings = Settings::default();
    let in_range = |c: &Rational| c <= &Rational::zero() && c >= &rational::ratio(-1, 100);
    let sonc = optsonc(&p, &settings).map_err(|e| format!("sonc: {e}"))?;
    let sage = optsage(&p, &settings, Reduction::Sign).map_err(|e| format!("sage: {e}"))?;
    let (cs, cg) = (
        sonc.certificate.bound.clone(),
        sage.certificate.bound.clone(),
    );
    if !in_range(&cs) || !in_range(&cg) {
        return Err(format!(
            "bounds {} and {} outside [-0.01, 0]",
            rational::to_f64(&cs),
            rational::to_f64(&cg)
        ));
    }
    let vs = verify_sonc(&p, &sonc.certificate);
    let vg = verify_sage(&p, &sage.certificate);
    if vs != Verdict::Valid || vg != Verdict::Valid {
        return Err(format!("sonc {vs:?}, sage {vg:?}"));
    }
    produced.push("motzkin sonc", &p, Certificate::Sonc(sonc.certificate));
    produced.push("motzkin sage", &p, Certificate::Sage(sage.certificate));
    Ok(format!(
        "sonc C = {:.3e}, sage C = {:.3e}, both valid",
        rational::to_f64(&cs),
        rational::to_f64(&cg)
    ))
}

fn median(mut v: Vec<u64>) -> u64 {
    v.sort_unstable();
    v.get(v.len() / 2).copied().unwrap_or(0)
}

fn gap_statistic(produced: &mut Produced) -> Outcome {
    let start = Instant::now();
    let mut instances = Vec::new();
    let mut seed = 0;
    for n in [2usize, 3] {
        for d in [6u32, 8, 10] {
            for t in [6usize, 9, 12] {
                for _ in 0..12 {
                    let spec = InstanceSpec {
                        n,
                        d,
                        t,
                        neg_ratio: 0.3,
                        seed,
                    };
                    seed += 1;
                    if let Ok(p) = generate_instance(&spec) {
                        instances.push((spec.id(), p));
                    }
                }
            }
        }
    }
    if instances.len() < 200 {
        return Err(format!("only {} instances generated", instances.len()));
    }
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let records = run_batch(
        &instances,
        &[Method::Sonc, Method::Sage],
        &Settings::default(),
        workers,
    );
    let polys: BTreeMap<&str, &SparsePolynomial> =
        instances.iter().map(|(id, p)| (id.as_str(), p)).collect();

    let mut bits: BTreeMap<Method, Vec<u64>> = BTreeMap::new();
    let (mut sage_ok, mut sage_close, mut sonc_ok) = (0, 0, 0);
    for r in &records {
        if !r.succeeded() {
            continue;
        }
        bits.entry(r.method).or_default().extend(r.bitsize);
        match r.method {
            Method::Sage => {
                sage_ok += 1;
                if r.gap.is_some_and(|g| g <= 1e-3) {
                    sage_close += 1;
                }
            }
            Method::Sonc => sonc_ok += 1,
            Method::Intsage => {}
        }
        if let Some(cert) = &r.certificate {
            produced.push(
                format!("{} {}", r.id, r.method.name()),
                polys[r.id.as_str()],
                cert.clone(),
            );
        }
    }
    let elapsed = start.elapsed();
    let share = sage_close as f64 / sage_ok.max(1) as f64;
    let detail = format!(
        "{} instances, sage {sage_ok} ok with {:.1}% gaps <= 1e-3, sonc {sonc_ok} ok, median bitsize sonc {} sage {}, {:.1?} on {workers} workers",
        instances.len(),
        100.0 * share,
        median(bits.remove(&Method::Sonc).unwrap_or_default()),
        median(bits.remove(&Method::Sage).unwrap_or_default()),
        elapsed
    );
    if share < 0.7 {
        return Err(detail);
    }
    check_time(elapsed, Duration::from_secs(15 * 60)).map_err(|e| format!("{detail}; {e}"))?;
    Ok(detail)
}

fn soundness(produced: &Produced) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = f64::INFINITY;
    for (label, p, cert) in &produced.items {
        let c = cert.bound();
        let cf = rational::to_f64(c);
        let eval = p.evaluator();
        let n = p.num_vars();
        let mut x = vec![0.0; n];
        for _ in 0..10_000 {
            for xi in x.iter_mut() {
                *xi = rng.gen_range(-2.0..2.0);
            }
            let slack = eval.eval(&x) - cf;
            worst = worst.min(slack);
            if slack < -1e-9 {
                return Err(format!("{label}: p(x) - C = {slack:e} at {x:?}"));
            }
        }
        for _ in 0..10 {
            let point: Vec<Rational> = (0..n)
                .map(|_| rational::ratio(rng.gen_range(-200..=200), rng.gen_range(1..=100)))
                .collect();
            let value = p.evaluate(&point).map_err(|e| e.to_string())?;
            if &value < c {
                return Err(format!("{label}: exact p(x) < C at {point:?}"));
            }
        }
    }
    Ok(format!(
        "{} certificates, 10^4 float and 10 exact samples each, smallest float slack {worst:.3e}",
        produced.items.len()
    ))
}

fn sonc_identities(p: &SparsePolynomial, cert: &SoncCertificate) -> Result<(), String> {
    let mut columns: BTreeMap<&[i32], Rational> = BTreeMap::new();
    let mut constants = Rational::zero();
    for (circuit, row) in cert.cover.circuits.iter().zip(&cert.x) {
        let total: Rational = circuit.lambda.iter().sum();
        if !total.is_one() {
            return Err(format!("weights of {:?} sum to {total}", circuit.beta));
        }
        for k in 0..circuit.beta.len() {
            let s: Rational = circuit
                .support
                .iter()
                .zip(&circuit.lambda)
                .map(|(a, l)| l * rational::int(a[k] as i64))
                .sum();
            if s != rational::int(circuit.beta[k] as i64) {
                return Err(format!(
                    "{:?} is not the stated convex combination",
                    circuit.beta
                ));
            }
        }
        for (alpha, xv) in circuit.support.iter().zip(row) {
            if alpha.iter().all(|&e| e == 0) {
                constants += xv;
            } else {
                *columns.entry(alpha.as_slice()).or_default() += xv;
            }
        }
    }
    for (alpha, total) in columns {
        let b = p
            .index_of(alpha)
            .map(|i| p.coeff(i).clone())
            .unwrap_or_default();
        if total > b {
            return Err(format!("column {alpha:?} sums to {total} > {b}"));
        }
    }
    if cert.bound != p.constant_term() - constants {
        return Err("bound is not b_0 minus the circuit constants".into());
    }
    Ok(())
}

fn sage_identities(p: &SparsePolynomial, cert: &SageCertificate) -> Result<(), String> {
    let f = cert.reduction.apply(p).map_err(|e| e.to_string())?;
    let qm = lifted(&cert.exponents);
    if qm != cert.q {
        return Err("Q is not the lifted support".into());
    }
    for (j, nu) in cert.nu.iter().enumerate() {
        if qm.mul_vec(nu).iter().any(|v| !v.is_zero()) {
            return Err(format!("Q nu is not zero for block {j}"));
        }
    }
    for (i, e) in cert.exponents.iter().enumerate() {
        let total: Rational = cert.c.iter().map(|blk| &blk[i]).sum();
        let b = f
            .index_of(e)
            .map(|k| f.coeff(k).clone())
            .unwrap_or_default();
        let expected = if e.iter().all(|&v| v == 0) {
            b - &cert.bound
        } else {
            b
        };
        if total != expected {
            return Err(format!(
                "coefficient sum of {e:?} is {total}, expected {expected}"
            ));
        }
    }
    Ok(())
}

fn exactness(produced: &Produced) -> Outcome {
    let (mut sonc, mut sage) = (0, 0);
    for (label, p, cert) in &produced.items {
        let checked = match cert {
            Certificate::Sonc(c) => {
                sonc += 1;
                sonc_identities(p, c)
            }
            Certificate::Sage(c) => {
                sage += 1;
                sage_identities(p, c)
            }
        };
        checked.map_err(|e| format!("{label}: {e}"))?;
    }
    Ok(format!(
        "{sonc} sonc and {sage} sage certificates satisfy their identities exactly"
    ))
}

fn am_gm(shift: Rational) -> SparsePolynomial {
    let term = |e: i32, coeff: Rational| Term {
        exponent: vec![e],
        coeff,
    };
    SparsePolynomial::from_combined(
        1,
        vec![
            term(2, Rational::one()),
            term(-2, Rational::one()),
            term(0, shift),
        ],
    )
    .unwrap()
}

fn intsage_behaviour() -> Outcome {
    let settings = Settings::default();
    let inside = intsage(&am_gm(rational::int(3)), &settings, DEFAULT_MAX_ROUNDS)
        .map_err(|e| format!("+3: {e}"))?;
    if inside.halvings() > 3 {
        return Err(format!("+3 needed {} halvings", inside.halvings()));
    }
    let verdict = verify_sage(&am_gm(rational::int(3)), &inside.certificate);
    if verdict != Verdict::Valid {
        return Err(format!("+3 certificate: {verdict:?}"));
    }
    match intsage(
        &am_gm(rational::ratio(-21, 10)),
        &settings,
        DEFAULT_MAX_ROUNDS,
    ) {
        Err(CertifyError::MaxRoundsExceeded(k)) => Ok(format!(
            "+3 certified after {} halvings, -2.1 rejected after {k} rounds",
            inside.halvings()
        )),
        Err(e) => Err(format!("-2.1: unexpected error {e}")),
        Ok(_) => Err("-2.1 was certified".into()),
    }
}

fn random_matrix(rng: &mut ChaCha8Rng) -> RationalMatrix {
    let rows = rng.gen_range(1..=8);
    let cols = rng.gen_range(1..=8);
    let entry = |rng: &mut ChaCha8Rng| rational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4));
    if rng.gen_bool(0.5) {
        // rank deficient: product of thin factors
        let k = rng.gen_range(1..=rows.min(cols));
        let a = RationalMatrix::from_fn(rows, k, |_, _| entry(rng));
        let b = RationalMatrix::from_fn(k, cols, |_, _| entry(rng));
        a.mul(&b)
    } else {
        RationalMatrix::from_fn(rows, cols, |_, _| entry(rng))
    }
}

fn kernel_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..50 {
        let a = random_matrix(&mut rng);
        let g = pseudo_inverse_exact(&a);
        let ag = a.mul(&g);
        let ga = g.mul(&a);
        if ag.mul(&a) != a || ga.mul(&g) != g || ag.transpose() != ag || ga.transpose() != ga {
            return Err(format!(
                "matrix {k} ({}x{}) violates a Moore-Penrose identity",
                a.rows(),
                a.cols()
            ));
        }
    }

    let circuits = fixture("circuit_cases.json");
    let circuits = circuits.as_array().unwrap();
    for (k, case) in circuits.iter().enumerate() {
        let entries: Vec<(Rational, Rational)> = case["entries"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| (q(&e[0]), q(&e[1])))
            .collect();
        let expected = if case["holds"].as_bool().unwrap() {
            Check::Holds
        } else {
            Check::Fails
        };
        let got = check_circuit_power_leq(&q(&case["b"]), &entries).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!("circuit case {k}: {got:?}, reference {expected:?}"));
        }
    }

    let entropy = fixture("entropy_cases.json");
    let entropy = entropy.as_array().unwrap();
    for (k, case) in entropy.iter().enumerate() {
        let value = q(&case["value"]);
        let args = case["args"].as_array().unwrap();
        let e = enclose_entropy(&qs(&args[0]), &qs(&args[1]), 128).map_err(|e| e.to_string())?;
        // the reference itself is rounded at 256 bits
        let slack = value.abs() * rational::pow2(-250) + rational::pow2(-600);
        if e.lower > &value + &slack || &value - &slack > e.upper {
            return Err(format!("entropy case {k}: reference outside the enclosure"));
        }
    }
    Ok(format!(
        "50 pseudo-inverses exact, {} circuit cases agree, {} entropy enclosures contain the reference",
        circuits.len(),
        entropy.len()
    ))
}

fn main() {
    let mut produced = Produced::default();
    let report = |k: usize, name: &str, outcome: Outcome| {
        let (tag, detail, ok) = match outcome {
            Ok(d) => ("PASS", d, true),
            Err(d) => ("FAIL", d, false),
        };
        println!("criterion {k} {tag} {name}: {detail}");
        ok
    };
    let mut ok = true;
    ok &= report(1, "golden SAGE decomposition", golden_decomposition());
    ok &= report(2, "closed-form GP", closed_form(&mut produced));
    ok &= report(3, "Motzkin polynomial", motzkin_both(&mut produced));
    ok &= report(4, "gap statistic", gap_statistic(&mut produced));
    ok &= report(5, "soundness sampling", soundness(&produced));
    ok &= report(6, "exactness identities", exactness(&produced));
    ok &= report(7, "intsage termination and rejection", intsage_behaviour());
    ok &= report(8, "kernel oracles", kernel_oracles());
    if !ok {
        std::process::exit(1);
    }
}
