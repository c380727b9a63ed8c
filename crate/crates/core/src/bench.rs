//! Seeded random instances, batch runs and reports.
//!
//! The generator is a stand-in for the one used in published experiments:
//! monomial squares are drawn first (the origin always among them), inner
//! terms are rounded random convex combinations of squares, kept only when
//! a cover with positive origin weight exists.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{
    intsage, optsage, optsonc, verify_sage, verify_sonc, Certificate, CertifyError, Reduction,
    Settings, Verdict, DEFAULT_MAX_ROUNDS,
};
use crate::cone::models::{build_sage_rep, SageMode};
use crate::cone::solve_expcone;
use crate::linalg::compute_cover;
use crate::poly::{Exponent, SparsePolynomial, Term};
use crate::rational::{self, format_rational, simplest_in, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub n: usize,
    pub d: u32,
    pub t: usize,
    pub neg_ratio: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BenchError {
    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),
    #[error("spec asks for more terms than the lattice provides: {0}")]
    InfeasibleSpec(String),
    #[error("io: {0}")]
    Io(String),
    #[error("bench spec: {0}")]
    Spec(String),
}

impl From<std::io::Error> for BenchError {
    fn from(e: std::io::Error) -> Self {
        BenchError::Io(e.to_string())
    }
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.n < 1 {
            return Err(BenchError::InvalidSpec("n must be at least 1".into()));
        }
        if self.d < 2 || !self.d.is_multiple_of(2) || self.d >= MAX_DEGREE {
            return Err(BenchError::InvalidSpec(format!(
                "d must be even, at least 2 and below {MAX_DEGREE}"
            )));
        }
        if self.t < 2 || self.t > MAX_TERMS {
            return Err(BenchError::InvalidSpec(format!(
                "t must lie in 2..={MAX_TERMS}"
            )));
        }
        if !(self.neg_ratio > 0.0 && self.neg_ratio < 1.0) {
            return Err(BenchError::InvalidSpec(
                "neg_ratio must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }

    pub fn id(&self) -> String {
        format!(
            "n{}-d{}-t{}-r{}-s{}",
            self.n,
            self.d,
            self.t,
            (self.neg_ratio * 1000.0).round() as u64,
            self.seed
        )
    }

    fn inner_count(&self) -> usize {
        if self.t < 3 {
            return 0;
        }
        ((self.neg_ratio * self.t as f64).round() as usize).clamp(1, self.t - 2)
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1u64, |acc, i| acc.saturating_mul(n + 1 - i) / i)
}

const ATTEMPTS: usize = 200;
pub const MAX_TERMS: usize = 50;
pub const MAX_DEGREE: u32 = 30;

/// Deterministic polynomial for `spec`: constant term, `t - k` monomial
/// squares and `k = round(neg_ratio t)` negative inner terms, integer
/// coefficients of magnitude at most 1000.
pub fn generate_instance(spec: &InstanceSpec) -> Result<SparsePolynomial, BenchError> {
    spec.validate()?;
    let n = spec.n;
    let half = spec.d / 2;
    let inner = spec.inner_count();
    let squares = spec.t - inner;
    let available = binomial(half as u64 + n as u64, n as u64) - 1;
    if (squares - 1) as u64 > available {
        return Err(BenchError::InfeasibleSpec(format!(
            "{} nonzero even exponents requested, {} exist",
            squares - 1,
            available
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let origin: Exponent = vec![0; n];
    for _ in 0..ATTEMPTS {
        let mut vertices: Vec<Exponent> = vec![origin.clone()];
        while vertices.len() < squares {
            let mut a: Exponent = (0..n).map(|_| 2 * rng.gen_range(0..=half as i32)).collect();
            // spend the degree budget coordinate by coordinate
            let total: i32 = a.iter().sum();
            if total > spec.d as i32 {
                let order: Vec<usize> = {
                    let mut o: Vec<usize> = (0..n).collect();
                    o.shuffle(&mut rng);
                    o
                };
                let mut budget = spec.d as i32;
                for k in order {
                    a[k] = a[k].min(budget);
                    budget -= a[k];
                }
            }
            if a != origin && !vertices.contains(&a) {
                vertices.push(a);
            }
        }
        let mut support: BTreeSet<Exponent> = vertices.iter().cloned().collect();
        let mut inner_points: Vec<Exponent> = Vec::new();
        let mut tries = 0;
        while inner_points.len() < inner && tries < ATTEMPTS * (inner + 1) {
            tries += 1;
            let size = rng.gen_range(2..=vertices.len().min(n + 1));
            let mut chosen = vec![0usize];
            let mut rest: Vec<usize> = (1..vertices.len()).collect();
            rest.shuffle(&mut rng);
            chosen.extend(rest.into_iter().take(size - 1));
            let weights: Vec<f64> = chosen
                .iter()
                .map(|_| rng.gen_range(1..=10) as f64)
                .collect();
            let wsum: f64 = weights.iter().sum();
            let point: Exponent = (0..n)
                .map(|k| {
                    let v: f64 = chosen
                        .iter()
                        .zip(&weights)
                        .map(|(&i, w)| w * vertices[i][k] as f64)
                        .sum::<f64>()
                        / wsum;
                    v.round() as i32
                })
                .collect();
            if point == origin
                || support.contains(&point)
                || point.iter().sum::<i32>() > spec.d as i32
            {
                continue;
            }
            if covered(&vertices, &point) {
                support.insert(point.clone());
                inner_points.push(point);
            }
        }
        if inner_points.len() < inner {
            continue;
        }
        let mut terms: Vec<Term> = Vec::with_capacity(spec.t);
        for a in &vertices {
            terms.push(Term {
                exponent: a.clone(),
                coeff: rational::int(rng.gen_range(1..=1000)),
            });
        }
        for a in &inner_points {
            terms.push(Term {
                exponent: a.clone(),
                coeff: rational::int(-rng.gen_range(1..=1000)),
            });
        }
        return SparsePolynomial::new(n, terms).map_err(|e| BenchError::InvalidSpec(e.to_string()));
    }
    Err(BenchError::InfeasibleSpec(format!(
        "no admissible inner terms found for {}",
        spec.id()
    )))
}

fn covered(vertices: &[Exponent], point: &[i32]) -> bool {
    let mut terms: Vec<Term> = vertices
        .iter()
        .map(|a| Term {
            exponent: a.clone(),
            coeff: rational::int(1),
        })
        .collect();
    terms.push(Term {
        exponent: point.to_vec(),
        coeff: rational::int(-1),
    });
    match SparsePolynomial::new(point.len(), terms) {
        Ok(p) => compute_cover(&p, &p.partition_support()).is_ok(),
        Err(_) => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sonc,
    Sage,
    Intsage,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Sonc => "sonc",
            Method::Sage => "sage",
            Method::Intsage => "intsage",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sonc" => Ok(Method::Sonc),
            "sage" => Ok(Method::Sage),
            "intsage" => Ok(Method::Intsage),
            _ => Err(format!(
                "unknown method {s:?} (expected sonc, sage or intsage)"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub id: String,
    pub method: Method,
    pub n: usize,
    pub d: u32,
    pub t: usize,
    pub numeric_bound: Option<f64>,
    pub exact_bound: Option<Rational>,
    pub gap: Option<f64>,
    pub bitsize: Option<u64>,
    pub t_solve: f64,
    pub t_round: f64,
    pub status: String,
    pub certificate: Option<Certificate>,
}

impl RunRecord {
    pub fn succeeded(&self) -> bool {
        self.status == "ok"
    }
}

fn verdict_status(v: &Verdict) -> String {
    match v {
        Verdict::Valid => "ok".into(),
        Verdict::Invalid(_) => "invalid".into(),
        Verdict::Inconclusive(_) => "inconclusive".into(),
    }
}

/// Runs one method on one instance, verifying the certificate it returns.
pub fn run_instance(
    id: &str,
    p: &SparsePolynomial,
    method: Method,
    settings: &Settings,
) -> RunRecord {
    let mut record = RunRecord {
        id: id.to_string(),
        method,
        n: p.num_vars(),
        d: p.degree(),
        t: p.len(),
        numeric_bound: None,
        exact_bound: None,
        gap: None,
        bitsize: None,
        t_solve: 0.0,
        t_round: 0.0,
        status: String::new(),
        certificate: None,
    };
    let outcome: Result<(f64, Certificate, f64, f64), CertifyError> = match method {
        Method::Sonc => optsonc(p, settings).map(|r| {
            (
                r.numeric_bound,
                Certificate::Sonc(r.certificate),
                r.timings.solve.as_secs_f64(),
                r.timings.round.as_secs_f64(),
            )
        }),
        Method::Sage => optsage(p, settings, Reduction::Sign).map(|r| {
            (
                r.numeric_bound,
                Certificate::Sage(r.certificate),
                r.timings.solve.as_secs_f64(),
                r.timings.round.as_secs_f64(),
            )
        }),
        Method::Intsage => run_intsage(p, settings),
    };
    match outcome {
        Ok((numeric, cert, t_solve, t_round)) => {
            let verdict = match &cert {
                Certificate::Sonc(c) => verify_sonc(p, c),
                Certificate::Sage(c) => verify_sage(p, c),
            };
            let exact = cert.bound().clone();
            record.gap = Some(numeric - rational::to_f64(&exact));
            record.numeric_bound = Some(numeric);
            record.exact_bound = Some(exact);
            record.bitsize = Some(cert.bitsize());
            record.t_solve = t_solve;
            record.t_round = t_round;
            record.status = verdict_status(&verdict);
            record.certificate = Some(cert);
        }
        Err(e) => record.status = e.status().to_string(),
    }
    record
}

/// Membership test of `relaxed(p) - L` for a level `L` just below the
/// numeric SAGE bound; the certificate is reported against `p` with bound
/// `L`.
fn run_intsage(
    p: &SparsePolynomial,
    settings: &Settings,
) -> Result<(f64, Certificate, f64, f64), CertifyError> {
    let started = Instant::now();
    let relaxed = Reduction::Sign.apply(p)?;
    let model = build_sage_rep(&relaxed, SageMode::Optimize, settings.tolerance());
    let sol = solve_expcone(&model.program)?;
    let numeric = sol.x[model.bound_var.expect("optimisation mode")];
    let solved = Instant::now();
    let scale = numeric.abs().max(1.0);
    let lo = rational::from_f64(numeric - 0.02 * scale).unwrap_or_default();
    let hi = rational::from_f64(numeric - 0.01 * scale).unwrap_or_default();
    let level = simplest_in(&lo, &hi);
    let run = intsage(
        &relaxed.minus_constant(&level),
        settings,
        DEFAULT_MAX_ROUNDS,
    )?;
    let mut cert = run.certificate;
    cert.reduction = Reduction::Sign;
    cert.bound = level;
    Ok((
        numeric,
        Certificate::Sage(cert),
        (solved - started).as_secs_f64(),
        solved.elapsed().as_secs_f64(),
    ))
}

/// Record for an instance that could not be generated.
pub fn failed_record(spec: &InstanceSpec, method: Method, status: &str) -> RunRecord {
    RunRecord {
        id: spec.id(),
        method,
        n: spec.n,
        d: spec.d,
        t: spec.t,
        numeric_bound: None,
        exact_bound: None,
        gap: None,
        bitsize: None,
        t_solve: 0.0,
        t_round: 0.0,
        status: status.to_string(),
        certificate: None,
    }
}

/// An instance id with its polynomial.
pub type Instance = (String, SparsePolynomial);

/// Generates every instance of `spec` and runs it. Instances the generator
/// rejects get a `generation-failure` record per method.
pub fn run_bench(
    spec: &BenchSpec,
    workers: usize,
) -> Result<(Vec<Instance>, Vec<RunRecord>), BenchError> {
    let settings = spec.settings()?;
    let mut instances = Vec::new();
    let mut failed = Vec::new();
    for s in spec.instance_specs() {
        match generate_instance(&s) {
            Ok(p) => instances.push((s.id(), p)),
            Err(_) => failed.extend(
                spec.methods
                    .iter()
                    .map(|&m| failed_record(&s, m, "generation-failure")),
            ),
        }
    }
    let mut records = run_batch(&instances, &spec.methods, &settings, workers);
    records.extend(failed);
    Ok((instances, records))
}

/// Runs every method on every instance on a pool of `workers` threads.
/// Records come back in input order; failures are recorded, never raised.
pub fn run_batch(
    instances: &[(String, SparsePolynomial)],
    methods: &[Method],
    settings: &Settings,
    workers: usize,
) -> Vec<RunRecord> {
    use rayon::prelude::*;
    let jobs: Vec<(usize, Method)> = (0..instances.len())
        .flat_map(|i| methods.iter().map(move |&m| (i, m)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        jobs.par_iter()
            .map(|&(i, m)| run_instance(&instances[i].0, &instances[i].1, m, settings))
            .collect()
    })
}

pub const CSV_HEADER: [&str; 12] = [
    "id",
    "method",
    "n",
    "d",
    "t",
    "numeric_bound",
    "exact_bound",
    "gap",
    "bitsize",
    "t_solve",
    "t_round",
    "status",
];

pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| BenchError::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in records {
        w.write_record([
            r.id.clone(),
            r.method.name().to_string(),
            r.n.to_string(),
            r.d.to_string(),
            r.t.to_string(),
            opt(r.numeric_bound.map(|v| format!("{v:.12e}"))),
            opt(r.exact_bound.as_ref().map(format_rational)),
            opt(r.gap.map(|v| format!("{v:.6e}"))),
            opt(r.bitsize.map(|v| v.to_string())),
            format!("{:.6}", r.t_solve),
            format!("{:.6}", r.t_round),
            r.status.clone(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Gap buckets `<= 0.001`, `(0.001, 1]`, `> 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GapHistogram {
    #[serde(rename = "<=0.001")]
    pub small: usize,
    #[serde(rename = "(0.001,1]")]
    pub medium: usize,
    #[serde(rename = ">1")]
    pub large: usize,
}

impl GapHistogram {
    pub fn add(&mut self, gap: f64) {
        if gap <= 1e-3 {
            self.small += 1;
        } else if gap <= 1.0 {
            self.medium += 1;
        } else {
            self.large += 1;
        }
    }

    pub fn total(&self) -> usize {
        self.small + self.medium + self.large
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct MethodSummary {
    pub runs: usize,
    pub successes: usize,
    pub statuses: BTreeMap<String, usize>,
    pub gap_histogram: GapHistogram,
    pub fraction_gap_small: Option<f64>,
    pub median_bitsize: Option<u64>,
    pub max_bitsize: Option<u64>,
    pub mean_t_solve: Option<f64>,
    pub mean_t_round: Option<f64>,
}

/// Instances on which both SONC and SAGE succeeded.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Comparison {
    pub instances: usize,
    pub sage_tighter: usize,
    pub sonc_tighter: usize,
    pub equal: usize,
    pub mean_bound_difference: Option<f64>,
    pub mean_bitsize_sonc: Option<f64>,
    pub mean_bitsize_sage: Option<f64>,
    pub mean_time_sonc: Option<f64>,
    pub mean_time_sage: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub records: usize,
    pub methods: BTreeMap<String, MethodSummary>,
    pub sonc_vs_sage: Comparison,
}

fn mean(v: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, k) = v.fold((0.0, 0usize), |(s, k), x| (s + x, k + 1));
    (k > 0).then(|| s / k as f64)
}

pub fn summarize(records: &[RunRecord]) -> Summary {
    let mut methods: BTreeMap<String, MethodSummary> = BTreeMap::new();
    for r in records {
        let m = methods.entry(r.method.name().to_string()).or_default();
        m.runs += 1;
        *m.statuses.entry(r.status.clone()).or_default() += 1;
        if r.succeeded() {
            m.successes += 1;
            if let Some(g) = r.gap {
                m.gap_histogram.add(g);
            }
        }
    }
    for (name, m) in methods.iter_mut() {
        let ok: Vec<&RunRecord> = records
            .iter()
            .filter(|r| r.method.name() == name && r.succeeded())
            .collect();
        if m.gap_histogram.total() > 0 {
            m.fraction_gap_small =
                Some(m.gap_histogram.small as f64 / m.gap_histogram.total() as f64);
        }
        let mut bits: Vec<u64> = ok.iter().filter_map(|r| r.bitsize).collect();
        bits.sort_unstable();
        m.median_bitsize = bits
            .get(bits.len() / 2)
            .copied()
            .filter(|_| !bits.is_empty());
        m.max_bitsize = bits.last().copied();
        m.mean_t_solve = mean(ok.iter().map(|r| r.t_solve));
        m.mean_t_round = mean(ok.iter().map(|r| r.t_round));
    }
    let mut cmp = Comparison::default();
    let by_key: BTreeMap<(&str, Method), &RunRecord> = records
        .iter()
        .filter(|r| r.succeeded())
        .map(|r| ((r.id.as_str(), r.method), r))
        .collect();
    let mut diffs = Vec::new();
    let mut pairs = Vec::new();
    for (&(id, method), sonc) in &by_key {
        if method != Method::Sonc {
            continue;
        }
        let Some(sage) = by_key.get(&(id, Method::Sage)) else {
            continue;
        };
        let (a, b) = (
            sonc.exact_bound.as_ref().expect("successful record"),
            sage.exact_bound.as_ref().expect("successful record"),
        );
        cmp.instances += 1;
        match b.cmp(a) {
            std::cmp::Ordering::Greater => cmp.sage_tighter += 1,
            std::cmp::Ordering::Less => cmp.sonc_tighter += 1,
            std::cmp::Ordering::Equal => cmp.equal += 1,
        }
        diffs.push(rational::to_f64(&(b - a)));
        pairs.push((*sonc, *sage));
    }
    cmp.mean_bound_difference = mean(diffs.into_iter());
    cmp.mean_bitsize_sonc = mean(pairs.iter().filter_map(|p| p.0.bitsize).map(|b| b as f64));
    cmp.mean_bitsize_sage = mean(pairs.iter().filter_map(|p| p.1.bitsize).map(|b| b as f64));
    cmp.mean_time_sonc = mean(pairs.iter().map(|p| p.0.t_solve + p.0.t_round));
    cmp.mean_time_sage = mean(pairs.iter().map(|p| p.1.t_solve + p.1.t_round));
    Summary {
        records: records.len(),
        methods,
        sonc_vs_sage: cmp,
    }
}

/// One family of seeded instances in a bench spec file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Family {
    pub n: usize,
    pub d: u32,
    pub t: usize,
    pub neg_ratio: f64,
    pub seeds: u64,
    #[serde(default)]
    pub first_seed: u64,
}

/// Bench spec file: methods, accuracies (as "num/den") and instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    pub methods: Vec<Method>,
    #[serde(default)]
    pub delta_hat: Option<String>,
    #[serde(default)]
    pub delta_tilde: Option<String>,
    #[serde(default)]
    pub families: Vec<Family>,
    #[serde(default)]
    pub instances: Vec<InstanceSpec>,
}

impl BenchSpec {
    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        serde_json::from_str(text).map_err(|e| BenchError::Spec(e.to_string()))
    }

    pub fn settings(&self) -> Result<Settings, BenchError> {
        let mut s = Settings::default();
        let parse = |t: &str| {
            rational::parse_rational(t)
                .ok()
                .filter(|q| q.is_positive())
                .ok_or_else(|| BenchError::Spec(format!("bad accuracy {t:?}")))
        };
        if let Some(t) = &self.delta_hat {
            s.delta_hat = parse(t)?;
        }
        if let Some(t) = &self.delta_tilde {
            s.delta_tilde = parse(t)?;
        }
        Ok(s)
    }

    pub fn instance_specs(&self) -> Vec<InstanceSpec> {
        let mut out: Vec<InstanceSpec> = self
            .families
            .iter()
            .flat_map(|f| {
                (f.first_seed..f.first_seed + f.seeds).map(move |seed| InstanceSpec {
                    n: f.n,
                    d: f.d,
                    t: f.t,
                    neg_ratio: f.neg_ratio,
                    seed,
                })
            })
            .collect();
        out.extend(self.instances.iter().cloned());
        out
    }
}

/// Writes `records.csv`, `summary.json`, the instances and every
/// certificate into `dir`.
pub fn write_report(
    dir: &Path,
    instances: &[(String, SparsePolynomial)],
    records: &[RunRecord],
) -> Result<Summary, BenchError> {
    std::fs::create_dir_all(dir.join("instances"))?;
    std::fs::create_dir_all(dir.join("certificates"))?;
    for (id, p) in instances {
        std::fs::write(
            dir.join("instances").join(format!("{id}.json")),
            p.to_json(),
        )?;
    }
    for r in records {
        if let Some(cert) = &r.certificate {
            let name = format!("{}.{}.json", r.id, r.method.name());
            std::fs::write(dir.join("certificates").join(name), cert.to_json())?;
        }
    }
    write_csv(records, std::fs::File::create(dir.join("records.csv"))?)?;
    let summary = summarize(records);
    let text = serde_json::to_string_pretty(&summary).map_err(|e| BenchError::Io(e.to_string()))?;
    std::fs::write(dir.join("summary.json"), text)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, d: u32, t: usize, seed: u64) -> InstanceSpec {
        InstanceSpec {
            n,
            d,
            t,
            neg_ratio: 1.0 / 3.0,
            seed,
        }
    }

    #[test]
    fn generator_is_deterministic_and_well_formed() {
        let s = spec(2, 6, 6, 1);
        let a = generate_instance(&s).unwrap();
        assert_eq!(a, generate_instance(&s).unwrap());
        for seed in 0..30 {
            for (n, d, t) in [(2, 6, 6), (3, 8, 10), (2, 10, 12)] {
                let p = generate_instance(&spec(n, d, t, seed)).unwrap();
                assert_eq!(p.len(), t);
                assert!(p.constant_index().is_some());
                assert!(p.degree() <= d);
                let part = p.partition_support();
                assert!(part.mosq.len() >= 2);
                compute_cover(&p, &part).unwrap();
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(generate_instance(&spec(0, 6, 6, 1)).is_err());
        assert!(generate_instance(&spec(2, 5, 6, 1)).is_err());
        assert!(matches!(
            generate_instance(&spec(1, 2, 6, 1)),
            Err(BenchError::InfeasibleSpec(_))
        ));
    }

    #[test]
    fn histogram_partitions_successes() {
        let insts: Vec<(String, SparsePolynomial)> = (0..4)
            .map(|s| {
                let sp = spec(2, 6, 6, s);
                (sp.id(), generate_instance(&sp).unwrap())
            })
            .collect();
        let records = run_batch(
            &insts,
            &[Method::Sonc, Method::Sage],
            &Settings::default(),
            2,
        );
        assert_eq!(records.len(), 8);
        assert!(records.iter().all(|r| !r.status.is_empty()));
        let summary = summarize(&records);
        for m in summary.methods.values() {
            assert_eq!(m.gap_histogram.total(), m.successes);
        }
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 9);
    }
}
