use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use certify_core::bench::{self, BenchSpec, InstanceSpec};
use certify_core::certify::{
    intsage, optsage, optsonc, verify_sage, verify_sonc, Certificate, Reduction, Settings, Verdict,
    DEFAULT_MAX_ROUNDS,
};
use certify_core::poly::SparsePolynomial;
use certify_core::rational::{self, format_rational, parse_rational, Rational};

#[derive(Parser)]
#[command(
    name = "certify",
    version,
    about = "Exact SONC and SAGE lower-bound certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Sonc,
    Sage,
    Intsage,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a certified lower bound (sonc, sage) or a membership
    /// certificate (intsage) for the instance in INPUT.
    Run {
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long)]
        input: PathBuf,
        /// Rounding accuracy as a rational, e.g. 1/8388608.
        #[arg(long, value_parser = positive_rational)]
        delta_hat: Option<Rational>,
        /// Solver accuracy as a rational.
        #[arg(long, value_parser = positive_rational)]
        delta_tilde: Option<Rational>,
        #[arg(long)]
        cert_out: PathBuf,
        /// Reduction used by the sage method.
        #[arg(long, value_enum, default_value = "sign")]
        reduction: ReductionArg,
    },
    /// Check a certificate against an instance in exact arithmetic.
    /// Exit status 0 for valid, 1 for invalid, 3 for inconclusive.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Run a batch described by a JSON spec and write CSV and JSON reports.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Print a seeded random instance as JSON.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        neg_ratio: f64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionArg {
    Sign,
    Substitution,
}

fn positive_rational(s: &str) -> Result<Rational, String> {
    let q = parse_rational(s).map_err(|e| e.to_string())?;
    if q <= Rational::from_integer(0.into()) {
        return Err(format!("{s} is not positive"));
    }
    Ok(q)
}

fn read_instance(path: &PathBuf) -> Result<SparsePolynomial> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SparsePolynomial::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(
    method: MethodArg,
    input: PathBuf,
    delta_hat: Option<Rational>,
    delta_tilde: Option<Rational>,
    cert_out: PathBuf,
    reduction: ReductionArg,
) -> Result<ExitCode> {
    let p = read_instance(&input)?;
    let mut settings = Settings::default();
    if let Some(q) = delta_hat {
        settings.delta_hat = q;
    }
    if let Some(q) = delta_tilde {
        settings.delta_tilde = q;
    }
    let (cert, numeric, extra) = match method {
        MethodArg::Sonc => {
            let r = optsonc(&p, &settings)?;
            (
                Certificate::Sonc(r.certificate),
                Some(r.numeric_bound),
                String::new(),
            )
        }
        MethodArg::Sage => {
            let reduction = match reduction {
                ReductionArg::Sign => Reduction::Sign,
                ReductionArg::Substitution => Reduction::Substitution,
            };
            let r = optsage(&p, &settings, reduction)?;
            (
                Certificate::Sage(r.certificate),
                Some(r.numeric_bound),
                String::new(),
            )
        }
        MethodArg::Intsage => {
            let r = intsage(&p, &settings, DEFAULT_MAX_ROUNDS)?;
            let extra = format!(", \"rounds\": {}", r.rounds);
            (Certificate::Sage(r.certificate), None, extra)
        }
    };
    fs::write(&cert_out, cert.to_json())
        .with_context(|| format!("writing {}", cert_out.display()))?;
    let numeric = numeric.map_or("null".to_string(), |v| format!("{v}"));
    println!(
        "{{\"bound\": \"{}\", \"bound_f64\": {}, \"numeric_bound\": {}, \"bitsize\": {}{}}}",
        format_rational(cert.bound()),
        rational::to_f64(cert.bound()),
        numeric,
        cert.bitsize(),
        extra
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(input: PathBuf, cert: PathBuf) -> Result<ExitCode> {
    let p = read_instance(&input)?;
    let text = fs::read_to_string(&cert).with_context(|| format!("reading {}", cert.display()))?;
    let cert =
        Certificate::from_json(&text).with_context(|| format!("parsing {}", cert.display()))?;
    let verdict = match &cert {
        Certificate::Sonc(c) => verify_sonc(&p, c),
        Certificate::Sage(c) => verify_sage(&p, c),
    };
    Ok(match verdict {
        Verdict::Valid => {
            println!("valid: lower bound {}", format_rational(cert.bound()));
            ExitCode::SUCCESS
        }
        Verdict::Invalid(reason) => {
            println!("invalid: {reason}");
            ExitCode::from(1)
        }
        Verdict::Inconclusive(reason) => {
            println!("inconclusive: {reason}");
            ExitCode::from(3)
        }
    })
}

fn bench(spec: PathBuf, out: PathBuf, workers: usize) -> Result<ExitCode> {
    let text = fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
    let spec = BenchSpec::from_json(&text)?;
    if spec.methods.is_empty() {
        bail!("the bench spec lists no methods");
    }
    let (instances, records) = bench::run_bench(&spec, workers)?;
    let summary = bench::write_report(&out, &instances, &records)?;
    eprintln!("{} records written to {}", summary.records, out.display());
    for (name, m) in &summary.methods {
        eprintln!(
            "{name}: {}/{} ok, gaps <=0.001: {}, (0.001,1]: {}, >1: {}",
            m.successes,
            m.runs,
            m.gap_histogram.small,
            m.gap_histogram.medium,
            m.gap_histogram.large
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn gen(spec: InstanceSpec) -> Result<ExitCode> {
    let p = bench::generate_instance(&spec)?;
    println!("{}", p.to_json());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            method,
            input,
            delta_hat,
            delta_tilde,
            cert_out,
            reduction,
        } => run(method, input, delta_hat, delta_tilde, cert_out, reduction),
        Command::Verify { input, cert } => verify(input, cert),
        Command::Bench { spec, out, workers } => bench(spec, out, workers),
        Command::Gen {
            n,
            d,
            t,
            neg_ratio,
            seed,
        } => gen(InstanceSpec {
            n,
            d,
            t,
            neg_ratio,
            seed,
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
