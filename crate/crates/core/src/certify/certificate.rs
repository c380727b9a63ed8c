use serde::{Deserialize, Serialize};

use crate::linalg::{CircuitCover, Cover, RationalMatrix};
use crate::poly::Exponent;
use crate::rational::{self, format_rational, parse_rational, Rational};

/// How a polynomial is turned into the signomial a SAGE certificate is
/// about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    /// Non-square coefficients replaced by `-|b|` on the same support.
    Sign,
    /// `g(exp x - exp(-x))`.
    Substitution,
    /// The input already is the signomial.
    None,
}

/// Circuit decomposition `p - C = sum_beta (sum_alpha X x^alpha + b_beta x^beta)`
/// plus leftover monomial squares. Rows of `x` are aligned with the
/// supports of the cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoncCertificate {
    pub cover: Cover,
    pub x: Vec<Vec<Rational>>,
    pub bound: Rational,
}

/// AGE decomposition of `f - C` with one block per support index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SageCertificate {
    pub reduction: Reduction,
    pub exponents: Vec<Exponent>,
    pub q: RationalMatrix,
    pub c: Vec<Vec<Rational>>,
    pub nu: Vec<Vec<Rational>>,
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Sonc(SoncCertificate),
    Sage(SageCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("malformed certificate JSON: {0}")]
    Json(String),
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("exponent {0} out of range")]
    Exponent(i64),
    #[error("inconsistent certificate shape: {0}")]
    Shape(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitFile {
    beta: Vec<i64>,
    support: Vec<Vec<i64>>,
    lambda: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum CertificateFile {
    Sonc {
        bound: String,
        cover: Vec<CircuitFile>,
        #[serde(rename = "X")]
        x: Vec<Vec<String>>,
    },
    Sage {
        bound: String,
        reduction: Reduction,
        exponents: Vec<Vec<i64>>,
        #[serde(rename = "Q")]
        q: Vec<Vec<String>>,
        c: Vec<Vec<String>>,
        nu: Vec<Vec<String>>,
    },
}

fn fmt_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn fmt_mat(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    m.iter().map(|r| fmt_vec(r)).collect()
}

fn parse_q(s: &str) -> Result<Rational, CertificateError> {
    parse_rational(s).map_err(|_| CertificateError::Rational(s.to_string()))
}

fn parse_vec(v: &[String]) -> Result<Vec<Rational>, CertificateError> {
    v.iter().map(|s| parse_q(s)).collect()
}

fn parse_mat(m: &[Vec<String>]) -> Result<Vec<Vec<Rational>>, CertificateError> {
    m.iter().map(|r| parse_vec(r)).collect()
}

fn exp_out(e: &[i32]) -> Vec<i64> {
    e.iter().map(|&v| v as i64).collect()
}

fn exp_in(e: &[i64]) -> Result<Exponent, CertificateError> {
    e.iter()
        .map(|&v| i32::try_from(v).map_err(|_| CertificateError::Exponent(v)))
        .collect()
}

impl SoncCertificate {
    pub fn bitsize(&self) -> u64 {
        rational::max_bitsize(self.x.iter().flatten().chain(std::iter::once(&self.bound)))
    }
}

impl SageCertificate {
    pub fn bitsize(&self) -> u64 {
        rational::max_bitsize(
            self.c
                .iter()
                .flatten()
                .chain(self.nu.iter().flatten())
                .chain(std::iter::once(&self.bound)),
        )
    }
}

impl Certificate {
    pub fn bound(&self) -> &Rational {
        match self {
            Certificate::Sonc(c) => &c.bound,
            Certificate::Sage(c) => &c.bound,
        }
    }

    pub fn bitsize(&self) -> u64 {
        match self {
            Certificate::Sonc(c) => c.bitsize(),
            Certificate::Sage(c) => c.bitsize(),
        }
    }

    pub fn to_json(&self) -> String {
        let file = match self {
            Certificate::Sonc(c) => CertificateFile::Sonc {
                bound: format_rational(&c.bound),
                cover: c
                    .cover
                    .circuits
                    .iter()
                    .map(|k| CircuitFile {
                        beta: exp_out(&k.beta),
                        support: k.support.iter().map(|a| exp_out(a)).collect(),
                        lambda: fmt_vec(&k.lambda),
                    })
                    .collect(),
                x: fmt_mat(&c.x),
            },
            Certificate::Sage(c) => CertificateFile::Sage {
                bound: format_rational(&c.bound),
                reduction: c.reduction,
                exponents: c.exponents.iter().map(|a| exp_out(a)).collect(),
                q: fmt_mat(&c.q.to_rows()),
                c: fmt_mat(&c.c),
                nu: fmt_mat(&c.nu),
            },
        };
        serde_json::to_string_pretty(&file).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        let file: CertificateFile =
            serde_json::from_str(text).map_err(|e| CertificateError::Json(e.to_string()))?;
        match file {
            CertificateFile::Sonc { bound, cover, x } => {
                let circuits = cover
                    .iter()
                    .map(|k| {
                        Ok(CircuitCover {
                            beta: exp_in(&k.beta)?,
                            support: k
                                .support
                                .iter()
                                .map(|a| exp_in(a))
                                .collect::<Result<_, _>>()?,
                            lambda: parse_vec(&k.lambda)?,
                        })
                    })
                    .collect::<Result<Vec<_>, CertificateError>>()?;
                let x = parse_mat(&x)?;
                if x.len() != circuits.len()
                    || x.iter()
                        .zip(&circuits)
                        .any(|(r, k)| r.len() != k.support.len())
                {
                    return Err(CertificateError::Shape("X does not match the cover".into()));
                }
                Ok(Certificate::Sonc(SoncCertificate {
                    cover: Cover { circuits },
                    x,
                    bound: parse_q(&bound)?,
                }))
            }
            CertificateFile::Sage {
                bound,
                reduction,
                exponents,
                q,
                c,
                nu,
            } => {
                let exponents: Vec<Exponent> = exponents
                    .iter()
                    .map(|a| exp_in(a))
                    .collect::<Result<_, _>>()?;
                let q = parse_mat(&q)?;
                if q.iter().any(|r| r.len() != exponents.len()) {
                    return Err(CertificateError::Shape("Q has the wrong width".into()));
                }
                let (c, nu) = (parse_mat(&c)?, parse_mat(&nu)?);
                let t = exponents.len();
                if c.len() != t || nu.len() != t || c.iter().chain(&nu).any(|v| v.len() != t) {
                    return Err(CertificateError::Shape(
                        "blocks must be t vectors of length t".into(),
                    ));
                }
                let q = if q.is_empty() {
                    RationalMatrix::zeros(0, t)
                } else {
                    RationalMatrix::from_rows(q)
                };
                Ok(Certificate::Sage(SageCertificate {
                    reduction,
                    exponents,
                    q,
                    c,
                    nu,
                    bound: parse_q(&bound)?,
                }))
            }
        }
    }
}
