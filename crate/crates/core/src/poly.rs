//! Sparse polynomials and signomials with exact rational coefficients.
//!
//! A [`SparsePolynomial`] is the pair `(A, b)`: a list of distinct exponent
//! vectors and their nonzero coefficients. Exponents may be negative, in which
//! case the object is read as a signomial `sum b_k exp(a_k . x)`. Terms are
//! kept in lexicographic order of their exponents, so two polynomials with
//! the same terms compare equal.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

pub type Exponent = Vec<i32>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("exponent {exponent:?} has {found} entries, expected {expected}")]
    DimensionMismatch {
        exponent: Vec<i64>,
        expected: usize,
        found: usize,
    },
    #[error("duplicate exponent {0:?}")]
    DuplicateExponent(Exponent),
    #[error("zero coefficient for exponent {0:?}")]
    ZeroCoefficient(Exponent),
    #[error("exponent entry {0} does not fit in 32 bits")]
    ExponentOverflow(i64),
    #[error("point has {found} coordinates, expected {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error("zero base raised to negative exponent in term {0:?}")]
    ZeroToNegativePower(Exponent),
    #[error("expected nonnegative exponents, found {0:?}")]
    NegativeExponent(Exponent),
    #[error("invalid coefficient {text:?}: {source}")]
    Coefficient {
        text: String,
        source: rational::ParseRationalError,
    },
    #[error("malformed instance: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: Exponent,
    pub coeff: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    num_vars: usize,
    terms: Vec<Term>,
}

/// Index sets of the monomial squares and of everything else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPartition {
    pub mosq: Vec<usize>,
    pub nosq: Vec<usize>,
    pub has_constant: bool,
}

fn checked_add(a: i32, b: i32) -> Result<i32, PolyError> {
    a.checked_add(b)
        .ok_or(PolyError::ExponentOverflow(a as i64 + b as i64))
}

impl SparsePolynomial {
    /// Builds a polynomial, rejecting duplicate exponents and zero
    /// coefficients.
    pub fn new(num_vars: usize, terms: Vec<Term>) -> Result<Self, PolyError> {
        let mut sorted: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for term in terms {
            if term.exponent.len() != num_vars {
                return Err(PolyError::DimensionMismatch {
                    exponent: term.exponent.iter().map(|&e| e as i64).collect(),
                    expected: num_vars,
                    found: term.exponent.len(),
                });
            }
            if term.coeff.is_zero() {
                return Err(PolyError::ZeroCoefficient(term.exponent));
            }
            if sorted.contains_key(&term.exponent) {
                return Err(PolyError::DuplicateExponent(term.exponent));
            }
            sorted.insert(term.exponent, term.coeff);
        }
        Ok(Self::from_sorted(num_vars, sorted))
    }

    /// Builds a polynomial by summing like terms and dropping zeros.
    pub fn from_combined<I>(num_vars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = Term>,
    {
        let mut acc: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for term in terms {
            if term.exponent.len() != num_vars {
                return Err(PolyError::DimensionMismatch {
                    exponent: term.exponent.iter().map(|&e| e as i64).collect(),
                    expected: num_vars,
                    found: term.exponent.len(),
                });
            }
            *acc.entry(term.exponent).or_insert_with(Rational::zero) += term.coeff;
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self::from_sorted(num_vars, acc))
    }

    fn from_sorted(num_vars: usize, map: BTreeMap<Exponent, Rational>) -> Self {
        let terms = map
            .into_iter()
            .map(|(exponent, coeff)| Term { exponent, coeff })
            .collect();
        Self { num_vars, terms }
    }

    /// Convenience constructor from integer exponents and `(num, den)` pairs.
    pub fn from_int_terms(num_vars: usize, terms: &[(&[i32], i64)]) -> Result<Self, PolyError> {
        Self::new(
            num_vars,
            terms
                .iter()
                .map(|(e, c)| Term {
                    exponent: e.to_vec(),
                    coeff: rational::int(*c),
                })
                .collect(),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Number of terms `t`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn exponent(&self, i: usize) -> &[i32] {
        &self.terms[i].exponent
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.terms[i].coeff
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Exponent> + '_ {
        self.terms.iter().map(|t| &t.exponent)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.terms.iter().map(|t| &t.coeff)
    }

    pub fn index_of(&self, exponent: &[i32]) -> Option<usize> {
        self.terms
            .binary_search_by(|t| t.exponent.as_slice().cmp(exponent))
            .ok()
    }

    pub fn constant_index(&self) -> Option<usize> {
        self.index_of(&vec![0; self.num_vars])
    }

    pub fn constant_term(&self) -> Rational {
        self.constant_index()
            .map(|i| self.terms[i].coeff.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree: the largest 1-norm over the exponents.
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.exponent.iter().map(|e| e.unsigned_abs()).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.exponent.iter().all(|&e| e >= 0))
    }

    pub fn partition_support(&self) -> SupportPartition {
        let mut mosq = Vec::new();
        let mut nosq = Vec::new();
        for (i, t) in self.terms.iter().enumerate() {
            if is_monomial_square(t) {
                mosq.push(i);
            } else {
                nosq.push(i);
            }
        }
        SupportPartition {
            mosq,
            nosq,
            has_constant: self.constant_index().is_some(),
        }
    }

    /// Exact value `sum b_k x^{a_k}`.
    pub fn evaluate(&self, x: &[Rational]) -> Result<Rational, PolyError> {
        if x.len() != self.num_vars {
            return Err(PolyError::PointDimension {
                expected: self.num_vars,
                found: x.len(),
            });
        }
        let mut total = Rational::zero();
        for t in &self.terms {
            let mut m = t.coeff.clone();
            for (xi, &e) in x.iter().zip(&t.exponent) {
                if e < 0 && xi.is_zero() {
                    return Err(PolyError::ZeroToNegativePower(t.exponent.clone()));
                }
                m *= num_traits::pow::Pow::pow(xi, e);
            }
            total += m;
        }
        Ok(total)
    }

    /// Floating-point evaluation with coefficients converted once.
    pub fn evaluator(&self) -> FloatEvaluator {
        FloatEvaluator {
            exponents: self.terms.iter().map(|t| t.exponent.clone()).collect(),
            coeffs: self
                .terms
                .iter()
                .map(|t| rational::to_f64(&t.coeff))
                .collect(),
        }
    }

    /// Signomial value `sum b_k exp(a_k . x)` in floating point.
    pub fn evaluate_signomial_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let dot: f64 = t
                    .exponent
                    .iter()
                    .zip(x)
                    .map(|(&e, &xi)| e as f64 * xi)
                    .sum();
                rational::to_f64(&t.coeff) * dot.exp()
            })
            .sum()
    }

    /// The signomial `g(exp x - exp(-x))`, coefficient of `exp(k . x)` for
    /// each `k` in `Z^n`, obtained by expanding every
    /// `prod_i (e^{x_i} - e^{-x_i})^{a_i}` binomially.
    pub fn expand_signomial(&self) -> Result<SparsePolynomial, PolyError> {
        let mut out: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for t in &self.terms {
            if t.exponent.iter().any(|&e| e < 0) {
                return Err(PolyError::NegativeExponent(t.exponent.clone()));
            }
            // Per variable: list of (shift, signed binomial).
            let factors: Vec<Vec<(i32, BigInt)>> = t
                .exponent
                .iter()
                .map(|&a| {
                    let mut row = Vec::with_capacity(a as usize + 1);
                    let mut binom = BigInt::one();
                    for m in 0..=a {
                        let signed = if m % 2 == 0 {
                            binom.clone()
                        } else {
                            -binom.clone()
                        };
                        row.push((a - 2 * m, signed));
                        binom = binom * BigInt::from(a - m) / BigInt::from(m + 1);
                    }
                    row
                })
                .collect();
            let mut partial: Vec<(Exponent, BigInt)> = vec![(Vec::new(), BigInt::one())];
            for row in &factors {
                let mut next = Vec::with_capacity(partial.len() * row.len());
                for (e, c) in &partial {
                    for (k, b) in row {
                        let mut e2 = e.clone();
                        e2.push(*k);
                        next.push((e2, c * b));
                    }
                }
                partial = next;
            }
            for (e, c) in partial {
                *out.entry(e).or_insert_with(Rational::zero) +=
                    &t.coeff * Rational::from_integer(c);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(Self::from_sorted(self.num_vars, out))
    }

    /// Replaces every coefficient outside the monomial squares by `-|b|`.
    ///
    /// For every real `y`, `g(y) >= relaxed(|y|)`, and on the positive
    /// orthant `relaxed(exp x)` is a signomial over the same support, so any
    /// global lower bound of that signomial bounds `g` on all of `R^n`.
    pub fn sign_relaxation(&self) -> SparsePolynomial {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                exponent: t.exponent.clone(),
                coeff: if is_monomial_square(t) {
                    t.coeff.clone()
                } else {
                    -t.coeff.abs()
                },
            })
            .collect();
        Self {
            num_vars: self.num_vars,
            terms,
        }
    }

    /// `self - shift`, adjusting or creating the constant term.
    pub fn minus_constant(&self, shift: &Rational) -> SparsePolynomial {
        let mut terms = self.terms.clone();
        terms.push(Term {
            exponent: vec![0; self.num_vars],
            coeff: -shift.clone(),
        });
        Self::from_combined(self.num_vars, terms).expect("dimensions already checked")
    }

    pub fn to_json_value(&self) -> InstanceFile {
        InstanceFile {
            n: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|t| TermFile {
                    exponent: t.exponent.iter().map(|&e| e as i64).collect(),
                    coeff: rational::format_rational(&t.coeff),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PolyError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| PolyError::Json(e.to_string()))?;
        Self::try_from(file)
    }
}

fn is_monomial_square(t: &Term) -> bool {
    t.coeff.is_positive() && t.exponent.iter().all(|&e| e >= 0 && e % 2 == 0)
}

/// Cheap repeated floating evaluation on `R^n`.
#[derive(Debug, Clone)]
pub struct FloatEvaluator {
    exponents: Vec<Exponent>,
    coeffs: Vec<f64>,
}

impl FloatEvaluator {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(&self.coeffs)
            .map(|(e, &c)| e.iter().zip(x).fold(c, |acc, (&k, &xi)| acc * xi.powi(k)))
            .sum()
    }
}

/// On-disk instance: `{"n": 2, "terms": [{"exponent": [0,0], "coeff": "1/1"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub terms: Vec<TermFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub exponent: Vec<i64>,
    pub coeff: String,
}

impl TryFrom<InstanceFile> for SparsePolynomial {
    type Error = PolyError;

    fn try_from(file: InstanceFile) -> Result<Self, PolyError> {
        let mut terms = Vec::with_capacity(file.terms.len());
        for t in file.terms {
            let exponent = t
                .exponent
                .iter()
                .map(|&e| i32::try_from(e).map_err(|_| PolyError::ExponentOverflow(e)))
                .collect::<Result<Exponent, _>>()?;
            let coeff =
                rational::parse_rational(&t.coeff).map_err(|source| PolyError::Coefficient {
                    text: t.coeff.clone(),
                    source,
                })?;
            terms.push(Term { exponent, coeff });
        }
        SparsePolynomial::new(file.n, terms)
    }
}

/// Sum of two exponent vectors with overflow detection.
pub fn add_exponents(a: &[i32], b: &[i32]) -> Result<Exponent, PolyError> {
    a.iter().zip(b).map(|(&x, &y)| checked_add(x, y)).collect()
}

/// The Motzkin polynomial `1 + x^4 y^2 + x^2 y^4 - 3 x^2 y^2`.
pub fn motzkin() -> SparsePolynomial {
    SparsePolynomial::from_int_terms(
        2,
        &[(&[0, 0], 1), (&[4, 2], 1), (&[2, 4], 1), (&[2, 2], -3)],
    )
    .expect("well-formed")
}
