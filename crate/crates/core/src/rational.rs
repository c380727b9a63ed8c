//! Arbitrary-precision rationals and the small toolbox built around them:
//! bit sizes, `"num/den"` text encoding and best rational approximation.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"p/q"` or `"p"` with optional sign. Decimal points and exponents
/// are rejected so that floats never sneak in as coefficients.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let parse_int = |part: &str| -> Result<BigInt, ParseRationalError> {
        let digits = part.strip_prefix(['+', '-']).unwrap_or(part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::Malformed(text.to_string()));
        }
        part.parse::<BigInt>()
            .map_err(|_| ParseRationalError::Malformed(text.to_string()))
    };
    let n = parse_int(num)?;
    let d = parse_int(den)?;
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Always emits `"num/den"`, including for integers.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// `⌊log2 |i|⌋ + 1`, with the size of zero taken to be 1.
pub fn bitsize_int(i: &BigInt) -> u64 {
    if i.is_zero() {
        1
    } else {
        i.bits()
    }
}

/// Max of the numerator and denominator bit sizes (reduced form).
pub fn bitsize(q: &Rational) -> u64 {
    bitsize_int(q.numer()).max(bitsize_int(q.denom()))
}

/// Max bit size over a collection; 1 for an empty collection.
pub fn max_bitsize<'a, I>(entries: I) -> u64
where
    I: IntoIterator<Item = &'a Rational>,
{
    entries.into_iter().map(bitsize).max().unwrap_or(1)
}

pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn int(i: i64) -> Rational {
    Rational::from_integer(BigInt::from(i))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Power of two `2^k` for any sign of `k`.
pub fn pow2(k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(BigInt::one() << (k as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-k) as usize))
    }
}

/// The rational with the smallest denominator (and then smallest absolute
/// numerator) in the closed interval `[lo, hi]`.
///
/// Walks the continued-fraction expansions of both endpoints in lockstep,
/// i.e. a descent of the Stern-Brocot tree.
pub fn simplest_in(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi, "empty interval");
    if lo.is_positive() {
        simplest_nonneg(lo, hi)
    } else if hi.is_negative() {
        -simplest_nonneg(&-hi, &-lo)
    } else {
        Rational::zero()
    }
}

fn simplest_nonneg(lo: &Rational, hi: &Rational) -> Rational {
    // Invariant: 0 <= lo <= hi.
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl < hi.floor() {
        return fl + Rational::one();
    }
    // lo and hi share the integer part a; recurse on the reciprocals of the
    // fractional parts (which swaps the endpoints).
    let frac_lo = lo - &fl;
    let frac_hi = hi - &fl;
    if frac_hi.is_zero() {
        return fl;
    }
    let inner = simplest_nonneg(&frac_hi.recip(), &frac_lo.recip());
    fl + inner.recip()
}

/// Rounds toward `-inf` to a dyadic rational carrying `prec` significant bits.
pub fn round_dyadic_down(q: &Rational, prec: u64) -> Rational {
    round_dyadic(q, prec, false)
}

/// Rounds toward `+inf` to a dyadic rational carrying `prec` significant bits.
pub fn round_dyadic_up(q: &Rational, prec: u64) -> Rational {
    round_dyadic(q, prec, true)
}

fn round_dyadic(q: &Rational, prec: u64, up: bool) -> Rational {
    if q.is_zero() {
        return Rational::zero();
    }
    // Choose a shift so that |q| * 2^shift has about `prec` integer bits.
    let magnitude = q.numer().bits() as i64 - q.denom().bits() as i64;
    let shift = prec as i64 - magnitude;
    let scaled = if shift >= 0 {
        (q.numer() << (shift as usize), q.denom().clone())
    } else {
        (q.numer().clone(), q.denom() << ((-shift) as usize))
    };
    let (quot, rem) = scaled.0.div_mod_floor(&scaled.1);
    let m = if up && !rem.is_zero() {
        quot + BigInt::one()
    } else {
        quot
    };
    Rational::new(m, BigInt::one()) * pow2(-shift)
}

/// Sign of a rational as an `Ordering` against zero.
pub fn sign(q: &Rational) -> Ordering {
    match q.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}
