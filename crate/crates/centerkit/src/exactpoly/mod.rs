//! Exact rational scalars and dense/sparse polynomial algebra over them.
//!
//! Every symbolic computation in the crate runs on [`Rational`] coefficients:
//! arbitrary-precision, always in lowest terms, never rounded. [`Poly1`] is a
//! dense univariate polynomial (the Liénard data `P1, P2, P3, p, q` and their
//! primitives), [`Poly2`] a sparse bivariate polynomial (vector-field
//! components, Hamiltonians, divergences).

mod poly1;
mod poly2;
mod quadext;

pub use poly1::Poly1;
pub use poly2::{CompiledPoly2, Poly2};
pub use quadext::QuadExt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact arbitrary-precision rational number, stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Integer as a `Rational`.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as a `Rational` (reduced, `d != 0`).
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an exact scalar from a fraction or decimal string.
///
/// Accepted forms: `"3/10"`, `"-1/5"`, `"2"`, `"0.05"`, `"-1.25e-2"`.
/// Decimals are scaled fractions (`0.05` becomes `5/100` reduced), so no
/// precision is lost on the way in.
pub fn parse_exact(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty scalar".to_string());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    // Decimal with optional exponent: mantissa [. fraction] [e exp]
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i32 = e.parse().map_err(|err| format!("bad exponent {e:?}: {err}"))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(format!("no digits in {s:?}"));
    }
    let n: BigInt = digits
        .parse()
        .map_err(|e| format!("bad decimal {s:?}: {e}"))?;
    let scale = frac_part.len() as i32 - exp;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::new(n, ten.pow(scale as u32))
    } else {
        Rational::from_integer(n * ten.pow((-scale) as u32))
    };
    Ok(value)
}

/// Best rational approximation of `v` with denominator at most `max_den`,
/// via the continued-fraction expansion. Returns `None` when the closest
/// convergent misses `v` by more than `tol`.
pub fn recognize_rational(v: f64, max_den: u64, tol: f64) -> Option<Rational> {
    if !v.is_finite() {
        return None;
    }
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::from(v.floor() as i64), BigInt::one());
    let mut frac = v - v.floor();
    for _ in 0..64 {
        let cand = Rational::new(p1.clone(), q1.clone());
        let approx = to_f64(&cand);
        if (approx - v).abs() <= tol {
            return Some(cand);
        }
        if frac.abs() < 1e-18 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = BigInt::from(a as i64);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > BigInt::from(max_den) {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    let cand = Rational::new(p1, q1);
    if (to_f64(&cand) - v).abs() <= tol {
        Some(cand)
    } else {
        None
    }
}

/// Rational to nearest `f64`.
pub fn to_f64(r: &Rational) -> f64 {
    // Scale down huge numerators/denominators before converting so the
    // intermediate i128/f64 conversions cannot overflow.
    let num = r.numer();
    let den = r.denom();
    let bits = num.bits().max(den.bits());
    if bits <= 52 {
        let n = num.to_string().parse::<f64>().unwrap_or(f64::NAN);
        let d = den.to_string().parse::<f64>().unwrap_or(f64::NAN);
        return n / d;
    }
    let shift = bits - 52;
    let n = (num >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = (den >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN);
    n / d
}

/// Sign of a rational: -1, 0, or 1.
pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
