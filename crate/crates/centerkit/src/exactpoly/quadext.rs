//! Arithmetic in a real quadratic extension `Q(√d)`.
//!
//! The eigenvalues of the quotient linear system are roots of
//! `μ² + Cμ + 2B = 0` and are irrational for generic rational `B, C`.
//! Carrying them as `a + b√d` with `d = C² - 8B` keeps every eigenvalue
//! identity exact, so the real-eigenvalue Darboux integral can be verified
//! symbolically instead of numerically.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{to_f64, Rational};

/// `a + b·√disc` with rational `a, b` and a fixed nonnegative
/// square-free-by-convention discriminant shared by both operands.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
    pub disc: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, disc: Rational) -> Self {
        QuadExt { a, b, disc }
    }

    pub fn from_rational(a: Rational, disc: Rational) -> Self {
        QuadExt {
            a,
            b: Rational::zero(),
            disc,
        }
    }

    /// The pure radical `√disc`.
    pub fn sqrt_disc(disc: Rational) -> Self {
        QuadExt {
            a: Rational::zero(),
            b: Rational::from_integer(1.into()),
            disc,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuadExt {
            a: &self.a * c,
            b: &self.b * c,
            disc: self.disc.clone(),
        }
    }

    /// Galois conjugate `a - b√d`.
    pub fn conj(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -&self.b,
            disc: self.disc.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * to_f64(&self.disc).sqrt()
    }

    fn assert_same_field(&self, rhs: &Self) {
        // Rationals (b = 0) embed in every Q(√d); only genuine radicals
        // must share the discriminant.
        debug_assert!(
            self.b.is_zero() || rhs.b.is_zero() || self.disc == rhs.disc,
            "mixed discriminants {} vs {}",
            self.disc,
            rhs.disc
        );
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        self.assert_same_field(rhs);
        QuadExt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            disc: if self.b.is_zero() {
                rhs.disc.clone()
            } else {
                self.disc.clone()
            },
        }
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        self + &(-rhs)
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -&self.a,
            b: -&self.b,
            disc: self.disc.clone(),
        }
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        self.assert_same_field(rhs);
        let disc = if self.b.is_zero() {
            rhs.disc.clone()
        } else {
            self.disc.clone()
        };
        QuadExt {
            a: &self.a * &rhs.a + &(&self.b * &rhs.b) * &disc,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            disc,
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.disc)
        }
    }
}
