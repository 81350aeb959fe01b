//! Dense univariate polynomials over [`Rational`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{to_f64, Poly2, Rational};

/// Dense univariate polynomial; `coeffs[k]` is the degree-`k` coefficient.
///
/// Canonical form: no trailing zero coefficients, so the zero polynomial is
/// the empty vector and equality is structural.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly1 {
    coeffs: Vec<Rational>,
}

impl Poly1 {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly1 { coeffs }
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: Vec::new() }
    }

    /// Convenience constructor from integer coefficients (degree order).
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly1::new(coeffs.iter().map(|&n| super::rat(n)).collect())
    }

    /// `c * y^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Poly1::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly1 { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `y^k` (zero beyond the stored range).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly1::zero();
        }
        Poly1::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation, exact.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + to_f64(c);
        }
        acc
    }

    /// Exact derivative.
    pub fn derivative(&self) -> Self {
        Poly1::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * super::rat(k as i64))
                .collect(),
        )
    }

    /// Primitive with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = vec![Rational::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / super::rat(k as i64 + 1));
        }
        Poly1::new(coeffs)
    }

    /// True iff every odd-degree coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .skip(1)
            .step_by(2)
            .all(Zero::is_zero)
    }

    /// `self(inner(y))`, by Horner over polynomial arithmetic.
    pub fn compose(&self, inner: &Poly1) -> Poly1 {
        let mut acc = Poly1::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly1::new(vec![c.clone()]);
        }
        acc
    }

    /// Solves `self = g ∘ w` for `g`, degree by degree from the top.
    ///
    /// Returns `None` when no exact polynomial factorization through `w`
    /// exists. `w` must be nonconstant.
    pub fn compose_through(&self, w: &Poly1) -> Option<Poly1> {
        let dw = w.deg().filter(|&d| d > 0)?;
        if self.is_zero() {
            return Some(Poly1::zero());
        }
        let dq = self.deg().unwrap();
        if dq % dw != 0 {
            return None;
        }
        let m = dq / dw;
        let lead_w = w.coeff(dw);
        let mut rest = self.clone();
        let mut g = vec![Rational::zero(); m + 1];
        let mut w_pow = Poly1::from_ints(&[1]);
        let mut powers = Vec::with_capacity(m + 1);
        for _ in 0..=m {
            powers.push(w_pow.clone());
            w_pow = &w_pow * w;
        }
        let mut lead_pow = Rational::from_integer(1.into());
        let mut lead_pows = Vec::with_capacity(m + 1);
        for _ in 0..=m {
            lead_pows.push(lead_pow.clone());
            lead_pow *= &lead_w;
        }
        for k in (0..=m).rev() {
            let c = rest.coeff(k * dw) / &lead_pows[k];
            if !c.is_zero() {
                rest = &rest - &powers[k].scale(&c);
                g[k] = c;
            }
        }
        if rest.is_zero() {
            Some(Poly1::new(g))
        } else {
            None
        }
    }

    /// Embeds as a bivariate polynomial in the `y` variable.
    pub fn as_poly2_in_y(&self) -> Poly2 {
        let mut p = Poly2::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            p.insert_term(0, k as u32, c.clone());
        }
        p
    }

    /// Embeds as a bivariate polynomial in the `x` variable.
    pub fn as_poly2_in_x(&self) -> Poly2 {
        let mut p = Poly2::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            p.insert_term(k as u32, 0, c.clone());
        }
        p
    }
}

impl Add for &Poly1 {
    type Output = Poly1;
    fn add(self, rhs: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + rhs.coeff(k));
        }
        Poly1::new(out)
    }
}

impl Sub for &Poly1 {
    type Output = Poly1;
    fn sub(self, rhs: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - rhs.coeff(k));
        }
        Poly1::new(out)
    }
}

impl Neg for &Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        Poly1::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly1 {
    type Output = Poly1;
    fn mul(self, rhs: &Poly1) -> Poly1 {
        if self.is_zero() || rhs.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly1::new(out)
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("y"))
    }
}

impl Poly1 {
    /// Renders the polynomial with a chosen variable name.
    pub fn display_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match k {
                0 => format!("{c}"),
                1 => format!("{c}*{var}"),
                _ => format!("{c}*{var}^{k}"),
            };
            parts.push(term);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;
    use proptest::prelude::*;

    fn y() -> Poly1 {
        Poly1::from_ints(&[0, 1])
    }

    #[test]
    fn mul_and_cancel() {
        // y * y = y^2
        assert_eq!(&y() * &y(), Poly1::from_ints(&[0, 0, 1]));
        // p + (-p) = 0
        let p = Poly1::from_ints(&[3, -2, 7]);
        assert!((&p + &(-&p)).is_zero());
        // (1/2) y^2 * 2 = y^2
        let half_sq = Poly1::new(vec![rat(0), rat(0), ratio(1, 2)]);
        assert_eq!(half_sq.scale(&rat(2)), Poly1::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn antiderivative_examples() {
        // 2y -> y^2
        assert_eq!(
            Poly1::from_ints(&[0, 2]).antiderivative(),
            Poly1::from_ints(&[0, 0, 1])
        );
        // c1 y + c3 y^3 -> c1 y^2/2 + c3 y^4/4
        let c1 = ratio(3, 7);
        let c3 = ratio(-2, 5);
        let q = Poly1::new(vec![rat(0), c1.clone(), rat(0), c3.clone()]);
        let expect = Poly1::new(vec![
            rat(0),
            rat(0),
            c1 / rat(2),
            rat(0),
            c3 / rat(4),
        ]);
        assert_eq!(q.antiderivative(), expect);
        // 0 -> 0
        assert!(Poly1::zero().antiderivative().is_zero());
    }

    #[test]
    fn evenness() {
        assert!(Poly1::from_ints(&[0, 0, 1, 0, 1]).is_even()); // y^2 + y^4
        assert!(!Poly1::from_ints(&[0, 0, 1, 1]).is_even()); // y^2 + y^3
        assert!(Poly1::zero().is_even());
    }

    #[test]
    fn compose_through_examples() {
        // Q = y^4 + y^2, W = y^2  =>  Q~ = t^2 + t
        let q = Poly1::from_ints(&[0, 0, 1, 0, 1]);
        let w = Poly1::from_ints(&[0, 0, 1]);
        assert_eq!(q.compose_through(&w).unwrap(), Poly1::from_ints(&[0, 1, 1]));
        // Q = y^3, W = y^2 => none
        assert!(Poly1::from_ints(&[0, 0, 0, 1]).compose_through(&w).is_none());
        // Q = (y^2+y)^2, W = y^2+y => Q~ = t^2, checked by re-expansion
        let w2 = Poly1::from_ints(&[0, 1, 1]);
        let q2 = &w2 * &w2;
        let g = q2.compose_through(&w2).unwrap();
        assert_eq!(g, Poly1::from_ints(&[0, 0, 1]));
        assert_eq!(g.compose(&w2), q2);
    }

    #[test]
    fn eval_at_origin_is_constant_term() {
        let p = Poly1::new(vec![ratio(5, 3), rat(2), rat(-1)]);
        assert_eq!(p.eval(&rat(0)), ratio(5, 3));
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| ratio(n, d))
    }

    fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly1> {
        prop::collection::vec(small_rat(), 0..=max_deg + 1).prop_map(Poly1::new)
    }

    proptest! {
        #[test]
        fn ring_distributivity(p in small_poly(4), q in small_poly(4), r in small_poly(4)) {
            let lhs = &(&p + &q) * &r;
            let rhs = &(&p * &r) + &(&q * &r);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn derivative_of_antiderivative_is_identity(p in small_poly(5)) {
            prop_assert_eq!(p.antiderivative().derivative(), p);
        }

        #[test]
        fn evenness_matches_composition_through_y_squared(mut cs in prop::collection::vec(small_rat(), 0..7)) {
            if !cs.is_empty() {
                cs[0] = Rational::zero(); // zero constant term
            }
            let q = Poly1::new(cs);
            let w = Poly1::from_ints(&[0, 0, 1]);
            prop_assert_eq!(q.is_even(), q.compose_through(&w).is_some());
        }
    }
}
