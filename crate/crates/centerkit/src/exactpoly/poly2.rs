//! Sparse bivariate polynomials over [`Rational`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{to_f64, Poly1, Rational};

/// Sparse bivariate polynomial; keys are `(deg_x, deg_y)`.
///
/// Zero coefficients are never stored, so equality is structural and the zero
/// polynomial is the empty map. Cubic vector fields are sparse in `(i, j)`,
/// which is why the map representation wins over a dense grid here.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly2::zero();
        p.insert_term(0, 0, c);
        p
    }

    /// `c * x^i * y^j`.
    pub fn monomial(i: u32, j: u32, c: Rational) -> Self {
        let mut p = Poly2::zero();
        p.insert_term(i, j, c);
        p
    }

    /// Builds from `(i, j, coefficient)` triples given as integer pairs.
    pub fn from_terms(terms: &[(u32, u32, Rational)]) -> Self {
        let mut p = Poly2::zero();
        for (i, j, c) in terms {
            p.insert_term(*i, *j, c.clone());
        }
        p
    }

    /// Adds `c * x^i y^j`, keeping the zero-free canonical form.
    pub fn insert_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    /// Maximum total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v * c))
                .collect(),
        }
    }

    /// Exact partial derivative in `x`.
    pub fn diff_x(&self) -> Self {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                out.insert_term(i - 1, j, c * super::rat(i as i64));
            }
        }
        out
    }

    /// Exact partial derivative in `y`.
    pub fn diff_y(&self) -> Self {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                out.insert_term(i, j - 1, c * super::rat(j as i64));
            }
        }
        out
    }

    /// Term-by-term primitive in `y` (zero constant of integration).
    pub fn antiderivative_y(&self) -> Self {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            out.insert_term(i, j + 1, c / super::rat(j as i64 + 1));
        }
        out
    }

    /// Exact evaluation.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            let mut term = c.clone();
            for _ in 0..i {
                term *= x;
            }
            for _ in 0..j {
                term *= y;
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (&(i, j), c) in &self.terms {
            acc += to_f64(c) * x.powi(i as i32) * y.powi(j as i32);
        }
        acc
    }

    /// True iff only even powers of `x` occur.
    pub fn is_even_in_x(&self) -> bool {
        self.terms.keys().all(|&(i, _)| i % 2 == 0)
    }

    /// True iff only odd powers of `x` occur (vacuously true for zero).
    pub fn is_odd_in_x(&self) -> bool {
        self.terms.keys().all(|&(i, _)| i % 2 == 1)
    }

    /// The polynomial `p(-x, y)`.
    pub fn flip_x(&self) -> Self {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| {
                    let c = if i % 2 == 1 { -c } else { c.clone() };
                    ((i, j), c)
                })
                .collect(),
        }
    }

    /// Substitutes `x := x_sub, y := y_sub`.
    pub fn compose_xy(&self, x_sub: &Poly2, y_sub: &Poly2) -> Poly2 {
        let max_i = self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let mut x_pows = Vec::with_capacity(max_i as usize + 1);
        let mut y_pows = Vec::with_capacity(max_j as usize + 1);
        x_pows.push(Poly2::constant(super::rat(1)));
        y_pows.push(Poly2::constant(super::rat(1)));
        for k in 1..=max_i as usize {
            x_pows.push(&x_pows[k - 1] * x_sub);
        }
        for k in 1..=max_j as usize {
            y_pows.push(&y_pows[k - 1] * y_sub);
        }
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            let term = &x_pows[i as usize] * &y_pows[j as usize];
            out = &out + &term.scale(c);
        }
        out
    }

    /// Substitutes `x := x + dx, y := y + dy`.
    pub fn translate(&self, dx: &Rational, dy: &Rational) -> Poly2 {
        let x_sub = Poly2::from_terms(&[(1, 0, super::rat(1)), (0, 0, dx.clone())]);
        let y_sub = Poly2::from_terms(&[(0, 1, super::rat(1)), (0, 0, dy.clone())]);
        self.compose_xy(&x_sub, &y_sub)
    }

    /// Homogeneous degree-`k` part.
    pub fn homogeneous_part(&self, k: u32) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j == k)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// The slice `p(x, 0)` as a univariate polynomial in `x`.
    pub fn restrict_y0(&self) -> Poly1 {
        let max_i = self
            .terms
            .keys()
            .filter(|&&(_, j)| j == 0)
            .map(|&(i, _)| i)
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![Rational::zero(); max_i as usize + 1];
        for (&(i, j), c) in &self.terms {
            if j == 0 {
                coeffs[i as usize] = c.clone();
            }
        }
        Poly1::new(coeffs)
    }

    /// Coefficients of `x^i` collected as a polynomial in `y`.
    pub fn x_slice(&self, i: u32) -> Poly1 {
        let max_j = self
            .terms
            .keys()
            .filter(|&&(ii, _)| ii == i)
            .map(|&(_, j)| j)
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![Rational::zero(); max_j as usize + 1];
        for (&(ii, j), c) in &self.terms {
            if ii == i {
                coeffs[j as usize] = c.clone();
            }
        }
        Poly1::new(coeffs)
    }

    /// Lossy `f64` form for hot evaluation loops.
    pub fn compile(&self) -> CompiledPoly2 {
        CompiledPoly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| (i as i32, j as i32, to_f64(c)))
                .collect(),
        }
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.insert_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.insert_term(i, j, -c);
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.insert_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (&(i, j), c) in &self.terms {
            let mut term = format!("{c}");
            if i == 1 {
                term.push_str("*x");
            } else if i > 1 {
                term.push_str(&format!("*x^{i}"));
            }
            if j == 1 {
                term.push_str("*y");
            } else if j > 1 {
                term.push_str(&format!("*y^{j}"));
            }
            parts.push(term);
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// Float-coefficient copy of a [`Poly2`] for repeated numeric evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly2 {
    terms: Vec<(i32, i32, f64)>,
}

impl CompiledPoly2 {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(i, j, c)| c * x.powi(i) * y.powi(j))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;
    use proptest::prelude::*;

    fn x() -> Poly2 {
        Poly2::monomial(1, 0, rat(1))
    }

    fn y() -> Poly2 {
        Poly2::monomial(0, 1, rat(1))
    }

    #[test]
    fn partial_derivatives() {
        // d/dx (x - x^3) = 1 - 3x^2
        let p = &x() - &Poly2::monomial(3, 0, rat(1));
        assert_eq!(
            p.diff_x(),
            Poly2::from_terms(&[(0, 0, rat(1)), (2, 0, rat(-3))])
        );
        // d/dy (y^2/2) = y
        let q = Poly2::monomial(0, 2, ratio(1, 2));
        assert_eq!(q.diff_y(), y());
        // d/dx (x^2 y) = 2xy
        let r = Poly2::monomial(2, 1, rat(1));
        assert_eq!(r.diff_x(), Poly2::monomial(1, 1, rat(2)));
    }

    #[test]
    fn eval_hamiltonian_at_saddle_level() {
        // H = y^2/2 - x^2/2 + x^4/4 at (1, 0) = -1/4
        let h = Poly2::from_terms(&[
            (0, 2, ratio(1, 2)),
            (2, 0, ratio(-1, 2)),
            (4, 0, ratio(1, 4)),
        ]);
        assert_eq!(h.eval(&rat(1), &rat(0)), ratio(-1, 4));
        // (x - x^3) at (-1, 0) = 0
        let p = &x() - &Poly2::monomial(3, 0, rat(1));
        assert_eq!(p.eval(&rat(-1), &rat(0)), rat(0));
    }

    #[test]
    fn parity_predicates() {
        let even = Poly2::from_terms(&[(0, 1, rat(1)), (2, 2, rat(3))]);
        assert!(even.is_even_in_x());
        assert!(!even.is_odd_in_x());
        let odd = Poly2::from_terms(&[(1, 0, rat(1)), (3, 1, rat(-2))]);
        assert!(odd.is_odd_in_x());
        assert_eq!(odd.flip_x(), -&odd);
        assert_eq!(even.flip_x(), even);
    }

    #[test]
    fn translate_shifts_roots() {
        // p = x^2 - 1 translated by x -> x+1 becomes x^2 + 2x
        let p = &(&x() * &x()) - &Poly2::constant(rat(1));
        let shifted = p.translate(&rat(1), &rat(0));
        assert_eq!(
            shifted,
            Poly2::from_terms(&[(2, 0, rat(1)), (1, 0, rat(2))])
        );
    }

    #[test]
    fn antiderivative_y_inverts_diff_y() {
        let p = Poly2::from_terms(&[(1, 0, rat(2)), (2, 1, ratio(3, 4)), (0, 3, rat(-1))]);
        assert_eq!(p.antiderivative_y().diff_y(), p);
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..8).prop_map(|(n, d)| ratio(n, d))
    }

    fn small_poly2() -> impl Strategy<Value = Poly2> {
        prop::collection::vec(((0u32..4, 0u32..4), small_rat()), 0..6).prop_map(|ts| {
            let mut p = Poly2::zero();
            for ((i, j), c) in ts {
                p.insert_term(i, j, c);
            }
            p
        })
    }

    proptest! {
        #[test]
        fn distributivity(p in small_poly2(), q in small_poly2(), r in small_poly2()) {
            prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        }

        #[test]
        fn eval_is_ring_homomorphism(p in small_poly2(), q in small_poly2()) {
            let (a, b) = (ratio(2, 3), ratio(-1, 2));
            let prod = &p * &q;
            prop_assert_eq!(prod.eval(&a, &b), p.eval(&a, &b) * q.eval(&a, &b));
        }
    }
}
