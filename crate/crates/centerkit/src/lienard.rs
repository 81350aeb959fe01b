//! The two reduction steps: the quotient substitution `ξ = x² - 1` taking
//! the normalized reversible field to a Liénard-type system, and the shear
//! `ξ = u - P2(y)` taking that system to Cherkas form.
//!
//! Sign and orientation conventions are pinned so that the unperturbed
//! system reduces to `P1 = 0, P2 = 0, P3 = 2y` (in particular `c1 = 2 > 0`);
//! the 1-form of the reduced system is then `2/(1 - b30)` times the 1-form
//! `fx dy - fy dx` of the original field, after `ξ = x² - 1, dξ = 2x dx`.
//! [`verify_quotient_identity`] replays exactly that substitution.

use num_traits::Zero;

use crate::exactpoly::{rat, Poly1, Poly2, Rational};
use crate::field::ReversibleParams;
use crate::{Error, Result};

/// The `(ξ, y)` system `ξ' = P3(y) + P1(y) ξ, y' = -ξ - P2(y)` with
/// `P1 = a0 + a1 y`, `P2 = b1 y + b2 y²`, `P3 = c1 y + c2 y² + c3 y³`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LienardSystem {
    pub p1: Poly1,
    pub p2: Poly1,
    pub p3: Poly1,
}

impl LienardSystem {
    pub fn new(p1: Poly1, p2: Poly1, p3: Poly1) -> Result<Self> {
        let ok = p1.deg().unwrap_or(0) <= 1
            && p2.deg().unwrap_or(0) <= 2
            && p2.coeff(0).is_zero()
            && p3.deg().unwrap_or(0) <= 3
            && p3.coeff(0).is_zero();
        if !ok {
            return Err(Error::BadInput(
                "Liénard data out of shape: need P1 = a0 + a1 y, P2 = b1 y + b2 y², P3 = c1 y + c2 y² + c3 y³"
                    .to_string(),
            ));
        }
        Ok(LienardSystem { p1, p2, p3 })
    }

    // Coefficient extraction is total: missing coefficients read as zero.
    pub fn a0(&self) -> Rational {
        self.p1.coeff(0)
    }
    pub fn a1(&self) -> Rational {
        self.p1.coeff(1)
    }
    pub fn b1(&self) -> Rational {
        self.p2.coeff(1)
    }
    pub fn b2(&self) -> Rational {
        self.p2.coeff(2)
    }
    pub fn c1(&self) -> Rational {
        self.p3.coeff(1)
    }
    pub fn c2(&self) -> Rational {
        self.p3.coeff(2)
    }
    pub fn c3(&self) -> Rational {
        self.p3.coeff(3)
    }
}

/// Cherkas form of a Liénard system: `y' = u, u' = -q(y) - u p(y)` with the
/// primitives `P(y) = ∫p` and `Q(y) = ∫q` used by the center criterion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CherkasForm {
    pub p: Poly1,
    pub q: Poly1,
    pub p_prim: Poly1,
    pub q_prim: Poly1,
}

/// Quotient reduction: substituting `ξ = x² - 1` in the normalized field
/// gives the Liénard data
///
/// ```text
/// P1 = 2 (a20 + a21 y) / (1 - b30)
/// P2 = (b11 y + b12 y²) / (b30 - 1)
/// P3 = 2 ((1 + a01 + a21) y + a02 y² + a03 y³) / (1 - b30)
/// ```
pub fn reduce_quotient(params: &ReversibleParams) -> Result<LienardSystem> {
    let unit = rat(1) - &params.b30;
    if unit.is_zero() {
        return Err(Error::SingularReduction);
    }
    let two_over = rat(2) / &unit;
    let p1 = Poly1::new(vec![&params.a20 * &two_over, &params.a21 * &two_over]);
    let p2 = Poly1::new(vec![
        Rational::zero(),
        -(&params.b11 / &unit),
        -(&params.b12 / &unit),
    ]);
    let p3 = Poly1::new(vec![
        Rational::zero(),
        (rat(1) + &params.a01 + &params.a21) * &two_over,
        &params.a02 * &two_over,
        &params.a03 * &two_over,
    ]);
    LienardSystem::new(p1, p2, p3)
}

/// Replays the quotient substitution symbolically and checks the result is
/// proportional to the original 1-form by the fixed unit `2/(1 - b30)`.
///
/// Concretely, with `ξ = x² - 1` and `dξ = 2x dx`, the Liénard 1-form
/// `(ξ + P2) dξ + (P3 + P1 ξ) dy` must equal
/// `2/(1 - b30) · (fx dy - fy dx)` coefficient by coefficient:
///
/// ```text
/// (1 - b30) · 2x (x² - 1 + P2(y))  == -2 fy
/// (1 - b30) · (P3(y) + P1(y)(x²-1)) ==  2 fx
/// ```
pub fn verify_quotient_identity(params: &ReversibleParams, l: &LienardSystem) -> bool {
    let unit = rat(1) - &params.b30;
    if unit.is_zero() {
        return false;
    }
    let f = params.build();
    let xi = Poly2::from_terms(&[(2, 0, rat(1)), (0, 0, rat(-1))]);
    let two_x = Poly2::monomial(1, 0, rat(2));

    let dx_part = &two_x * &(&xi + &l.p2.as_poly2_in_y());
    let dy_part = &l.p3.as_poly2_in_y() + &(&l.p1.as_poly2_in_y() * &xi);

    let lhs_dx = dx_part.scale(&unit);
    let lhs_dy = dy_part.scale(&unit);
    let rhs_dx = f.fy.scale(&rat(-2));
    let rhs_dy = f.fx.scale(&rat(2));
    lhs_dx == rhs_dx && lhs_dy == rhs_dy
}

/// Shear `ξ = u - P2(y)`: turns the `(ξ, y)` system into the Liénard
/// equation `y' = u, u' = -q(y) - u p(y)` with
///
/// ```text
/// p = (a0 - b1) + (a1 - 2 b2) y
/// q = (c1 - a0 b1) y + (c2 - a0 b2 - a1 b1) y² + (c3 - a1 b2) y³
/// ```
pub fn to_cherkas(l: &LienardSystem) -> CherkasForm {
    let (a0, a1) = (l.a0(), l.a1());
    let (b1, b2) = (l.b1(), l.b2());
    let (c1, c2, c3) = (l.c1(), l.c2(), l.c3());
    let p = Poly1::new(vec![&a0 - &b1, &a1 - &(rat(2) * &b2)]);
    let q = Poly1::new(vec![
        Rational::zero(),
        &c1 - &(&a0 * &b1),
        &c2 - &(&a0 * &b2) - &a1 * &b1,
        &c3 - &(&a1 * &b2),
    ]);
    let p_prim = p.antiderivative();
    let q_prim = q.antiderivative();
    CherkasForm {
        p,
        q,
        p_prim,
        q_prim,
    }
}

/// Float mirror of the quotient reduction + shear, used downstream of the
/// float fallback of normalization (comparisons there are toleranced).
#[derive(Clone, Copy, Debug)]
pub struct CherkasFormF64 {
    /// `p = p0 + p1 y`
    pub p0: f64,
    pub p1: f64,
    /// `q = q1 y + q2 y² + q3 y³`
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

pub fn reduce_to_cherkas_f64(p: &crate::field::ReversibleParamsF64) -> Result<CherkasFormF64> {
    let unit = 1.0 - p.b30;
    if unit.abs() < 1e-300 {
        return Err(Error::SingularReduction);
    }
    let a0 = 2.0 * p.a20 / unit;
    let a1 = 2.0 * p.a21 / unit;
    let b1 = -p.b11 / unit;
    let b2 = -p.b12 / unit;
    let c1 = 2.0 * (1.0 + p.a01 + p.a21) / unit;
    let c2 = 2.0 * p.a02 / unit;
    let c3 = 2.0 * p.a03 / unit;
    Ok(CherkasFormF64 {
        p0: a0 - b1,
        p1: a1 - 2.0 * b2,
        q1: c1 - a0 * b1,
        q2: c2 - a0 * b2 - a1 * b1,
        q3: c3 - a1 * b2,
    })
}

/// Checks the shear identity on the 1-form level: substituting
/// `ξ = u - P2(y)` into `(ξ + P2) dξ + (P3 + P1 ξ) dy` must give
/// `u du + (u p(y) + q(y)) dy`. Used by tests; [`to_cherkas`] computes the
/// closed-form coefficients directly.
pub fn verify_shear_identity(l: &LienardSystem, c: &CherkasForm) -> bool {
    // Work in variables (u, y): x-slot is u, y-slot is y.
    let u = Poly2::monomial(1, 0, rat(1));
    let p2 = l.p2.as_poly2_in_y();
    let p2_prime = l.p2.derivative().as_poly2_in_y();
    let xi = &u - &p2;
    // dξ = du - P2'(y) dy
    // (ξ + P2) dξ + (P3 + P1 ξ) dy
    //   = u du + [ -u P2' + P3 + P1 (u - P2) ] dy
    let du_part = u.clone();
    let dy_part = &(&(-&(&u * &p2_prime)) + &l.p3.as_poly2_in_y())
        + &(&l.p1.as_poly2_in_y() * &xi);
    let want_du = u.clone();
    let want_dy = &(&u * &c.p.as_poly2_in_y()) + &c.q.as_poly2_in_y();
    du_part == want_du && dy_part == want_dy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::ratio;
    use proptest::prelude::*;

    fn params(vals: [(i64, i64); 8]) -> ReversibleParams {
        let r = |(n, d): (i64, i64)| ratio(n, d);
        ReversibleParams {
            a20: r(vals[0]),
            a21: r(vals[1]),
            a01: r(vals[2]),
            a02: r(vals[3]),
            a03: r(vals[4]),
            b11: r(vals[5]),
            b12: r(vals[6]),
            b30: r(vals[7]),
        }
    }

    #[test]
    fn unperturbed_reduces_to_p3_equals_2y() {
        let l = reduce_quotient(&ReversibleParams::default()).unwrap();
        assert!(l.p1.is_zero());
        assert!(l.p2.is_zero());
        assert_eq!(l.p3, Poly1::from_ints(&[0, 2]));
        assert!(verify_quotient_identity(&ReversibleParams::default(), &l));
    }

    #[test]
    fn dictionary_a0_and_b1_entries() {
        // a20 = 1/10, b30 = 0 => a0 = 1/5
        let l = reduce_quotient(&params([(1, 10), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)]))
            .unwrap();
        assert_eq!(l.a0(), ratio(1, 5));
        // b11 = 1/10, b30 = 0 => b1 = -1/10
        let l = reduce_quotient(&params([(0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 10), (0, 1), (0, 1)]))
            .unwrap();
        assert_eq!(l.b1(), ratio(-1, 10));
    }

    #[test]
    fn b30_equal_one_is_singular() {
        let mut p = ReversibleParams::default();
        p.b30 = rat(1);
        assert!(matches!(reduce_quotient(&p), Err(Error::SingularReduction)));
    }

    #[test]
    fn tampered_reduction_fails_the_identity() {
        let p = params([(1, 10), (1, 8), (1, 9), (-1, 7), (1, 6), (2, 11), (-1, 5), (1, 12)]);
        let l = reduce_quotient(&p).unwrap();
        assert!(verify_quotient_identity(&p, &l));
        // bump c1 by 1
        let bad = LienardSystem::new(
            l.p1.clone(),
            l.p2.clone(),
            &l.p3 + &Poly1::from_ints(&[0, 1]),
        )
        .unwrap();
        assert!(!verify_quotient_identity(&p, &bad));
    }

    #[test]
    fn cherkas_examples() {
        // a0 = b1 = 0, a1 = 1, b2 = 0, c = (2,0,0) => p = y, q = 2y
        let l = LienardSystem::new(
            Poly1::from_ints(&[0, 1]),
            Poly1::zero(),
            Poly1::from_ints(&[0, 2]),
        )
        .unwrap();
        let c = to_cherkas(&l);
        assert_eq!(c.p, Poly1::from_ints(&[0, 1]));
        assert_eq!(c.q, Poly1::from_ints(&[0, 2]));
        // unperturbed: p = 0, q = 2y, primitives y²
        let l0 = reduce_quotient(&ReversibleParams::default()).unwrap();
        let c0 = to_cherkas(&l0);
        assert!(c0.p.is_zero());
        assert_eq!(c0.q, Poly1::from_ints(&[0, 2]));
        assert_eq!(c0.q_prim, Poly1::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn trace_matched_shear_kills_p() {
        // a0 = b1, a1 = 2 b2 => p ≡ 0
        let l = LienardSystem::new(
            Poly1::new(vec![ratio(2, 7), ratio(6, 5)]),
            Poly1::new(vec![rat(0), ratio(2, 7), ratio(3, 5)]),
            Poly1::from_ints(&[0, 2, 1, 1]),
        )
        .unwrap();
        assert!(to_cherkas(&l).p.is_zero());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-16i64..=16,).prop_map(|(n,)| ratio(n, 64))
    }

    fn arb_params() -> impl Strategy<Value = ReversibleParams> {
        (
            small_rat(),
            small_rat(),
            small_rat(),
            small_rat(),
            small_rat(),
            small_rat(),
            small_rat(),
            small_rat(),
        )
            .prop_map(|(a20, a21, a01, a02, a03, b11, b12, b30)| ReversibleParams {
                a20,
                a21,
                a01,
                a02,
                a03,
                b11,
                b12,
                b30,
            })
    }

    proptest! {
        #[test]
        fn quotient_identity_holds_for_random_params(p in arb_params()) {
            prop_assume!(!(&p.b30 - &rat(1)).is_zero());
            let l = reduce_quotient(&p).unwrap();
            prop_assert!(verify_quotient_identity(&p, &l));
        }

        #[test]
        fn shear_identity_holds(p in arb_params()) {
            prop_assume!(!(&p.b30 - &rat(1)).is_zero());
            let l = reduce_quotient(&p).unwrap();
            let c = to_cherkas(&l);
            prop_assert!(verify_shear_identity(&l, &c));
        }

        #[test]
        fn coefficient_dictionary_round_trip(p in arb_params()) {
            prop_assume!(!(&p.b30 - &rat(1)).is_zero());
            let l = reduce_quotient(&p).unwrap();
            let unit = rat(1) - &p.b30;
            prop_assert_eq!(l.a0(), rat(2) * &p.a20 / &unit);
            prop_assert_eq!(l.a1(), rat(2) * &p.a21 / &unit);
            prop_assert_eq!(l.b1(), -(&p.b11 / &unit));
            prop_assert_eq!(l.b2(), -(&p.b12 / &unit));
            prop_assert_eq!(l.c1(), rat(2) * (rat(1) + &p.a01 + &p.a21) / &unit);
            prop_assert_eq!(l.c2(), rat(2) * &p.a02 / &unit);
            prop_assert_eq!(l.c3(), rat(2) * &p.a03 / &unit);
        }
    }
}
