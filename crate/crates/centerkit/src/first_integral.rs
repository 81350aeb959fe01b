//! First-integral witnesses for the two center strata.
//!
//! Divergence-free fields get an exact polynomial Hamiltonian. Fields on the
//! pull-back stratum get the logarithmic (Darboux) first integral of the
//! quotient linear system, composed with the polynomial map
//! `(x, y) -> (u, v) = (x² - 1 + P2(y), y²)`.
//!
//! The quotient linear system lives in `(v, u)` coordinates:
//!
//! ```text
//! v' = 2u
//! u' = -A - B v - C u,   A = c1 - a0 b1,  B = c3 - a1 b2,  C = a1 - 2 b2
//! ```
//!
//! With an equilibrium (`B ≠ 0`) its eigenvalues solve `μ² + C μ + 2B = 0`.
//! The real-eigenvalue integral `l1^α l2^β` (`α = μ2, β = -μ1`) is verified
//! symbolically over `Q(√(C² - 8B))`; the complex-eigenvalue integral is a
//! branch-tracked combination `τ·log|l|² - 2σ·arg(l)` validated along
//! trajectories. Two degenerate shapes occur on the stratum and carry their
//! own witnesses: `C = 0` (the linear system is itself Hamiltonian, integral
//! `B v² + 2A v + 2u²`) and `B = 0, C ≠ 0` (no equilibrium; integral
//! `v + 2u/C - (2A/C²)·log|A + C u|`).

use num_traits::{Signed, Zero};

use crate::exactpoly::{rat, sign, to_f64, CompiledPoly2, Poly1, Poly2, QuadExt, Rational};
use crate::field::{divergence, CubicField, ReversibleParams};
use crate::flow::Trajectory;
use crate::lienard::{reduce_quotient, to_cherkas, CherkasForm};
use crate::strata::{classify_reversible, Stratum};
use crate::{Error, Result};

/// Exact polynomial Hamiltonian of a divergence-free cubic field:
/// `∂H/∂y = fx`, `-∂H/∂x = fy`, zero constant term.
pub fn hamiltonian_integral(f: &CubicField) -> Result<Poly2> {
    let div = divergence(f);
    if !div.is_zero() {
        return Err(Error::NotHamiltonian(format!("divergence = {div}")));
    }
    // H(x, y) = ∫ fx dy + φ(x) with φ'(x) = -fy(x, 0).
    let partial = f.fx.antiderivative_y();
    let phi = (-&f.fy.restrict_y0()).antiderivative().as_poly2_in_x();
    let h = &partial + &phi;
    if h.diff_y() != f.fx || h.diff_x() != -&f.fy {
        return Err(Error::NotHamiltonian(
            "cross-derivative consistency failed".to_string(),
        ));
    }
    Ok(h)
}

/// Eigen-geometry of the quotient linear system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EigenStructure {
    /// `B = 0`: no equilibrium, degenerate parabolic flow.
    Parabolic,
    /// Two distinct real eigenvalues; `disc = C² - 8B > 0`.
    RealPair { disc: Rational },
    /// Complex conjugate pair; `disc < 0`.
    ComplexPair { disc: Rational },
    /// `disc = 0`: repeated eigenvalue.
    Repeated,
}

/// The linear system `v' = 2u, u' = -A - Bv - Cu` extracted from a Cherkas
/// form on the pull-back stratum (`p(0) = 0` and `[y²] q = 0`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearQuotient {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    /// `-A/B` when `B ≠ 0`.
    pub equilibrium_v: Option<Rational>,
    pub eigen: EigenStructure,
}

impl LinearQuotient {
    /// The field components as bivariate polynomials in `(v, u)`
    /// (`x`-slot = `v`, `y`-slot = `u`).
    pub fn field_vu(&self) -> (Poly2, Poly2) {
        let v_dot = Poly2::monomial(0, 1, rat(2));
        let u_dot = Poly2::from_terms(&[
            (0, 0, -&self.a),
            (1, 0, -&self.b),
            (0, 1, -&self.c),
        ]);
        (v_dot, u_dot)
    }
}

/// Reads `A = [y] q`, `B = [y³] q`, `C = [y] p` off the Cherkas form and
/// classifies the eigen-structure of `μ² + Cμ + 2B`.
pub fn build_linear_quotient(cherkas: &CherkasForm) -> Result<LinearQuotient> {
    let a = cherkas.q.coeff(1);
    let b = cherkas.q.coeff(3);
    let c = cherkas.p.coeff(1);
    if a.is_zero() && b.is_zero() {
        return Err(Error::DegenerateLinear("A = B = 0".to_string()));
    }
    let (equilibrium_v, eigen) = if b.is_zero() {
        (None, EigenStructure::Parabolic)
    } else {
        let disc = &c * &c - rat(8) * &b;
        let eigen = match sign(&disc) {
            1 => EigenStructure::RealPair { disc },
            -1 => EigenStructure::ComplexPair { disc },
            _ => EigenStructure::Repeated,
        };
        (Some(-(&a / &b)), eigen)
    };
    Ok(LinearQuotient {
        a,
        b,
        c,
        equilibrium_v,
        eigen,
    })
}

/// Linear form `cv·v + cu·u + c0` with coefficients in `Q(√disc)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearFormQ {
    pub cv: QuadExt,
    pub cu: QuadExt,
    pub c0: QuadExt,
}

impl LinearFormQ {
    pub fn eval_f64(&self, v: f64, u: f64) -> f64 {
        self.cv.to_f64() * v + self.cu.to_f64() * u + self.c0.to_f64()
    }
}

/// First integral of the quotient linear system.
#[derive(Clone, Debug)]
pub enum DarbouxIntegral {
    /// `l1^α l2^β` with `α = μ2, β = -μ1`; evaluated as
    /// `α·log|l1| + β·log|l2|`.
    RealEigen {
        mu1: QuadExt,
        mu2: QuadExt,
        l1: LinearFormQ,
        l2: LinearFormQ,
        alpha: QuadExt,
        beta: QuadExt,
    },
    /// Eigenvalues `σ ± iτ`: the invariant is `τ·log|l|² - 2σ·arg(l)` with
    /// `l = (σ+C)(v - v*) + 2u + i·τ(v - v*)`; the argument needs branch
    /// tracking along orbits, so pointwise evaluation uses the principal
    /// branch.
    ComplexEigen {
        sigma: Rational,
        /// `τ² = 2B - C²/4 > 0`, kept exact; `τ` itself is a square root.
        tau_sq: Rational,
        v_star: Rational,
        c: Rational,
    },
    /// `C = 0`: the linear system is Hamiltonian with polynomial integral
    /// `B v² + 2A v + 2u²` (valid also when `B = 0`).
    HamiltonianDegenerate { poly: Poly2 },
    /// `B = 0, C ≠ 0`: integral `v + 2u/C - (2A/C²)·log|A + C u|`.
    ParabolicLog { a: Rational, c: Rational },
}

impl DarbouxIntegral {
    /// Principal-branch value at `(v, u)`.
    pub fn eval(&self, v: f64, u: f64) -> f64 {
        match self {
            DarbouxIntegral::RealEigen {
                l1, l2, alpha, beta, ..
            } => {
                alpha.to_f64() * l1.eval_f64(v, u).abs().ln()
                    + beta.to_f64() * l2.eval_f64(v, u).abs().ln()
            }
            DarbouxIntegral::ComplexEigen { .. } => {
                let (log_mod_sq, theta) = self.complex_parts(v, u);
                let (sigma, tau) = self.sigma_tau();
                tau * log_mod_sq - 2.0 * sigma * theta
            }
            DarbouxIntegral::HamiltonianDegenerate { poly } => poly.eval_f64(v, u),
            DarbouxIntegral::ParabolicLog { a, c } => {
                let (a, c) = (to_f64(a), to_f64(c));
                v + 2.0 * u / c - (2.0 * a / (c * c)) * (a + c * u).abs().ln()
            }
        }
    }

    fn sigma_tau(&self) -> (f64, f64) {
        match self {
            DarbouxIntegral::ComplexEigen { sigma, tau_sq, .. } => {
                (to_f64(sigma), to_f64(tau_sq).sqrt())
            }
            _ => unreachable!("sigma_tau is only defined for the complex case"),
        }
    }

    /// `(log|l|², arg l)` for the complex case, principal branch.
    fn complex_parts(&self, v: f64, u: f64) -> (f64, f64) {
        match self {
            DarbouxIntegral::ComplexEigen {
                sigma,
                tau_sq,
                v_star,
                c,
            } => {
                let w = v - to_f64(v_star);
                let tau = to_f64(tau_sq).sqrt();
                let lr = (to_f64(sigma) + to_f64(c)) * w + 2.0 * u;
                let li = tau * w;
                ((lr * lr + li * li).ln(), li.atan2(lr))
            }
            _ => unreachable!(),
        }
    }

    /// Max relative drift of the integral along a sequence of `(v, u)`
    /// samples; unwinds the argument branch in the complex case.
    pub fn drift_on_samples<I: IntoIterator<Item = (f64, f64)>>(&self, samples: I) -> f64 {
        match self {
            DarbouxIntegral::ComplexEigen { .. } => {
                let (sigma, tau) = self.sigma_tau();
                let mut theta_prev: Option<f64> = None;
                let mut winding = 0.0f64;
                let mut f0: Option<f64> = None;
                let mut worst = 0.0f64;
                for (v, u) in samples {
                    let (log_mod_sq, theta) = self.complex_parts(v, u);
                    if let Some(prev) = theta_prev {
                        let mut dt = theta - prev;
                        while dt > std::f64::consts::PI {
                            dt -= 2.0 * std::f64::consts::PI;
                            winding -= 2.0 * std::f64::consts::PI;
                        }
                        while dt < -std::f64::consts::PI {
                            dt += 2.0 * std::f64::consts::PI;
                            winding += 2.0 * std::f64::consts::PI;
                        }
                    }
                    theta_prev = Some(theta);
                    let value = tau * log_mod_sq - 2.0 * sigma * (theta + winding);
                    match f0 {
                        None => f0 = Some(value),
                        Some(first) => {
                            worst = worst.max((value - first).abs() / first.abs().max(1.0));
                        }
                    }
                }
                worst
            }
            _ => {
                let mut f0: Option<f64> = None;
                let mut worst = 0.0f64;
                for (v, u) in samples {
                    let value = self.eval(v, u);
                    match f0 {
                        None => f0 = Some(value),
                        Some(first) => {
                            worst = worst.max((value - first).abs() / first.abs().max(1.0));
                        }
                    }
                }
                worst
            }
        }
    }

    /// Symbolic Lie-derivative check along the linear field, where the case
    /// admits one (everything except the complex pair, whose contract is
    /// numeric conservation along orbits).
    pub fn verify_symbolic(&self, lq: &LinearQuotient) -> bool {
        let (v_dot, u_dot) = lq.field_vu();
        match self {
            DarbouxIntegral::RealEigen {
                mu1,
                mu2,
                l1,
                l2,
                alpha,
                beta,
            } => {
                // ∇l·X = μ l for both eigen-covectors, and α μ1 + β μ2 = 0.
                let ok1 = eigen_identity(lq, l1, mu1);
                let ok2 = eigen_identity(lq, l2, mu2);
                let combo = &(alpha * mu1) + &(beta * mu2);
                ok1 && ok2 && combo.is_zero()
            }
            DarbouxIntegral::HamiltonianDegenerate { poly } => {
                let lie = &(&poly.diff_x() * &v_dot) + &(&poly.diff_y() * &u_dot);
                lie.is_zero()
            }
            DarbouxIntegral::ParabolicLog { a, c } => {
                // (A + Cu)·(v' + (2/C) u') - (2A/C)·u' == 0
                let line = Poly2::from_terms(&[(0, 0, a.clone()), (0, 1, c.clone())]);
                let two_over_c = rat(2) / c;
                let lie = &(&line * &(&v_dot + &u_dot.scale(&two_over_c)))
                    - &u_dot.scale(&(rat(2) * a / c));
                lie.is_zero()
            }
            DarbouxIntegral::ComplexEigen { .. } => true,
        }
    }
}

/// Checks `∇l · X = μ l` as an identity over `Q(√disc)`.
fn eigen_identity(lq: &LinearQuotient, l: &LinearFormQ, mu: &QuadExt) -> bool {
    let disc = mu.disc.clone();
    let q = |r: &Rational| QuadExt::from_rational(r.clone(), disc.clone());
    // ∇l·X has v-coefficient -B·cu, u-coefficient 2·cv - C·cu,
    // constant -A·cu.
    let dv = &q(&-&lq.b) * &l.cu;
    let du = &(&q(&rat(2)) * &l.cv) - &(&q(&lq.c) * &l.cu);
    let d0 = &q(&-&lq.a) * &l.cu;
    let mv = mu * &l.cv;
    let muu = mu * &l.cu;
    let m0 = mu * &l.c0;
    (&dv - &mv).is_zero() && (&du - &muu).is_zero() && (&d0 - &m0).is_zero()
}

/// Constructs the first integral of the quotient linear system.
pub fn darboux_integral(lq: &LinearQuotient) -> Result<DarbouxIntegral> {
    if lq.c.is_zero() {
        // Hamiltonian subcase: B v² + 2A v + 2u².
        let poly = Poly2::from_terms(&[
            (2, 0, lq.b.clone()),
            (1, 0, rat(2) * &lq.a),
            (0, 2, rat(2)),
        ]);
        let out = DarbouxIntegral::HamiltonianDegenerate { poly };
        debug_assert!(out.verify_symbolic(lq));
        return Ok(out);
    }
    if lq.b.is_zero() {
        let out = DarbouxIntegral::ParabolicLog {
            a: lq.a.clone(),
            c: lq.c.clone(),
        };
        debug_assert!(out.verify_symbolic(lq));
        return Ok(out);
    }
    let v_star = lq
        .equilibrium_v
        .clone()
        .expect("B != 0 guarantees an equilibrium");
    match &lq.eigen {
        EigenStructure::RealPair { disc } => {
            // μ = (-C ± √disc)/2; eigen-covector for μ is (μ+C, 2) in (w, u)
            // with w = v - v*.
            let half = rat(1) / rat(2);
            let s = QuadExt::sqrt_disc(disc.clone());
            let minus_c = QuadExt::from_rational(-&lq.c, disc.clone());
            let mu1 = (&minus_c - &s).scale(&half);
            let mu2 = (&minus_c + &s).scale(&half);
            let form = |mu: &QuadExt| {
                let cv = mu + &QuadExt::from_rational(lq.c.clone(), disc.clone());
                LinearFormQ {
                    c0: &(-&cv) * &QuadExt::from_rational(v_star.clone(), disc.clone()),
                    cu: QuadExt::from_rational(rat(2), disc.clone()),
                    cv,
                }
            };
            let out = DarbouxIntegral::RealEigen {
                l1: form(&mu1),
                l2: form(&mu2),
                alpha: mu2.clone(),
                beta: -&mu1,
                mu1,
                mu2,
            };
            if !out.verify_symbolic(lq) {
                return Err(Error::DegenerateLinear(
                    "eigen identities failed symbolically".to_string(),
                ));
            }
            Ok(out)
        }
        EigenStructure::ComplexPair { .. } => {
            // σ = -C/2, τ² = 2B - C²/4.
            let sigma = -&lq.c / rat(2);
            let tau_sq = rat(2) * &lq.b - &(&lq.c * &lq.c) / rat(4);
            debug_assert!(tau_sq.is_positive());
            Ok(DarbouxIntegral::ComplexEigen {
                sigma,
                tau_sq,
                v_star,
                c: lq.c.clone(),
            })
        }
        EigenStructure::Repeated => Err(Error::DegenerateLinear(
            "repeated eigenvalue: no logarithmic pair of distinct forms".to_string(),
        )),
        EigenStructure::Parabolic => unreachable!("B = 0 handled above"),
    }
}

/// The polynomial map `(x, y) -> (u, v) = (x² - 1 + P2(y), y²)` realizing
/// the pull-back, with `P2(y) = (b11 y + b12 y²)/(b30 - 1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PullbackMap {
    pub u_comp: Poly2,
    pub v_comp: Poly2,
}

pub fn pullback_map(params: &ReversibleParams) -> Result<PullbackMap> {
    let l = reduce_quotient(params)?;
    let u_comp = &Poly2::from_terms(&[(2, 0, rat(1)), (0, 0, rat(-1))]) + &l.p2.as_poly2_in_y();
    let v_comp = Poly2::monomial(0, 2, rat(1));
    Ok(PullbackMap { u_comp, v_comp })
}

/// Darboux integral composed with the pull-back map: an evaluable scalar
/// field on `(x, y)`, constant along trajectories of the cubic field.
#[derive(Clone, Debug)]
pub struct PullbackIntegral {
    pub map: PullbackMap,
    pub darboux: DarbouxIntegral,
    u_comp: CompiledPoly2,
    v_comp: CompiledPoly2,
}

impl PullbackIntegral {
    /// Principal-branch value at `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let u = self.u_comp.eval(x, y);
        let v = self.v_comp.eval(x, y);
        self.darboux.eval(v, u)
    }

    /// Max relative drift along a trajectory, branch-tracked where needed.
    pub fn drift_along(&self, traj: &Trajectory) -> f64 {
        self.darboux.drift_on_samples(traj.samples.iter().map(|p| {
            (
                self.v_comp.eval(p.x, p.y),
                self.u_comp.eval(p.x, p.y),
            )
        }))
    }
}

/// Builds the pulled-back first integral for parameters on the pull-back
/// stratum (verdict `PullBack` or `Both`).
pub fn pullback_integral(params: &ReversibleParams) -> Result<PullbackIntegral> {
    let verdict = classify_reversible(params)?;
    if !matches!(verdict.stratum, Stratum::PullBack | Stratum::Both) {
        return Err(Error::NotPullBack);
    }
    let cherkas = to_cherkas(&reduce_quotient(params)?);
    let lq = build_linear_quotient(&cherkas)?;
    let darboux = darboux_integral(&lq)?;
    let map = pullback_map(params)?;
    let u_comp = map.u_comp.compile();
    let v_comp = map.v_comp.compile();
    Ok(PullbackIntegral {
        map,
        darboux,
        u_comp,
        v_comp,
    })
}

/// Symbolic conjugacy check: the derivative of the map component
/// `u = x² - 1 + P2(y)` along the cubic field must equal the restricted
/// Liénard right-hand side at the mapped point, up to the common unit
/// `-(1 - b30)·x` generated by `dξ = 2x dx`:
///
/// ```text
/// fy                 == -(1 - b30)·x·u(x,y)
/// 2x·fx + P2'(y)·fy  ==  (1 - b30)·x·( q̂(y) + u(x,y)·p̂(y) )
/// ```
///
/// with `p̂ = (a1 - 2b2) y` and `q̂ = (c1 - a0 b1) y + (c3 - a1 b2) y³` (the
/// stratum-restricted Cherkas data). Both identities hold exactly on the
/// pull-back stratum and fail off it.
pub fn verify_pullback_conjugacy(params: &ReversibleParams) -> Result<bool> {
    let l = reduce_quotient(params)?;
    let f = params.build();
    let unit = rat(1) - &params.b30;

    let p_hat = Poly1::new(vec![Rational::zero(), &l.a1() - &(rat(2) * &l.b2())]);
    let q_hat = Poly1::new(vec![
        Rational::zero(),
        &l.c1() - &(&l.a0() * &l.b1()),
        Rational::zero(),
        &l.c3() - &(&l.a1() * &l.b2()),
    ]);
    let u_poly = &Poly2::from_terms(&[(2, 0, rat(1)), (0, 0, rat(-1))]) + &l.p2.as_poly2_in_y();
    let x = Poly2::monomial(1, 0, rat(1));

    let first = f.fy == (&x * &u_poly).scale(&-&unit);
    let lhs = &(&Poly2::monomial(1, 0, rat(2)) * &f.fx)
        + &(&l.p2.derivative().as_poly2_in_y() * &f.fy);
    let rhs = (&x * &(&q_hat.as_poly2_in_y() + &(&u_poly * &p_hat.as_poly2_in_y()))).scale(&unit);
    Ok(first && lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::ratio;
    use crate::flow;

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

    fn pullback_sample() -> ReversibleParams {
        params([(1, 10), (3, 10), (0, 1), (1, 20), (0, 1), (-1, 5), (1, 10), (0, 1)])
    }

    fn hamiltonian_sample() -> ReversibleParams {
        params([(1, 10), (3, 10), (0, 1), (0, 1), (0, 1), (-1, 5), (-3, 10), (0, 1)])
    }

    #[test]
    fn unperturbed_hamiltonian_is_the_quartic() {
        let h = hamiltonian_integral(&CubicField::unperturbed()).unwrap();
        let expect = Poly2::from_terms(&[
            (0, 2, ratio(1, 2)),
            (2, 0, ratio(-1, 2)),
            (4, 0, ratio(1, 4)),
        ]);
        assert_eq!(h, expect);
    }

    #[test]
    fn hamiltonian_integral_checks_by_redifferentiation() {
        let mut p = hamiltonian_sample();
        p.a02 = rat(1);
        let f = p.build();
        let h = hamiltonian_integral(&f).unwrap();
        assert_eq!(h.diff_y(), f.fx);
        assert_eq!(h.diff_x(), -&f.fy);
        assert_eq!(h.eval(&rat(0), &rat(0)), rat(0));
    }

    #[test]
    fn focus_field_is_rejected() {
        let p = params([(1, 10), (0, 1), (0, 1), (0, 1), (0, 1), (-1, 5), (1, 10), (0, 1)]);
        assert!(matches!(
            hamiltonian_integral(&p.build()),
            Err(Error::NotHamiltonian(_))
        ));
    }

    fn quotient(a: i64, b: i64, c: i64) -> LinearQuotient {
        // assemble a Cherkas form with q = a y + b y³, p = c y
        let cherkas = CherkasForm {
            p: Poly1::from_ints(&[0, c]),
            q: Poly1::from_ints(&[0, a, 0, b]),
            p_prim: Poly1::from_ints(&[0, c]).antiderivative(),
            q_prim: Poly1::from_ints(&[0, a, 0, b]).antiderivative(),
        };
        build_linear_quotient(&cherkas).unwrap()
    }

    #[test]
    fn parabolic_case_is_flagged() {
        let lq = quotient(2, 0, 0);
        assert_eq!(lq.eigen, EigenStructure::Parabolic);
        assert!(lq.equilibrium_v.is_none());
    }

    #[test]
    fn hamiltonian_degenerate_case_gives_a_quadratic_polynomial() {
        // A = 2, B = 1, C = 0
        let lq = quotient(2, 1, 0);
        let integral = darboux_integral(&lq).unwrap();
        match &integral {
            DarbouxIntegral::HamiltonianDegenerate { poly } => {
                // B v² + 2A v + 2u² = v² + 4v + 2u²
                let expect = Poly2::from_terms(&[(2, 0, rat(1)), (1, 0, rat(4)), (0, 2, rat(2))]);
                assert_eq!(poly, &expect);
            }
            other => panic!("expected HamiltonianDegenerate, got {other:?}"),
        }
        assert!(integral.verify_symbolic(&lq));
    }

    #[test]
    fn complex_case_matches_hand_characteristic_polynomial() {
        // A = 2, B = 1, C = 1: matrix [[0,2],[-1,-1]], char μ² + μ + 2
        let lq = quotient(2, 1, 1);
        assert!(matches!(lq.eigen, EigenStructure::ComplexPair { .. }));
        match darboux_integral(&lq).unwrap() {
            DarbouxIntegral::ComplexEigen { sigma, tau_sq, .. } => {
                assert_eq!(sigma, ratio(-1, 2));
                assert_eq!(tau_sq, ratio(7, 4)); // 2B - C²/4
            }
            other => panic!("expected ComplexEigen, got {other:?}"),
        }
    }

    #[test]
    fn real_case_eigenvalues_one_and_two() {
        // eigenvalues 1, 2 <=> μ² - 3μ + 2 = μ² + Cμ + 2B: C = -3, B = 1
        let lq = quotient(2, 1, -3);
        let integral = darboux_integral(&lq).unwrap();
        match &integral {
            DarbouxIntegral::RealEigen { mu1, mu2, alpha, beta, .. } => {
                assert_eq!(mu1.to_f64(), 1.0);
                assert_eq!(mu2.to_f64(), 2.0);
                // l1^2 l2^{-1}
                assert_eq!(alpha.to_f64(), 2.0);
                assert_eq!(beta.to_f64(), -1.0);
            }
            other => panic!("expected RealEigen, got {other:?}"),
        }
        assert!(integral.verify_symbolic(&lq));
    }

    #[test]
    fn complex_integral_is_constant_along_linear_trajectories() {
        // integrate the linear system v' = 2u, u' = -A - Bv - Cu as a cubic
        // field in (v, u) and track the branch-corrected invariant
        let lq = quotient(2, 1, 1);
        let integral = darboux_integral(&lq).unwrap();
        let field = {
            let (v_dot, u_dot) = lq.field_vu();
            CubicField::new(v_dot, u_dot).unwrap()
        };
        let traj = flow::integrate_dense(&field, 0.0, 0.0, 20.0, 0.01, 1e-12, 1e-14).unwrap();
        let drift =
            integral.drift_on_samples(traj.samples.iter().map(|p| (p.x, p.y)));
        assert!(drift < 1e-9, "drift = {drift:e}");
    }

    #[test]
    fn parabolic_log_integral_is_symbolically_invariant() {
        let lq = quotient(2, 0, 1);
        let integral = darboux_integral(&lq).unwrap();
        assert!(matches!(integral, DarbouxIntegral::ParabolicLog { .. }));
        assert!(integral.verify_symbolic(&lq));
    }

    #[test]
    fn pullback_of_symmetric_case_is_a_function_of_h() {
        // λ = 0 sits in Both; its quotient is A = 2, B = C = 0 and the
        // composed integral is 2(x²-1)² + 4y² = 8H + 2.
        let p = ReversibleParams::default();
        let integral = pullback_integral(&p).unwrap();
        for (x, y) in [(1.3, 0.0), (0.9, 0.4), (1.1, -0.2)] {
            let h = 0.5 * y * y - 0.5 * x * x + 0.25 * x.powi(4);
            let val = integral.eval(x, y);
            assert!((val - (8.0 * h + 2.0)).abs() < 1e-12);
        }
        let traj =
            flow::integrate_dense(&CubicField::unperturbed(), 1.3, 0.0, 30.0, 0.01, 1e-10, 1e-12)
                .unwrap();
        assert!(integral.drift_along(&traj) < 1e-9);
    }

    #[test]
    fn pullback_stratum_sample_conserves_the_integral() {
        let p = pullback_sample();
        let integral = pullback_integral(&p).unwrap();
        let f = p.build();
        let traj = flow::integrate_dense(&f, 1.15, 0.0, 50.0, 0.01, 1e-10, 1e-12).unwrap();
        let drift = integral.drift_along(&traj);
        assert!(drift < 1e-8, "drift = {drift:e}");
    }

    #[test]
    fn pullback_integral_rejects_off_stratum_parameters() {
        let focus = params([(1, 10), (0, 1), (0, 1), (0, 1), (0, 1), (-1, 5), (1, 10), (0, 1)]);
        assert!(matches!(
            pullback_integral(&focus),
            Err(Error::NotPullBack)
        ));
    }

    #[test]
    fn pullback_factorizes_through_the_map_pointwise() {
        let p = pullback_sample();
        let integral = pullback_integral(&p).unwrap();
        // evaluate the exact map and the compiled composition independently
        for k in 0..100 {
            let x = 0.8 + 0.005 * k as f64;
            let y = -0.3 + 0.006 * k as f64;
            let u = integral.map.u_comp.eval_f64(x, y);
            let v = integral.map.v_comp.eval_f64(x, y);
            let direct = integral.darboux.eval(v, u);
            let composed = integral.eval(x, y);
            assert!((direct - composed).abs() <= 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn conjugacy_holds_on_stratum_and_fails_off_it() {
        assert!(verify_pullback_conjugacy(&pullback_sample()).unwrap());
        assert!(verify_pullback_conjugacy(&ReversibleParams::default()).unwrap());
        // Hamiltonian-only sample violates the pull-back equation
        let h = hamiltonian_sample();
        assert!(!verify_pullback_conjugacy(&h).unwrap());
        // bump one stratum-relevant coefficient of a valid sample
        let mut bumped = pullback_sample();
        bumped.a02 = &bumped.a02 + &ratio(1, 100);
        assert!(!verify_pullback_conjugacy(&bumped).unwrap());
    }
}
