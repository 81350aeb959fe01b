//! Symbolic focus quantities at `(1, 0)`, computed from a formal first
//! integral in exact rational arithmetic.
//!
//! This oracle is independent of the Liénard reductions: it works on the raw
//! cubic field. After shifting the singular point to the origin and applying
//! the exact linear shear `U = u, V = α u + β v` (first row of the
//! Jacobian), the field reads
//!
//! ```text
//! U' = V + f2(U,V) + f3(U,V)
//! V' = -c U + g2(U,V) + g3(U,V),      c = det J > 0 rational
//! ```
//!
//! A formal integral `F = (c U² + V²)/2 + F3 + F4 + ...` is then built
//! degree by degree: at odd degrees the homological equation
//! `V ∂F_k/∂U - c U ∂F_k/∂V = R_k` is solvable outright; at even degrees
//! `2m` the component of `R_k` along `(c U² + V²)^m` cannot be removed and
//! its coefficient is the obstruction `η_{2m}`. All η vanish (to every
//! order) iff the point is a center.
//!
//! The shear avoids irrational normal forms entirely, so the η here differ
//! from textbook Lyapunov constants by positive factors; only the vanishing
//! pattern and the sign of the first nonzero entry are contractual.

use num_traits::Zero;

use crate::exactpoly::{rat, sign, Poly2, Rational};
use crate::field::{jacobian_at, CubicField};
use crate::{Error, Result};

/// Trace at the singular point plus the obstruction sequence
/// `η4, η6, ..., η_{2·order}`. The η entries are meaningful only on the
/// trace-zero slice, which [`focus_quantities`] enforces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FocusQuantities {
    pub trace: Rational,
    pub eta: Vec<Rational>,
}

impl FocusQuantities {
    /// Index (subscript) and value of the first nonvanishing obstruction.
    pub fn first_nonzero(&self) -> Option<(usize, Rational)> {
        self.eta
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_zero())
            .map(|(i, v)| (2 * (i + 2), v.clone()))
    }

    pub fn all_zero(&self) -> bool {
        self.eta.iter().all(Zero::is_zero)
    }
}

/// Computes `η4 ... η_{2·order}` for the field at `(1, 0)`.
///
/// Errors with [`Error::ShiftNotRational`] when the field does not vanish
/// exactly at `(1, 0)`, and with [`Error::NotCenterType`] when the
/// linearization there has nonzero trace or nonpositive determinant.
pub fn focus_quantities(f: &CubicField, order: usize) -> Result<FocusQuantities> {
    let one = rat(1);
    let zero = rat(0);
    let (vx, vy) = f.eval(&one, &zero);
    if !vx.is_zero() || !vy.is_zero() {
        return Err(Error::ShiftNotRational);
    }
    let j = jacobian_at(f, (&one, &zero));
    let trace = &j[0][0] + &j[1][1];
    let det = &j[0][0] * &j[1][1] - &j[0][1] * &j[1][0];
    if !trace.is_zero() {
        return Err(Error::NotCenterType(format!("trace = {trace}")));
    }
    if sign(&det) <= 0 {
        return Err(Error::NotCenterType(format!("determinant = {det}")));
    }
    // trace = 0 and det > 0 force J[0][1] != 0, so the shear below is valid.
    let alpha = j[0][0].clone();
    let beta = j[0][1].clone();

    // Shift (1,0) to the origin, then shear (u,v) -> (U,V) = (u, αu + βv).
    let g1 = f.fx.translate(&one, &zero);
    let g2 = f.fy.translate(&one, &zero);
    let u_expr = Poly2::monomial(1, 0, rat(1));
    let v_expr = Poly2::from_terms(&[(0, 1, &one / &beta), (1, 0, -(&alpha / &beta))]);
    let cap_g1 = g1.compose_xy(&u_expr, &v_expr);
    let cap_g2 = {
        let mix = &g1.scale(&alpha) + &g2.scale(&beta);
        mix.compose_xy(&u_expr, &v_expr)
    };
    let c = det;
    debug_assert_eq!(cap_g1.homogeneous_part(1), Poly2::monomial(0, 1, rat(1)));
    debug_assert_eq!(cap_g2.homogeneous_part(1), Poly2::monomial(1, 0, -&c));

    // Φ = c U² + V², the quadratic invariant of the linear part.
    let phi = Poly2::from_terms(&[(2, 0, c.clone()), (0, 2, rat(1))]);
    let mut integral = phi.scale(&(rat(1) / rat(2)));
    let mut eta = Vec::new();

    for k in 3..=(2 * order as u32) {
        let lie = &(&integral.diff_x() * &cap_g1) + &(&integral.diff_y() * &cap_g2);
        let remainder = lie.homogeneous_part(k);
        let unknowns = k as usize + 1;
        let even = k % 2 == 0;
        let cols = if even { unknowns + 1 } else { unknowns };
        // Row per monomial U^a V^(k-a); unknown column i is the coefficient
        // of U^i V^(k-i) in F_k, the extra column (even k) is η_k.
        let mut rows = vec![vec![Rational::zero(); cols]; unknowns];
        let mut rhs = vec![Rational::zero(); unknowns];
        let phi_pow = if even {
            let mut p = Poly2::constant(rat(1));
            for _ in 0..(k / 2) {
                p = &p * &phi;
            }
            Some(p)
        } else {
            None
        };
        for a in 0..=k {
            let b = k - a;
            let row = a as usize;
            if a + 1 <= k {
                rows[row][(a + 1) as usize] = rat(a as i64 + 1);
            }
            if a >= 1 {
                rows[row][(a - 1) as usize] = -(&c * &rat(b as i64 + 1));
            }
            if let Some(p) = &phi_pow {
                rows[row][unknowns] = -p.coeff(a, b);
            }
            rhs[row] = -remainder.coeff(a, b);
        }
        let solution =
            solve_linear(rows, rhs).expect("homological system is solvable by construction");
        let mut f_k = Poly2::zero();
        for (i, coeff) in solution.iter().take(unknowns).enumerate() {
            f_k.insert_term(i as u32, k - i as u32, coeff.clone());
        }
        integral = &integral + &f_k;
        if even {
            eta.push(solution[unknowns].clone());
        }
    }

    Ok(FocusQuantities { trace, eta })
}

/// First nonvanishing obstruction up to the requested order, if any.
pub fn first_nonzero_quantity(
    f: &CubicField,
    order: usize,
) -> Result<Option<(usize, Rational)>> {
    Ok(focus_quantities(f, order)?.first_nonzero())
}

/// Exact Gauss–Jordan solve of `A x = b`; free variables are pinned to zero
/// so underdetermined systems get one canonical solution. Returns `None`
/// when the system is inconsistent.
fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row >= m {
            break;
        }
        let Some(p) = (row..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        for r in 0..m {
            if r != row && !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[row][col];
                for c2 in col..n {
                    let t = &a[row][c2] * &factor;
                    a[r][c2] -= t;
                }
                let t = &b[row] * &factor;
                b[r] -= t;
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    for r in row..m {
        if !b[r].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for (r, c) in pivots {
        x[c] = &b[r] / &a[r][c];
    }
    Some(x)
}
