//! The perturbed cubic vector field, its reversible subfamily, and the
//! affine normalization pinning the anti-saddles at `(±1, 0)`.
//!
//! A field is reversible in `x` when the involution `(x, y) -> (-x, y)`
//! sends it to its negative: the `x'` component is even in `x` and the `y'`
//! component odd. The normalized family is
//!
//! ```text
//! x' = y + a20 (x²-1) + a21 x²y + a01 y + a02 y² + a03 y³
//! y' = x - x³ + b30 (x³-x) + b11 xy + b12 xy²
//! ```
//!
//! which vanishes at `(±1, 0)` for every parameter choice.

use num_traits::Zero;

use crate::exactpoly::{rat, recognize_rational, to_f64, Poly2, Rational};
use crate::{Error, Result};

/// A planar polynomial vector field with both components of total degree
/// at most three.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CubicField {
    pub fx: Poly2,
    pub fy: Poly2,
}

impl CubicField {
    /// Degree bound 3 is enforced here; everything downstream relies on it.
    pub fn new(fx: Poly2, fy: Poly2) -> Result<Self> {
        if fx.total_degree().unwrap_or(0) > 3 || fy.total_degree().unwrap_or(0) > 3 {
            return Err(Error::DegreeBound);
        }
        Ok(CubicField { fx, fy })
    }

    /// The unperturbed symmetric system `x' = y, y' = x - x³`.
    pub fn unperturbed() -> Self {
        CubicField {
            fx: Poly2::monomial(0, 1, rat(1)),
            fy: Poly2::from_terms(&[(1, 0, rat(1)), (3, 0, rat(-1))]),
        }
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> (Rational, Rational) {
        (self.fx.eval(x, y), self.fy.eval(x, y))
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> (f64, f64) {
        (self.fx.eval_f64(x, y), self.fy.eval_f64(x, y))
    }
}

/// Reversibility in `x`: `fx(-x,y) = fx(x,y)` and `fy(-x,y) = -fy(x,y)`.
pub fn is_reversible(f: &CubicField) -> bool {
    f.fx.is_even_in_x() && f.fy.is_odd_in_x()
}

/// `∂fx/∂x + ∂fy/∂y`, exactly.
pub fn divergence(f: &CubicField) -> Poly2 {
    &f.fx.diff_x() + &f.fy.diff_y()
}

/// Exact Jacobian matrix `[[∂fx/∂x, ∂fx/∂y], [∂fy/∂x, ∂fy/∂y]]` at a point.
pub fn jacobian_at(f: &CubicField, pt: (&Rational, &Rational)) -> [[Rational; 2]; 2] {
    let (x, y) = pt;
    [
        [f.fx.diff_x().eval(x, y), f.fx.diff_y().eval(x, y)],
        [f.fy.diff_x().eval(x, y), f.fy.diff_y().eval(x, y)],
    ]
}

/// Raw reversible parameters, before the singular points are pinned.
///
/// `P(x,y) = a00 + a20 x² + a21 x²y + a01 y + a02 y² + a03 y³` and
/// `Q(x,y) = b10 x + b11 xy + b12 xy² + b30 x³`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ReversibleParamsRaw {
    pub a00: Rational,
    pub a20: Rational,
    pub a21: Rational,
    pub a01: Rational,
    pub a02: Rational,
    pub a03: Rational,
    pub b10: Rational,
    pub b11: Rational,
    pub b12: Rational,
    pub b30: Rational,
}

impl ReversibleParamsRaw {
    pub fn build(&self) -> CubicField {
        let fx = Poly2::from_terms(&[
            (0, 1, rat(1) + &self.a01),
            (0, 0, self.a00.clone()),
            (2, 0, self.a20.clone()),
            (2, 1, self.a21.clone()),
            (0, 2, self.a02.clone()),
            (0, 3, self.a03.clone()),
        ]);
        let fy = Poly2::from_terms(&[
            (1, 0, rat(1) + &self.b10),
            (3, 0, rat(-1) + &self.b30),
            (1, 1, self.b11.clone()),
            (1, 2, self.b12.clone()),
        ]);
        CubicField { fx, fy }
    }
}

/// Parameters of the normalized reversible family (singular points exactly
/// at `(±1, 0)`).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ReversibleParams {
    pub a20: Rational,
    pub a21: Rational,
    pub a01: Rational,
    pub a02: Rational,
    pub a03: Rational,
    pub b11: Rational,
    pub b12: Rational,
    pub b30: Rational,
}

impl ReversibleParams {
    /// Template fill of the normalized family.
    pub fn build(&self) -> CubicField {
        let fx = Poly2::from_terms(&[
            (0, 1, rat(1) + &self.a01),
            (2, 0, self.a20.clone()),
            (0, 0, -&self.a20),
            (2, 1, self.a21.clone()),
            (0, 2, self.a02.clone()),
            (0, 3, self.a03.clone()),
        ]);
        let fy = Poly2::from_terms(&[
            (1, 0, rat(1) - &self.b30),
            (3, 0, &self.b30 - &rat(1)),
            (1, 1, self.b11.clone()),
            (1, 2, self.b12.clone()),
        ]);
        CubicField { fx, fy }
    }

    /// Trace of the linearization at `(±1, 0)`, which is `2 a20 + b11`.
    pub fn trace_at_centers(&self) -> Rational {
        rat(2) * &self.a20 + &self.b11
    }

    pub fn to_f64(&self) -> ReversibleParamsF64 {
        ReversibleParamsF64 {
            a20: to_f64(&self.a20),
            a21: to_f64(&self.a21),
            a01: to_f64(&self.a01),
            a02: to_f64(&self.a02),
            a03: to_f64(&self.a03),
            b11: to_f64(&self.b11),
            b12: to_f64(&self.b12),
            b30: to_f64(&self.b30),
        }
    }
}

/// Float fallback of [`ReversibleParams`], produced by [`normalize`] when
/// the singular point is irrational. Downstream classification then runs in
/// toleranced mode.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct ReversibleParamsF64 {
    pub a20: f64,
    pub a21: f64,
    pub a01: f64,
    pub a02: f64,
    pub a03: f64,
    pub b11: f64,
    pub b12: f64,
    pub b30: f64,
}

/// Result of normalizing raw parameters: exact when the singular point is a
/// recognizable rational, float otherwise.
#[derive(Clone, Debug)]
pub enum Normalized {
    Exact(ReversibleParams),
    Approx {
        params: ReversibleParamsF64,
        /// Largest off-template coefficient left by the float transform.
        residual: f64,
    },
}

impl Normalized {
    pub fn exact(&self) -> Option<&ReversibleParams> {
        match self {
            Normalized::Exact(p) => Some(p),
            Normalized::Approx { .. } => None,
        }
    }
}

/// Finds the singular point near `(1, 0)` by damped 2D Newton, moves it to
/// `(1, 0)` by `(x, y) -> (x/x0, y - y0)`, and reads the normalized
/// parameters off the transformed field.
///
/// The root is algebraic and in general irrational, so Newton runs in
/// floats; when both coordinates are recognizable rationals within `tol`
/// (and the exact field genuinely vanishes there) the whole transform is
/// redone exactly and [`Normalized::Exact`] is returned. Otherwise the
/// parameters are carried as floats with the off-template residual reported.
pub fn normalize(raw: &ReversibleParamsRaw, tol: f64) -> Result<Normalized> {
    let field = raw.build();
    let (x0, y0) = newton_singular_point(&field)?;
    if x0.abs() < 0.1 {
        return Err(Error::NotNormalizable { residual: x0.abs() });
    }

    // Exact route: snap the root and verify it is genuinely singular.
    let snap_x = recognize_rational(x0, 1_000_000, tol);
    let snap_y = recognize_rational(y0, 1_000_000, tol);
    if let (Some(xr), Some(yr)) = (snap_x, snap_y) {
        let (vx, vy) = field.eval(&xr, &yr);
        if vx.is_zero() && vy.is_zero() && !xr.is_zero() {
            return Ok(Normalized::Exact(transform_exact(raw, &xr, &yr)));
        }
    }

    // Float route: same closed-form transform, toleranced template check.
    let (params, residual) = transform_f64(raw, x0, y0);
    if residual > tol {
        return Err(Error::NotNormalizable { residual });
    }
    Ok(Normalized::Approx { params, residual })
}

/// Damped Newton for the zero of the field near `(1, 0)`.
fn newton_singular_point(field: &CubicField) -> Result<(f64, f64)> {
    let jxx = field.fx.diff_x();
    let jxy = field.fx.diff_y();
    let jyx = field.fy.diff_x();
    let jyy = field.fy.diff_y();
    let (mut x, mut y) = (1.0f64, 0.0f64);
    for _ in 0..60 {
        let (fx, fy) = field.eval_f64(x, y);
        if fx.abs() < 1e-14 && fy.abs() < 1e-14 {
            return Ok((x, y));
        }
        let a = jxx.eval_f64(x, y);
        let b = jxy.eval_f64(x, y);
        let c = jyx.eval_f64(x, y);
        let d = jyy.eval_f64(x, y);
        let det = a * d - b * c;
        if det.abs() < 1e-14 {
            return Err(Error::NewtonDiverged("singular Jacobian".to_string()));
        }
        let dx = (d * fx - b * fy) / det;
        let dy = (-c * fx + a * fy) / det;
        x -= dx;
        y -= dy;
        if (x - 1.0).abs() > 0.5 || y.abs() > 0.5 {
            return Err(Error::NewtonDiverged(format!(
                "left the basin at ({x:.6}, {y:.6})"
            )));
        }
    }
    Err(Error::NewtonDiverged("no convergence in 60 steps".to_string()))
}

/// Exact coordinate change `(x, y) -> (x/x0, y - y0)` followed by template
/// extraction. Requires `(x0, y0)` to be an exact singular point.
fn transform_exact(raw: &ReversibleParamsRaw, x0: &Rational, y0: &Rational) -> ReversibleParams {
    // x' component coefficients of the transformed field (divided by x0):
    //   c01 = [1 + a01 + 2 a02 y0 + 3 a03 y0²] / x0
    //   c02 = [a02 + 3 a03 y0] / x0,  c03 = a03 / x0
    //   c20 = x0 (a20 + a21 y0),      c21 = a21 x0
    // y' component:
    //   d10 = x0 [1 + b10 + b11 y0 + b12 y0²]
    //   d11 = x0 [b11 + 2 b12 y0],    d12 = b12 x0,  d30 = x0³ (b30 - 1)
    let y0sq = y0 * y0;
    let c01 = (rat(1) + &raw.a01 + rat(2) * &raw.a02 * y0 + rat(3) * &raw.a03 * &y0sq) / x0;
    let c02 = (&raw.a02 + &(rat(3) * &raw.a03 * y0)) / x0;
    let c03 = &raw.a03 / x0;
    let c20 = x0 * &(&raw.a20 + &(&raw.a21 * y0));
    let c21 = &raw.a21 * x0;
    let d10 = x0 * &(rat(1) + &raw.b10 + &raw.b11 * y0 + &raw.b12 * &y0sq);
    let d11 = x0 * &(&raw.b11 + &(rat(2) * &raw.b12 * y0));
    let d12 = &raw.b12 * x0;
    ReversibleParams {
        a20: c20,
        a21: c21,
        a01: c01 - rat(1),
        a02: c02,
        a03: c03,
        b11: d11,
        b12: d12,
        b30: rat(1) - d10,
    }
}

/// Float twin of [`transform_exact`]; returns the parameters and the largest
/// residual of the two coefficient identities the template implies
/// (`c00 + c20 = 0` and `d10 + d30 = 0`).
fn transform_f64(raw: &ReversibleParamsRaw, x0: f64, y0: f64) -> (ReversibleParamsF64, f64) {
    let a00 = to_f64(&raw.a00);
    let a20 = to_f64(&raw.a20);
    let a21 = to_f64(&raw.a21);
    let a01 = to_f64(&raw.a01);
    let a02 = to_f64(&raw.a02);
    let a03 = to_f64(&raw.a03);
    let b10 = to_f64(&raw.b10);
    let b11 = to_f64(&raw.b11);
    let b12 = to_f64(&raw.b12);
    let b30 = to_f64(&raw.b30);

    let c00 = (y0 + a00 + a01 * y0 + a02 * y0 * y0 + a03 * y0 * y0 * y0) / x0;
    let c01 = (1.0 + a01 + 2.0 * a02 * y0 + 3.0 * a03 * y0 * y0) / x0;
    let c02 = (a02 + 3.0 * a03 * y0) / x0;
    let c03 = a03 / x0;
    let c20 = x0 * (a20 + a21 * y0);
    let c21 = a21 * x0;
    let d10 = x0 * (1.0 + b10 + b11 * y0 + b12 * y0 * y0);
    let d11 = x0 * (b11 + 2.0 * b12 * y0);
    let d12 = b12 * x0;
    let d30 = x0 * x0 * x0 * (b30 - 1.0);

    let residual = (c00 + c20).abs().max((d10 + d30).abs());
    (
        ReversibleParamsF64 {
            a20: c20,
            a21: c21,
            a01: c01 - 1.0,
            a02: c02,
            a03: c03,
            b11: d11,
            b12: d12,
            b30: 1.0 - d10,
        },
        residual,
    )
}
