//! Embedded Dormand–Prince 5(4) pair with 4th-order dense output.
//!
//! Coefficients follow Hairer–Nørsett–Wanner's DOPRI5 (FSAL, 7 stages, 6
//! evaluations per accepted step); the continuous extension is the standard
//! 5-coefficient quartic. The method and its controller are fixed so that
//! runs are bit-reproducible under identical float semantics.

use crate::field::CubicField;
use crate::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// b5 - b4, for the embedded error estimate
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// dense-output weights
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const MIN_STEP: f64 = 1e-14;

pub type State = [f64; 2];

/// Float-compiled cubic field for the integrator's inner loop.
#[derive(Clone, Debug)]
pub struct CubicF64 {
    cx: [[f64; 4]; 4],
    cy: [[f64; 4]; 4],
}

impl CubicF64 {
    pub fn new(f: &CubicField) -> Self {
        let mut cx = [[0.0; 4]; 4];
        let mut cy = [[0.0; 4]; 4];
        for (&(i, j), c) in f.fx.terms() {
            cx[i as usize][j as usize] = crate::exactpoly::to_f64(c);
        }
        for (&(i, j), c) in f.fy.terms() {
            cy[i as usize][j as usize] = crate::exactpoly::to_f64(c);
        }
        CubicF64 { cx, cy }
    }

    #[inline]
    fn eval_component(c: &[[f64; 4]; 4], x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for i in (0..4).rev() {
            let row = c[i];
            let inner = ((row[3] * y + row[2]) * y + row[1]) * y + row[0];
            acc = acc * x + inner;
        }
        acc
    }

    #[inline]
    pub fn eval(&self, s: State) -> State {
        [
            Self::eval_component(&self.cx, s[0], s[1]),
            Self::eval_component(&self.cy, s[0], s[1]),
        ]
    }
}

/// One accepted step with its dense-output coefficients.
#[derive(Clone, Copy, Debug)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    cont: [State; 5],
}

impl DenseStep {
    /// Interpolated state at `t0 + theta * h`, `theta` in `[0, 1]`.
    pub fn eval(&self, theta: f64) -> State {
        let th1 = 1.0 - theta;
        let mut out = [0.0; 2];
        for d in 0..2 {
            out[d] = self.cont[0][d]
                + theta
                    * (self.cont[1][d]
                        + th1
                            * (self.cont[2][d]
                                + theta * (self.cont[3][d] + th1 * self.cont[4][d])));
        }
        out
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + self.h
    }
}

/// Adaptive stepper; `advance` produces one accepted step at a time.
pub struct Stepper<'a> {
    field: &'a CubicF64,
    rtol: f64,
    atol: f64,
    pub t: f64,
    pub y: State,
    h: f64,
    direction: f64,
    k1: State,
    pub steps: usize,
    pub rejected: usize,
    pub max_err: f64,
}

impl<'a> Stepper<'a> {
    pub fn new(field: &'a CubicF64, t0: f64, y0: State, direction: f64, rtol: f64, atol: f64) -> Self {
        let k1 = field.eval(y0);
        Stepper {
            field,
            rtol,
            atol,
            t: t0,
            y: y0,
            h: 0.01 * direction.signum(),
            direction: direction.signum(),
            k1,
            steps: 0,
            rejected: 0,
            max_err: 0.0,
        }
    }

    /// Takes one accepted step, never past `t_limit`.
    pub fn advance(&mut self, t_limit: f64) -> Result<DenseStep> {
        loop {
            let remaining = t_limit - self.t;
            if remaining * self.direction <= 0.0 {
                return Err(Error::BadInput("step requested past the end time".into()));
            }
            if self.h.abs() > remaining.abs() {
                self.h = remaining;
            }
            let h = self.h;
            if h.abs() < MIN_STEP {
                return Err(Error::StepUnderflow {
                    t: self.t,
                    min: MIN_STEP,
                });
            }

            let f = self.field;
            let y = self.y;
            let k1 = self.k1;
            let k2 = f.eval(add(y, scale(k1, A21 * h)));
            let k3 = f.eval(add(y, comb2(k1, A31, k2, A32, h)));
            let k4 = f.eval(add(y, comb3(k1, A41, k2, A42, k3, A43, h)));
            let k5 = f.eval(add(y, comb4(k1, A51, k2, A52, k3, A53, k4, A54, h)));
            let k6 = f.eval(add(
                y,
                comb5(k1, A61, k2, A62, k3, A63, k4, A64, k5, A65, h),
            ));
            let _ = (C2, C3, C4, C5); // autonomous field: stage times unused
            let y_new = add(y, comb6(k1, A71, k3, A73, k4, A74, k5, A75, k6, A76, h));
            let k7 = f.eval(y_new);

            let mut err_sq = 0.0;
            for d in 0..2 {
                let e = h
                    * (E1 * k1[d] + E3 * k3[d] + E4 * k4[d] + E5 * k5[d] + E6 * k6[d]
                        + E7 * k7[d]);
                let sc = self.atol + self.rtol * y[d].abs().max(y_new[d].abs());
                err_sq += (e / sc) * (e / sc);
            }
            let err = (err_sq / 2.0).sqrt();

            let factor = if err == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
            };

            if err <= 1.0 {
                // dense coefficients (Hairer's contd5 layout)
                let ydiff = sub(y_new, y);
                let bspl = sub(scale(k1, h), ydiff);
                let cont4 = sub(sub(ydiff, scale(k7, h)), bspl);
                let cont5 = scale(
                    [
                        D1 * k1[0] + D3 * k3[0] + D4 * k4[0] + D5 * k5[0] + D6 * k6[0]
                            + D7 * k7[0],
                        D1 * k1[1] + D3 * k3[1] + D4 * k4[1] + D5 * k5[1] + D6 * k6[1]
                            + D7 * k7[1],
                    ],
                    h,
                );
                let dense = DenseStep {
                    t0: self.t,
                    h,
                    cont: [y, ydiff, bspl, cont4, cont5],
                };
                self.t += h;
                self.y = y_new;
                self.k1 = k7; // FSAL
                self.h = h * factor;
                self.steps += 1;
                self.max_err = self.max_err.max(err);
                return Ok(dense);
            }
            self.h = h * factor.min(1.0);
            self.rejected += 1;
        }
    }
}

#[inline]
fn add(a: State, b: State) -> State {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
fn sub(a: State, b: State) -> State {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
fn scale(a: State, s: f64) -> State {
    [a[0] * s, a[1] * s]
}

#[inline]
fn comb2(k1: State, c1: f64, k2: State, c2: f64, h: f64) -> State {
    [(c1 * k1[0] + c2 * k2[0]) * h, (c1 * k1[1] + c2 * k2[1]) * h]
}

#[inline]
fn comb3(k1: State, c1: f64, k2: State, c2: f64, k3: State, c3: f64, h: f64) -> State {
    [
        (c1 * k1[0] + c2 * k2[0] + c3 * k3[0]) * h,
        (c1 * k1[1] + c2 * k2[1] + c3 * k3[1]) * h,
    ]
}

#[inline]
#[allow(clippy::too_many_arguments)]
fn comb4(
    k1: State,
    c1: f64,
    k2: State,
    c2: f64,
    k3: State,
    c3: f64,
    k4: State,
    c4: f64,
    h: f64,
) -> State {
    [
        (c1 * k1[0] + c2 * k2[0] + c3 * k3[0] + c4 * k4[0]) * h,
        (c1 * k1[1] + c2 * k2[1] + c3 * k3[1] + c4 * k4[1]) * h,
    ]
}

#[inline]
#[allow(clippy::too_many_arguments)]
fn comb5(
    k1: State,
    c1: f64,
    k2: State,
    c2: f64,
    k3: State,
    c3: f64,
    k4: State,
    c4: f64,
    k5: State,
    c5: f64,
    h: f64,
) -> State {
    [
        (c1 * k1[0] + c2 * k2[0] + c3 * k3[0] + c4 * k4[0] + c5 * k5[0]) * h,
        (c1 * k1[1] + c2 * k2[1] + c3 * k3[1] + c4 * k4[1] + c5 * k5[1]) * h,
    ]
}

#[inline]
#[allow(clippy::too_many_arguments)]
fn comb6(
    k1: State,
    c1: f64,
    k3: State,
    c3: f64,
    k4: State,
    c4: f64,
    k5: State,
    c5: f64,
    k6: State,
    c6: f64,
    h: f64,
) -> State {
    [
        (c1 * k1[0] + c3 * k3[0] + c4 * k4[0] + c5 * k5[0] + c6 * k6[0]) * h,
        (c1 * k1[1] + c3 * k3[1] + c4 * k4[1] + c5 * k5[1] + c6 * k6[1]) * h,
    ]
}
