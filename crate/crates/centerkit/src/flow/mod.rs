//! Numerical oracle: adaptive integration, the Poincaré section on
//! `y = 0` near `(1, 0)`, displacement sampling, and the reversibility
//! closure check on the exterior period annulus.
//!
//! All section crossings are located by sign-change bracketing over accepted
//! steps followed by bisection on the dense output down to a `1e-12` time
//! interval — two orders tighter than the displacement tolerances used by
//! the cross-validation experiments. Integration is confined to the window
//! `[-3, 3]²`; an orbit that leaves it has escaped the annulus structure and
//! the section operators report [`Error::NoReturn`] instead of looping.

mod dopri5;

pub use dopri5::{CubicF64, DenseStep, Stepper};

use std::io::Write;

use crate::field::CubicField;
use crate::{Error, Result};

/// Integration window; the saddle guard for every section operator.
pub const WINDOW: f64 = 3.0;
/// Crossings of `y = 0` with `x` below this are near the saddle, not the
/// section through `(1, 0)`.
pub const SADDLE_GAP: f64 = 0.2;
const BISECT_TIME_TOL: f64 = 1e-12;
const MAX_STEPS: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct IntegratorStats {
    pub steps: usize,
    pub rejected: usize,
    pub max_err: f64,
}

/// A computed orbit segment: samples with strictly increasing `|t|` plus
/// integrator statistics.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<TrajectoryPoint>,
    pub stats: IntegratorStats,
}

impl Trajectory {
    /// Max of `|F(x,y) - F(x0,y0)| / max(1, |F(x0,y0)|)` over the samples.
    pub fn max_drift(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let first = &self.samples[0];
        let f0 = f(first.x, first.y);
        let scale = f0.abs().max(1.0);
        self.samples
            .iter()
            .map(|p| (f(p.x, p.y) - f0).abs() / scale)
            .fold(0.0, f64::max)
    }

    /// CSV export: `t,x,y` with 17 significant decimal digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,x,y")?;
        for p in &self.samples {
            writeln!(w, "{:.16e},{:.16e},{:.16e}", p.t, p.x, p.y)?;
        }
        Ok(())
    }

    /// CSV export with an extra column computed from each sample.
    pub fn write_csv_with<W: Write>(
        &self,
        mut w: W,
        name: &str,
        f: impl Fn(f64, f64) -> f64,
    ) -> std::io::Result<()> {
        writeln!(w, "t,x,y,{name}")?;
        for p in &self.samples {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                p.t,
                p.x,
                p.y,
                f(p.x, p.y)
            )?;
        }
        Ok(())
    }
}

/// Integrates from `(x0, y0)` for time `t_end` (negative integrates
/// backward), recording every accepted step.
pub fn integrate(
    f: &CubicField,
    x0: f64,
    y0: f64,
    t_end: f64,
    rtol: f64,
    atol: f64,
) -> Result<Trajectory> {
    check_tols(x0, y0, rtol, atol)?;
    let compiled = CubicF64::new(f);
    let mut stepper = Stepper::new(&compiled, 0.0, [x0, y0], t_end.signum(), rtol, atol);
    let mut samples = vec![TrajectoryPoint { t: 0.0, x: x0, y: y0 }];
    while (t_end - stepper.t) * t_end.signum() > 0.0 {
        stepper.advance(t_end)?;
        samples.push(TrajectoryPoint {
            t: stepper.t,
            x: stepper.y[0],
            y: stepper.y[1],
        });
        if stepper.steps > MAX_STEPS {
            return Err(Error::NoReturn(format!(
                "exceeded {MAX_STEPS} steps before t = {t_end}"
            )));
        }
    }
    Ok(Trajectory {
        samples,
        stats: stats_of(&stepper),
    })
}

/// Integrates and resamples on the uniform grid `0, dt, 2dt, ...` using the
/// dense output (final point included). Backward time works as in
/// [`integrate`].
pub fn integrate_dense(
    f: &CubicField,
    x0: f64,
    y0: f64,
    t_end: f64,
    dt: f64,
    rtol: f64,
    atol: f64,
) -> Result<Trajectory> {
    check_tols(x0, y0, rtol, atol)?;
    if dt <= 0.0 {
        return Err(Error::BadInput("dt must be positive".into()));
    }
    let compiled = CubicF64::new(f);
    let direction = t_end.signum();
    let mut stepper = Stepper::new(&compiled, 0.0, [x0, y0], direction, rtol, atol);
    let mut samples = vec![TrajectoryPoint { t: 0.0, x: x0, y: y0 }];
    let mut next_t = dt * direction;
    while (t_end - stepper.t) * direction > 0.0 {
        let dense = stepper.advance(t_end)?;
        while (next_t - dense.t_end()) * direction <= 1e-15 {
            let theta = (next_t - dense.t0) / dense.h;
            let s = dense.eval(theta.clamp(0.0, 1.0));
            samples.push(TrajectoryPoint {
                t: next_t,
                x: s[0],
                y: s[1],
            });
            next_t += dt * direction;
        }
        if stepper.steps > MAX_STEPS {
            return Err(Error::NoReturn(format!(
                "exceeded {MAX_STEPS} steps before t = {t_end}"
            )));
        }
    }
    let last = samples.last().unwrap();
    if (last.t - t_end).abs() > 1e-12 {
        samples.push(TrajectoryPoint {
            t: stepper.t,
            x: stepper.y[0],
            y: stepper.y[1],
        });
    }
    Ok(Trajectory {
        samples,
        stats: stats_of(&stepper),
    })
}

/// One sample of the displacement function: start at `(1 + r, 0)`, return
/// to the section `y = 0` near `x = 1` after a full turn.
#[derive(Clone, Copy, Debug)]
pub struct DisplacementSample {
    pub r: f64,
    /// `x_return - (1 + r)`; meaningful only when `returned`.
    pub d: f64,
    pub returned: bool,
}

/// Measures the displacement at offset `r`: integrates from `(1 + r, 0)`
/// until the second transversal crossing of `y = 0` with `x > SADDLE_GAP`
/// and reports `d = x_return - (1 + r)`.
pub fn displacement(f: &CubicField, r: f64, rtol: f64) -> Result<DisplacementSample> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::BadInput(format!(
            "displacement offset r = {r} outside (0, 1)"
        )));
    }
    let crossing = nth_section_crossing(f, 1.0 + r, 0.0, SectionAxis::Y, 2, rtol)?;
    Ok(DisplacementSample {
        r,
        d: crossing.state[0] - (1.0 + r),
        returned: true,
    })
}

/// Displacement at several radii; parallel when the `parallel` feature is
/// enabled.
pub fn displacement_sweep(
    f: &CubicField,
    radii: &[f64],
    rtol: f64,
) -> Vec<Result<DisplacementSample>> {
    crate::par::map_slice(radii, |&r| displacement(f, r, rtol))
}

/// True iff every radius returns with `|d| < tol`.
pub fn check_center_numeric(f: &CubicField, radii: &[f64], tol: f64, rtol: f64) -> Result<bool> {
    if radii.is_empty() {
        return Err(Error::BadInput("radii list is empty".into()));
    }
    let mut ok = true;
    for sample in displacement_sweep(f, radii, rtol) {
        let sample = sample?;
        ok &= sample.d.abs() < tol;
    }
    Ok(ok)
}

/// Reversibility closure check on the exterior annulus: integrates from
/// `(0, y_start)` until the orbit re-crosses the `y`-axis in the starting
/// direction and compares the crossing height with `y_start` at `1e-7`.
pub fn exterior_annulus_closed(f: &CubicField, y_start: f64) -> Result<bool> {
    // Energy heuristic: H(0, y) = y²/2 > 0 lies outside the separatrix loop
    // of the unperturbed system; demand a safety margin for perturbed ones.
    if y_start < 0.5 {
        return Err(Error::BadInput(format!(
            "start (0, {y_start}) too close to the separatrix for the exterior check"
        )));
    }
    let crossing = nth_section_crossing(f, 0.0, y_start, SectionAxis::X, 2, 1e-10)?;
    Ok((crossing.state[1] - y_start).abs() < 1e-7)
}

enum SectionAxis {
    /// Crossing of `y = 0` (displacement section); requires `x > SADDLE_GAP`.
    Y,
    /// Crossing of `x = 0` in the starting direction (annulus closure).
    X,
}

struct Crossing {
    state: [f64; 2],
}

/// Integrates until the `n`-th qualifying section crossing, polishing each
/// crossing time by bisection on the dense output.
fn nth_section_crossing(
    f: &CubicField,
    x0: f64,
    y0: f64,
    axis: SectionAxis,
    n: usize,
    rtol: f64,
) -> Result<Crossing> {
    let compiled = CubicF64::new(f);
    let atol = rtol * 1e-2;
    let mut stepper = Stepper::new(&compiled, 0.0, [x0, y0], 1.0, rtol, atol);
    let t_max = 200.0;
    let section = |s: [f64; 2]| match axis {
        SectionAxis::Y => s[1],
        SectionAxis::X => s[0],
    };
    let start_dir = match axis {
        SectionAxis::Y => 0.0, // unused
        SectionAxis::X => compiled.eval([x0, y0])[0].signum(),
    };
    let mut g_prev = section([x0, y0]);
    let mut count = 0;
    while stepper.t < t_max {
        let dense = stepper.advance(t_max)?;
        let s_new = stepper.y;
        if s_new[0].abs() > WINDOW || s_new[1].abs() > WINDOW {
            return Err(Error::NoReturn(format!(
                "orbit left the window at ({:.3}, {:.3})",
                s_new[0], s_new[1]
            )));
        }
        let g_new = section(s_new);
        if g_prev != 0.0 && g_prev * g_new <= 0.0 && g_new != g_prev {
            let state = bisect_crossing(&dense, section, g_prev);
            let qualifies = match axis {
                SectionAxis::Y => {
                    let dy = compiled.eval(state)[1];
                    state[0] > SADDLE_GAP && dy.abs() > 1e-12
                }
                SectionAxis::X => {
                    let dx = compiled.eval(state)[0];
                    dx.signum() == start_dir && dx.abs() > 1e-12
                }
            };
            if qualifies {
                count += 1;
                if count == n {
                    return Ok(Crossing { state });
                }
            }
        }
        g_prev = g_new;
    }
    Err(Error::NoReturn(format!(
        "no section return within t = {t_max}"
    )))
}

/// Bisection on a dense step for the zero of `g`; the bracket is
/// `[t0, t0 + h]` with `sign(g) = sign(g_left)` on the left. Stops when the
/// time interval shrinks below `1e-12`.
fn bisect_crossing(dense: &DenseStep, g: impl Fn([f64; 2]) -> f64, g_left: f64) -> [f64; 2] {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let left_sign = g_left.signum();
    for _ in 0..200 {
        if (hi - lo) * dense.h.abs() < BISECT_TIME_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let val = g(dense.eval(mid));
        if val == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if val.signum() == left_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    dense.eval(0.5 * (lo + hi))
}

fn check_tols(x0: f64, y0: f64, rtol: f64, atol: f64) -> Result<()> {
    if !(x0.is_finite() && y0.is_finite()) {
        return Err(Error::BadInput("non-finite initial point".into()));
    }
    if !(rtol > 0.0 && atol > 0.0) {
        return Err(Error::BadInput("tolerances must be positive".into()));
    }
    Ok(())
}

fn stats_of(s: &Stepper<'_>) -> IntegratorStats {
    IntegratorStats {
        steps: s.steps,
        rejected: s.rejected,
        max_err: s.max_err,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{ratio, Poly2};
    use crate::field::ReversibleParams;

    fn hamiltonian_h(x: f64, y: f64) -> f64 {
        0.5 * y * y - 0.5 * x * x + 0.25 * x.powi(4)
    }

    #[test]
    fn unperturbed_displacement_vanishes() {
        let f = CubicField::unperturbed();
        let s = displacement(&f, 0.1, 1e-10).unwrap();
        assert!(s.returned);
        assert!(s.d.abs() < 1e-9, "d = {:e}", s.d);
    }

    #[test]
    fn unperturbed_energy_is_conserved() {
        let f = CubicField::unperturbed();
        let traj = integrate(&f, 1.1, 0.0, 50.0, 1e-10, 1e-12).unwrap();
        let drift = traj.max_drift(hamiltonian_h);
        assert!(drift < 1e-8, "drift = {:e}", drift);
        assert!(traj.stats.steps > 100);
    }

    #[test]
    fn reversible_trajectories_mirror_under_time_reversal() {
        // For a reversible field the orbit through (0, y0) satisfies
        // x(-t) = -x(t), y(-t) = y(t).
        let p = ReversibleParams {
            a20: ratio(1, 10),
            b11: ratio(1, 10),
            b12: ratio(-1, 8),
            ..Default::default()
        };
        let f = p.build();
        let fwd = integrate_dense(&f, 0.0, 1.5, 3.0, 0.05, 1e-10, 1e-12).unwrap();
        let bwd = integrate_dense(&f, 0.0, 1.5, -3.0, 0.05, 1e-10, 1e-12).unwrap();
        for (a, b) in fwd.samples.iter().zip(bwd.samples.iter()) {
            assert!((a.t + b.t).abs() < 1e-12);
            assert!((a.x + b.x).abs() < 1e-8, "x mismatch at t = {}", a.t);
            assert!((a.y - b.y).abs() < 1e-8, "y mismatch at t = {}", a.t);
        }
    }

    #[test]
    fn trace_breaking_field_has_linear_displacement_growth() {
        // 2 a20 + b11 = 1/5 via b11 = 1/5
        let p = ReversibleParams {
            b11: ratio(1, 5),
            ..Default::default()
        };
        let f = p.build();
        for r in [0.05, 0.1] {
            let s = displacement(&f, r, 1e-10).unwrap();
            assert!(s.d > 1e-3 * r, "r = {r}: d = {:e}", s.d);
        }
    }

    #[test]
    fn center_check_aggregates_radii() {
        let f = CubicField::unperturbed();
        assert!(check_center_numeric(&f, &[0.05, 0.1, 0.15], 1e-7, 1e-10).unwrap());
        let focus = ReversibleParams {
            b11: ratio(1, 5),
            ..Default::default()
        }
        .build();
        assert!(!check_center_numeric(&focus, &[0.05, 0.1, 0.15], 1e-7, 1e-10).unwrap());
    }

    #[test]
    fn exterior_annulus_closes_for_reversible_fields() {
        assert!(exterior_annulus_closed(&CubicField::unperturbed(), 1.5).unwrap());
        assert!(exterior_annulus_closed(&CubicField::unperturbed(), 2.0).unwrap());
        // even a focus-stratum reversible field keeps the exterior annulus
        let focus = ReversibleParams {
            a20: ratio(1, 10),
            b11: ratio(-1, 5),
            b12: ratio(1, 10),
            ..Default::default()
        }
        .build();
        assert!(exterior_annulus_closed(&focus, 2.0).unwrap());
    }

    #[test]
    fn tampered_nonreversible_field_breaks_closure() {
        // Add a small x² term to y' of a perturbed sample: reversibility is
        // lost and the exterior orbit through (0, 2) misses its start by
        // about 1e-2. (Tampering the unperturbed system alone would leave a
        // conservative Newton system whose orbits still close.)
        let base = ReversibleParams {
            a20: ratio(1, 10),
            b11: ratio(-1, 5),
            b12: ratio(1, 10),
            ..Default::default()
        }
        .build();
        let fy = &base.fy + &Poly2::monomial(2, 0, ratio(1, 20));
        let f = CubicField::new(base.fx.clone(), fy).unwrap();
        assert!(!crate::field::is_reversible(&f));
        assert!(!exterior_annulus_closed(&f, 2.0).unwrap());
    }

    #[test]
    fn csv_export_has_17_significant_digits() {
        let f = CubicField::unperturbed();
        let traj = integrate(&f, 1.1, 0.0, 0.5, 1e-8, 1e-10).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,x,y");
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 3);
        assert!(first.contains('.'));
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let f = CubicField::unperturbed();
        assert!(matches!(
            displacement(&f, 0.0, 1e-10),
            Err(Error::BadInput(_))
        ));
        assert!(matches!(
            integrate(&f, f64::NAN, 0.0, 1.0, 1e-8, 1e-10),
            Err(Error::BadInput(_))
        ));
        assert!(matches!(
            exterior_annulus_closed(&f, 0.1),
            Err(Error::BadInput(_))
        ));
    }
}
