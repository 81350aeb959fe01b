//! The center classifier.
//!
//! A Liénard system in Cherkas form has a non-degenerate center at the
//! origin iff its trace condition `a0 - b1 = 0` and nondegeneracy
//! `c1 - a0 b1 > 0` hold together with at least one of the two stratum
//! equations: `a1 - 2 b2 = 0` (Hamiltonian) or `c2 - a0 (a1 + b2) = 0`
//! (pull-back). On normalized reversible parameters the same conditions read
//! `2 a20 + b11 = 0` and either `a21 + b12 = 0` or
//! `(1 - b30) a02 = a20 (2 a21 - b12)`.
//!
//! The two strata intersect, so `Both` is a verdict of its own rather than
//! being folded into either component.

use num_traits::Zero;

use crate::exactpoly::{rat, sign, Rational};
use crate::field::{ReversibleParams, ReversibleParamsF64};
use crate::lienard::{reduce_to_cherkas_f64, CherkasForm, CherkasFormF64};
use crate::{Error, Result};

/// Which piece of the center set (or its complement) a parameter point
/// belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Stratum {
    Hamiltonian,
    PullBack,
    /// Both stratum equations hold simultaneously.
    Both,
    /// Linear center conditions hold (or trace fails) but no stratum
    /// equation does: the point is a focus.
    Focus,
    /// Nondegeneracy `c1 - a0 b1 > 0` fails.
    Degenerate,
}

impl Stratum {
    pub fn is_center(self) -> bool {
        matches!(self, Stratum::Hamiltonian | Stratum::PullBack | Stratum::Both)
    }
}

/// Raw condition values backing a verdict, for audit of near-boundary calls.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConditionValues {
    /// Zero iff the trace at the singular point vanishes.
    pub trace: Rational,
    /// Zero iff the Hamiltonian stratum equation holds.
    pub hamiltonian: Rational,
    /// Zero iff the pull-back stratum equation holds.
    pub pull_back: Rational,
    /// Positive iff the linearization is a nondegenerate center type.
    pub nondegeneracy: Rational,
}

/// First-integral handle or failing-condition report attached to a verdict.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Witness {
    /// A polynomial Hamiltonian exists (divergence-free stratum).
    HamiltonianIntegral,
    /// The Darboux integral of the quotient linear system pulls back through
    /// `(x, y) -> (x² - 1 + P2(y), y²)`.
    PullBackIntegral,
    /// Both witnesses are available.
    EitherIntegral,
    /// No center: reports which conditions failed.
    FailingConditions {
        trace_violated: bool,
        hamiltonian_violated: bool,
        pull_back_violated: bool,
    },
    /// Nondegeneracy failed; no classification witness applies.
    DegeneracyReport,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CenterVerdict {
    pub stratum: Stratum,
    pub trace_ok: bool,
    pub nondegenerate: bool,
    pub witness: Witness,
    pub conditions: ConditionValues,
}

impl CenterVerdict {
    pub fn is_center(&self) -> bool {
        self.stratum.is_center()
    }
}

fn assemble(conditions: ConditionValues) -> CenterVerdict {
    let trace_ok = conditions.trace.is_zero();
    let nondegenerate = sign(&conditions.nondegeneracy) > 0;
    let ham = conditions.hamiltonian.is_zero();
    let pb = conditions.pull_back.is_zero();
    let (stratum, witness) = if !nondegenerate {
        (Stratum::Degenerate, Witness::DegeneracyReport)
    } else if !trace_ok {
        (
            Stratum::Focus,
            Witness::FailingConditions {
                trace_violated: true,
                hamiltonian_violated: !ham,
                pull_back_violated: !pb,
            },
        )
    } else {
        match (ham, pb) {
            (true, true) => (Stratum::Both, Witness::EitherIntegral),
            (true, false) => (Stratum::Hamiltonian, Witness::HamiltonianIntegral),
            (false, true) => (Stratum::PullBack, Witness::PullBackIntegral),
            (false, false) => (
                Stratum::Focus,
                Witness::FailingConditions {
                    trace_violated: false,
                    hamiltonian_violated: true,
                    pull_back_violated: true,
                },
            ),
        }
    };
    CenterVerdict {
        stratum,
        trace_ok,
        nondegenerate,
        witness,
        conditions,
    }
}

/// Classifies a Liénard system in Cherkas form, exactly.
///
/// Condition values are read off the Cherkas data: `trace = p(0)`,
/// `hamiltonian = p'(0)`, `pull_back = [y²] q`, `nondegeneracy = [y] q`.
/// On the trace-zero slice `[y²] q` equals `c2 - a0 (a1 + b2)`.
pub fn classify_lienard(c: &CherkasForm) -> CenterVerdict {
    assemble(ConditionValues {
        trace: c.p.coeff(0),
        hamiltonian: c.p.coeff(1),
        pull_back: c.q.coeff(2),
        nondegeneracy: c.q.coeff(1),
    })
}

/// Classifies normalized reversible parameters by evaluating the reversible
/// stratum equations directly.
///
/// Nondegeneracy is delegated to the quotient dictionary (`c1 - a0 b1`
/// through the reduction) rather than re-derived, so both classifiers share
/// one sign convention.
pub fn classify_reversible(params: &ReversibleParams) -> Result<CenterVerdict> {
    let unit = rat(1) - &params.b30;
    if unit.is_zero() {
        return Err(Error::SingularReduction);
    }
    let trace = rat(2) * &params.a20 + &params.b11;
    let hamiltonian = &params.a21 + &params.b12;
    let pull_back =
        &unit * &params.a02 - &params.a20 * &(rat(2) * &params.a21 - &params.b12);
    // c1 - a0 b1 = 2(1 + a01 + a21)/(1 - b30) + 2 a20 b11 / (1 - b30)²
    let nondegeneracy = rat(2) * (rat(1) + &params.a01 + &params.a21) / &unit
        + rat(2) * &params.a20 * &params.b11 / (&unit * &unit);
    Ok(assemble(ConditionValues {
        trace,
        hamiltonian,
        pull_back,
        nondegeneracy,
    }))
}

/// Classifies a batch of parameter points; sweeps run in parallel when the
/// `parallel` feature is enabled.
pub fn classify_batch(params: &[ReversibleParams]) -> Vec<Result<CenterVerdict>> {
    crate::par::map_slice(params, classify_reversible)
}

/// Toleranced verdict for float parameters (normalize fallback).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VerdictF64 {
    pub stratum: Stratum,
    pub trace_ok: bool,
    pub nondegenerate: bool,
}

/// Raw float condition values, reported next to the toleranced verdict.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ConditionValuesF64 {
    pub trace: f64,
    pub hamiltonian: f64,
    pub pull_back: f64,
    pub nondegeneracy: f64,
}

fn assemble_f64(v: ConditionValuesF64, scales: [f64; 3], eps: f64) -> VerdictF64 {
    let near_zero = |value: f64, scale: f64| value.abs() <= eps * (1.0 + scale);
    let trace_ok = near_zero(v.trace, scales[0]);
    let nondegenerate = v.nondegeneracy > 0.0;
    let ham = near_zero(v.hamiltonian, scales[1]);
    let pb = near_zero(v.pull_back, scales[2]);
    let stratum = if !nondegenerate {
        Stratum::Degenerate
    } else if !trace_ok {
        Stratum::Focus
    } else {
        match (ham, pb) {
            (true, true) => Stratum::Both,
            (true, false) => Stratum::Hamiltonian,
            (false, true) => Stratum::PullBack,
            (false, false) => Stratum::Focus,
        }
    };
    VerdictF64 {
        stratum,
        trace_ok,
        nondegenerate,
    }
}

/// Float-mode classifier over Cherkas data with relative tolerance `eps`.
pub fn classify_lienard_f64(c: &CherkasFormF64, eps: f64) -> (VerdictF64, ConditionValuesF64) {
    let values = ConditionValuesF64 {
        trace: c.p0,
        hamiltonian: c.p1,
        pull_back: c.q2,
        nondegeneracy: c.q1,
    };
    let scales = [c.p0.abs(), c.p1.abs(), c.q2.abs()];
    (assemble_f64(values, scales, eps), values)
}

/// Float-mode classifier over normalized float parameters.
pub fn classify_reversible_f64(
    p: &ReversibleParamsF64,
    eps: f64,
) -> Result<(VerdictF64, ConditionValuesF64)> {
    let unit = 1.0 - p.b30;
    if unit == 0.0 {
        return Err(Error::SingularReduction);
    }
    let c = reduce_to_cherkas_f64(p)?;
    let values = ConditionValuesF64 {
        trace: 2.0 * p.a20 + p.b11,
        hamiltonian: p.a21 + p.b12,
        pull_back: unit * p.a02 - p.a20 * (2.0 * p.a21 - p.b12),
        nondegeneracy: c.q1,
    };
    let scales = [
        2.0 * p.a20.abs() + p.b11.abs(),
        p.a21.abs() + p.b12.abs(),
        (unit * p.a02).abs() + (p.a20 * (2.0 * p.a21 - p.b12)).abs(),
    ];
    Ok((assemble_f64(values, scales, eps), values))
}
