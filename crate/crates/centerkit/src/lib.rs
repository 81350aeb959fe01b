//! Decides whether a reversible cubic perturbation of the symmetric
//! Hamiltonian system `x' = y, y' = x - x^3` keeps its centers at `(±1, 0)`.
//!
//! The crate combines three independent routes to that decision and
//! cross-validates them:
//!
//! * exact algebra — the quotient substitution `ξ = x² - 1` turns the
//!   reversible field into a Liénard system whose center conditions are two
//!   explicit stratum equations ([`strata`]);
//! * a symbolic oracle — focus quantities computed from a formal first
//!   integral at `(1, 0)`, in exact rational arithmetic ([`lyapunov`]);
//! * a numerical oracle — Poincaré return maps and displacement functions
//!   from an adaptive Runge–Kutta integrator ([`flow`]).
//!
//! Center witnesses (polynomial Hamiltonians and pulled-back Darboux
//! integrals) are constructed in [`first_integral`].

pub mod exactpoly;
pub mod field;
pub mod first_integral;
pub mod flow;
pub mod lienard;
pub mod lyapunov;
pub mod par;
pub mod strata;

pub use exactpoly::{parse_exact, rat, ratio, Poly1, Poly2, Rational};
pub use field::{CubicField, ReversibleParams, ReversibleParamsRaw};
pub use strata::{CenterVerdict, Stratum};

/// Errors shared across the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vector field component exceeds the cubic degree bound")]
    DegreeBound,
    #[error("quotient reduction is singular: b30 = 1")]
    SingularReduction,
    #[error("Newton iteration for the singular point diverged: {0}")]
    NewtonDiverged(String),
    #[error("transformed field does not fit the normalized template (residual {residual:e})")]
    NotNormalizable { residual: f64 },
    #[error("linearization at (1,0) is not of center type: {0}")]
    NotCenterType(String),
    #[error("field does not vanish exactly at (1,0); exact shift unavailable")]
    ShiftNotRational,
    #[error("step size collapsed below {min:e} at t = {t}")]
    StepUnderflow { t: f64, min: f64 },
    #[error("orbit did not return: {0}")]
    NoReturn(String),
    #[error("field is not Hamiltonian: {0}")]
    NotHamiltonian(String),
    #[error("linear quotient system is degenerate: {0}")]
    DegenerateLinear(String),
    #[error("parameters are not in the pull-back stratum")]
    NotPullBack,
    #[error("invalid input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
