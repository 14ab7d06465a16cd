//! Solvers and numerical checks for the radial initial value problem
//!
//! ```text
//! psi'' + psi'/r + f(psi) = 0,   r >= r0 >= 1,   psi(r0) = 0,   psi'(r0) = psi1 != 0,
//! ```
//!
//! where the vorticity law `f` is continuous but not Lipschitz at `psi = 0`.
//!
//! * [`vorticity`]: the laws and sampled checks of their sign and Hölder-type
//!   hypotheses;
//! * [`picard`]: Picard iteration on the integral form with product
//!   integration of the kernel `tau ln(r/tau)`;
//! * [`rk`]: an independent adaptive Dormand-Prince integrator;
//! * [`verify`]: the local uniqueness argument replayed on computed
//!   solutions (contraction window, lower bound, weighted deviation, sweep).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod kv;
pub mod picard;
pub mod rk;
pub mod trajectory;
pub mod verify;
pub mod vorticity;

pub use error::{Error, Result};
pub use grid::{Grading, RadialGrid};
pub use picard::{kernel_integral, picard_solve, residual, weighted_norm, PicardDiagnostics, PicardOptions};
pub use rk::{rhs, rk_solve, RunLog, StepControl};
pub use trajectory::{Method, Trajectory};
pub use verify::{
    check_lower_bound, compute_r2, continuity_sweep, contraction_probe, deviation_limit_trace, verify_uniqueness,
    BindingConstraint, ContractionProbe, SweepResult, SweepRow, UniquenessReport, UniquenessWindow, VerifySettings,
};
pub use vorticity::{HypothesisReport, ModelKind, ModelSpec, VorticityModel};
