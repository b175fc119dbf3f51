//! Iteration engines. Every driver records an [`IterateTrace`] whose rows
//! carry the quantities the theorem checks need (radii, step lengths,
//! multipliers, gradient norms, distances to the known minimizer set).

mod abpm;
mod bpm;
mod bregbpm;
mod equivalence;
mod ngd;
mod ppm;
mod pth;
mod sbpm;
mod schedule;
mod trace;

pub use abpm::run_abpm;
pub use bpm::{run_bpm, OracleChoice};
pub use bregbpm::run_bregbpm;
pub use equivalence::{brox_prox_equivalence_check, EquivalenceReport};
pub use ngd::run_normalized_gd;
pub use ppm::run_ppm;
pub use pth::run_bpm_pth;
pub use sbpm::{run_sbpm, SbpmVariant};
pub use schedule::{GammaSchedule, RadiusSchedule, StopRule};
pub use trace::{IterateTrace, TerminationReason, TraceRow};

/// Fixed-point detection: the step is negligible at the iterate's scale and
/// the oracle certifies an interior (multiplier-zero) minimizer.
pub(crate) fn is_fixed_point(step_len: f64, multiplier: f64, x_norm: f64, step_tol: f64) -> bool {
    step_len < step_tol.max(1e-12 * (1.0 + x_norm)) && multiplier <= 1e-12
}
