use crate::oracles::{brox, brox_blackbox, OracleBudget};
use crate::problems::Problem;
use crate::util::{dist, norm};
use crate::{Error, Result};

use super::schedule::{RadiusSchedule, StopRule};
use super::trace::{IterateTrace, TerminationReason, TraceRow};
use super::{is_fixed_point, pth};

/// Which broximal oracle the driver should call.
#[derive(Debug, Clone, Default)]
pub enum OracleChoice {
    /// Strongest available for the problem class (exact when possible).
    #[default]
    Auto,
    /// Force the multi-start iterative oracle with this budget.
    BlackBox(OracleBudget),
}

/// The core ball-proximal iteration `x_{k+1} ∈ brox_{t_k}(x_k)`, with the
/// lexicographic-smallest selection rule. Stops on the fixed point (step
/// negligible with zero multiplier), on `f_tol`, on schedule exhaustion, or
/// at `max_iter`.
pub fn run_bpm(
    problem: &Problem,
    oracle: &OracleChoice,
    x0: &[f64],
    schedule: &RadiusSchedule,
    stop: &StopRule,
) -> Result<IterateTrace> {
    schedule.validate()?;
    stop.validate()?;
    if let RadiusSchedule::PthOrder { p, gamma } = schedule {
        return pth::run_bpm_pth(problem, x0, *gamma, *p, stop);
    }
    if x0.len() != problem.dim() {
        return Err(Error::DimensionMismatch { expected: problem.dim(), got: x0.len() });
    }

    let seed = match oracle {
        OracleChoice::Auto => 0,
        OracleChoice::BlackBox(b) => b.rng_seed,
    };
    let mut trace = IterateTrace::new(seed);
    let mut x = x0.to_vec();

    for k in 0..=stop.max_iter {
        let f_k = problem.eval(&x)?;
        let d_k = problem.dist_opt(&x);
        let terminal = |reason: TerminationReason, trace: &mut IterateTrace, x: &[f64]| {
            trace.rows.push(TraceRow {
                k,
                x: x.to_vec(),
                f: f_k,
                radius: None,
                step_len: None,
                multiplier: None,
                grad_norm_next: None,
                dist_opt: d_k,
                client: None,
            });
            trace.terminated = reason;
        };

        if let (Some(f_tol), Some(f_star)) = (stop.f_tol, problem.f_star()) {
            if f_k - f_star <= f_tol {
                terminal(TerminationReason::OptimumReached, &mut trace, &x);
                return Ok(trace);
            }
        }
        if k == stop.max_iter {
            terminal(TerminationReason::MaxIter, &mut trace, &x);
            return Ok(trace);
        }

        let grad_norm = if schedule.needs_gradient() {
            Some(norm(&problem.grad(&x)?.v))
        } else {
            None
        };
        let t_k = match schedule.radius(k, f_k, grad_norm) {
            Some(t) if t > 0.0 => t,
            _ => {
                // Polyak radius 0 means f_k = f⋆; an exhausted list just stops.
                let at_opt = matches!(schedule, RadiusSchedule::Polyak { .. });
                terminal(
                    if at_opt {
                        TerminationReason::OptimumReached
                    } else {
                        TerminationReason::MaxIter
                    },
                    &mut trace,
                    &x,
                );
                return Ok(trace);
            }
        };

        let result = match oracle {
            OracleChoice::Auto => brox(problem, &x, t_k, None)?,
            OracleChoice::BlackBox(budget) => {
                let step_budget =
                    OracleBudget { rng_seed: budget.rng_seed.wrapping_add(k as u64), ..budget.clone() };
                brox_blackbox(problem, &x, t_k, &step_budget)?
            }
        };
        trace.record_residual(result.stationarity_residual);
        if result.multiplier_c > 0.0 {
            trace.record_residual(result.boundary_residual);
        }
        let u = result.selected().to_vec();
        let step_len = dist(&u, &x);

        if is_fixed_point(step_len, result.multiplier_c, norm(&x), stop.step_tol) {
            terminal(TerminationReason::OptimumReached, &mut trace, &x);
            return Ok(trace);
        }

        let grad_norm_next = match problem.grad(&u) {
            Ok(g) if !g.nonsmooth => Some(norm(&g.v)),
            _ => None,
        };
        trace.rows.push(TraceRow {
            k,
            x,
            f: f_k,
            radius: Some(t_k),
            step_len: Some(step_len),
            multiplier: Some(result.multiplier_c),
            grad_norm_next,
            dist_opt: d_k,
            client: None,
        });
        x = u;
    }
    unreachable!("loop always returns");
}
