use crate::oracles::breg_brox;
use crate::problems::{BregmanGenerator, Problem};
use crate::util::{dist, norm};
use crate::{Error, Result};

use super::is_fixed_point;
use super::schedule::{RadiusSchedule, StopRule};
use super::trace::{IterateTrace, TerminationReason, TraceRow};

/// Ball-proximal iteration over divergence balls `{z : D_h(z, x_k) ≤ t_k²}`
/// induced by a strongly convex generator `h`.
pub fn run_bregbpm(
    problem: &Problem,
    h: &BregmanGenerator,
    x0: &[f64],
    schedule: &RadiusSchedule,
    stop: &StopRule,
) -> Result<IterateTrace> {
    schedule.validate()?;
    stop.validate()?;
    if matches!(schedule, RadiusSchedule::PthOrder { .. }) {
        return Err(Error::InvalidArgument(
            "p-th order radii are induced by their own driver".into(),
        ));
    }
    if x0.len() != problem.dim() {
        return Err(Error::DimensionMismatch { expected: problem.dim(), got: x0.len() });
    }

    let mut trace = IterateTrace::new(0);
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

        let result = breg_brox(problem, h, &x, t_k)?;
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

        trace.rows.push(TraceRow {
            k,
            x,
            f: f_k,
            radius: Some(t_k),
            step_len: Some(step_len),
            multiplier: Some(result.multiplier_c),
            grad_norm_next: match problem.grad(&u) {
                Ok(g) if !g.nonsmooth => Some(norm(&g.v)),
                _ => None,
            },
            dist_opt: d_k,
            client: None,
        });
        x = u;
    }
    unreachable!()
}
