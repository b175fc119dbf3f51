use crate::oracles::prox;
use crate::problems::Problem;
use crate::util::{dist, norm};
use crate::{Error, Result};

use super::schedule::{GammaSchedule, StopRule};
use super::trace::{IterateTrace, TerminationReason, TraceRow};

/// Classical proximal point iteration `x_{k+1} = prox_{γ_k f}(x_k)` for
/// convex problems with an exact proximal oracle.
pub fn run_ppm(
    problem: &Problem,
    x0: &[f64],
    schedule: &GammaSchedule,
    stop: &StopRule,
) -> Result<IterateTrace> {
    schedule.validate()?;
    stop.validate()?;
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
        let gamma = match schedule.gamma(k) {
            Some(g) => g,
            None => {
                terminal(TerminationReason::MaxIter, &mut trace, &x);
                return Ok(trace);
            }
        };

        let z = prox(problem, &x, gamma)?;
        let step_len = dist(&z, &x);
        if step_len < stop.step_tol.max(1e-12 * (1.0 + norm(&x))) {
            terminal(TerminationReason::OptimumReached, &mut trace, &x);
            return Ok(trace);
        }
        // the prox relation gives the implied multiplier 1/γ on the ball of
        // radius ‖z − x‖
        trace.rows.push(TraceRow {
            k,
            x,
            f: f_k,
            radius: Some(step_len),
            step_len: Some(step_len),
            multiplier: Some(1.0 / gamma),
            grad_norm_next: match problem.grad(&z) {
                Ok(g) if !g.nonsmooth => Some(norm(&g.v)),
                _ => None,
            },
            dist_opt: d_k,
            client: None,
        });
        x = z;
    }
    unreachable!()
}
