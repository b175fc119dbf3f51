use crate::oracles::prox_p;
use crate::problems::Problem;
use crate::util::{dist, norm};
use crate::{Error, Result};

use super::schedule::StopRule;
use super::trace::{IterateTrace, TerminationReason, TraceRow};

/// Ball-proximal iteration with the radius induced by the p-th order proximal
/// step: each step solves `z = argmin γf(z) + ‖z−x‖^{p+1}/(p+1)` and records
/// the realized radius `t_k = ‖z − x_k‖`, asserting the identity
/// `t_k = (γ‖∇f(z)‖)^{1/p}` to 1e-8.
pub fn run_bpm_pth(
    problem: &Problem,
    x0: &[f64],
    gamma: f64,
    p: u32,
    stop: &StopRule,
) -> Result<IterateTrace> {
    stop.validate()?;
    if gamma <= 0.0 || p < 1 {
        return Err(Error::InvalidArgument("need gamma > 0 and p >= 1".into()));
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

        let z = prox_p(problem, &x, gamma, p)?;
        let t_k = dist(&z, &x);
        let gz = problem.grad(&z)?.v;
        let gzn = norm(&gz);
        if t_k < stop.step_tol.max(1e-14 * (1.0 + norm(&x))) {
            terminal(TerminationReason::OptimumReached, &mut trace, &x);
            return Ok(trace);
        }
        let induced = (gamma * gzn).powf(1.0 / p as f64);
        let identity_residual = (t_k - induced).abs();
        if identity_residual > 1e-8 * (1.0 + t_k) {
            return Err(Error::Oracle(format!(
                "induced-radius identity violated by {identity_residual:e}"
            )));
        }
        trace.record_residual(identity_residual);

        trace.rows.push(TraceRow {
            k,
            x,
            f: f_k,
            radius: Some(t_k),
            step_len: Some(t_k),
            multiplier: Some(gzn / t_k),
            grad_norm_next: Some(gzn),
            dist_opt: d_k,
            client: None,
        });
        x = z;
    }
    unreachable!()
}
