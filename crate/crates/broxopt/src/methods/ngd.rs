use nalgebra::{DMatrix, DVector};

use crate::oracles::trs::solve_trs;
use crate::problems::Problem;
use crate::util::{dist, norm};
use crate::{Error, Result};

use super::schedule::{RadiusSchedule, StopRule};
use super::trace::{IterateTrace, TerminationReason, TraceRow};

/// Normalized gradient descent `x_{k+1} = x_k − t_k·∇f(x_k)/‖∇f(x_k)‖`.
///
/// Each step is verified to equal the ball-constrained minimizer of the
/// first-order model of `f` at `x_k` (computed independently through the
/// trust-region machinery with zero curvature) to 1e-12.
pub fn run_normalized_gd(
    problem: &Problem,
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

    let d = problem.dim();
    let zero = DMatrix::<f64>::zeros(d, d);
    let zero_eig = zero.symmetric_eigen();

    let mut trace = IterateTrace::new(0);
    let mut x = x0.to_vec();
    for k in 0..=stop.max_iter {
        let f_k = problem.eval(&x)?;
        let d_k = problem.dist_opt(&x);
        let terminal =
            |reason: TerminationReason, trace: &mut IterateTrace, x: &[f64]| {
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

        let g = problem.grad(&x)?.v;
        let gn = norm(&g);
        if gn <= 1e-14 * (1.0 + f_k.abs()) {
            let at_opt = problem
                .f_star()
                .map_or(false, |fs| f_k - fs <= 1e-9 * (1.0 + fs.abs()));
            terminal(
                if at_opt { TerminationReason::OptimumReached } else { TerminationReason::Stalled },
                &mut trace,
                &x,
            );
            return Ok(trace);
        }

        let t_k = match schedule.radius(k, f_k, Some(gn)) {
            Some(t) if t > 0.0 => t,
            _ => {
                let polyak = matches!(schedule, RadiusSchedule::Polyak { .. });
                terminal(
                    if polyak {
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

        let next: Vec<f64> = x.iter().zip(g.iter()).map(|(xi, gi)| xi - t_k * gi / gn).collect();
        // independent route: exact minimization of the linear model over the ball
        let model = solve_trs(
            &zero_eig.eigenvalues,
            &zero_eig.eigenvectors,
            &DVector::from_column_slice(&g),
            t_k,
        );
        let brox_point: Vec<f64> = x
            .iter()
            .zip(model.steps[0].iter())
            .map(|(xi, si)| xi + si)
            .collect();
        let gap = dist(&next, &brox_point);
        if gap > 1e-12 * (1.0 + norm(&x)) {
            return Err(Error::Oracle(format!(
                "normalized step disagrees with the linear-model ball minimizer by {gap:e}"
            )));
        }

        let grad_norm_next = match problem.grad(&next) {
            Ok(gr) if !gr.nonsmooth => Some(norm(&gr.v)),
            _ => None,
        };
        trace.rows.push(TraceRow {
            k,
            x,
            f: f_k,
            radius: Some(t_k),
            step_len: Some(t_k),
            multiplier: Some(gn / t_k),
            grad_norm_next,
            dist_opt: d_k,
            client: None,
        });
        x = next;
    }
    unreachable!()
}
