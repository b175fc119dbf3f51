use crate::methods::{IterateTrace, TerminationReason};
use crate::problems::{BregmanGenerator, Problem};
use crate::util::norm;

use super::reports::{TheoremId, TheoremReport};

/// Extra inputs some checks need beyond the trace and the problem.
#[derive(Clone, Copy, Default)]
pub struct VerifyParams<'a> {
    /// Generator of the divergence balls (divergence-ball rate only).
    pub bregman: Option<&'a BregmanGenerator>,
    /// Order of the p-th power proximal term (order-fit check only).
    pub p: Option<u32>,
}

/// Check the named guarantee against a recorded trace.
///
/// Hypotheses are verified from problem metadata first; anything unmet (or
/// any missing trace field) yields a `skipped` verdict rather than a vacuous
/// pass. Inequalities are evaluated with tolerance
/// `1e-9 + 10 × max_oracle_residual`, so traces produced by approximate
/// oracles stay honestly checkable.
pub fn verify_trace(
    trace: &IterateTrace,
    problem: &Problem,
    theorem_id: TheoremId,
    params: &VerifyParams,
) -> TheoremReport {
    let tol = 1e-9 + 10.0 * trace.max_oracle_residual;
    let skip = |reason: &str| TheoremReport::skipped(theorem_id, reason, tol);
    if !trace.max_oracle_residual.is_finite() {
        return skip("trace carries an unbounded oracle residual");
    }
    if trace.rows.len() < 2 {
        return skip("trace has no completed steps");
    }
    let rows = &trace.rows;
    let steps = rows.len() - 1;

    // step k is rows[k] → rows[k+1]; all step rows must carry a radius
    let radii: Option<Vec<f64>> = rows[..steps].iter().map(|r| r.radius).collect();
    let radii = match radii {
        Some(r) => r,
        None => return skip("a step row is missing its radius"),
    };
    let step_lens: Option<Vec<f64>> = rows[..steps].iter().map(|r| r.step_len).collect();
    let dists: Option<Vec<f64>> = rows.iter().map(|r| r.dist_opt).collect();
    let constant_t = radii
        .windows(2)
        .all(|w| (w[0] - w[1]).abs() <= 1e-12 * (1.0 + w[0].abs()));
    let f_star = problem.f_star();
    let convex = problem.is_convex() == Some(true);
    let h = |k: usize, fs: f64| rows[k].f - fs;

    match theorem_id {
        TheoremId::ConvLinI => {
            if !convex {
                return skip("problem not certified convex");
            }
            let (fs, d) = match (f_star, &dists) {
                (Some(fs), Some(d)) => (fs, d),
                _ => return skip("needs f* and distances to the minimizer set"),
            };
            let slacks: Vec<(usize, f64)> = (0..steps)
                .filter(|&k| d[k] <= radii[k])
                .map(|k| (k, fs - rows[k + 1].f))
                .collect();
            if slacks.is_empty() {
                return skip("no step whose ball reaches the minimizer set");
            }
            TheoremReport::from_slacks(theorem_id, slacks, tol)
        }
        TheoremId::ConvLinII => {
            if !convex {
                return skip("problem not certified convex");
            }
            let d = match &dists {
                Some(d) => d,
                None => return skip("needs distances to the minimizer set"),
            };
            let lens = match &step_lens {
                Some(l) => l,
                None => return skip("a step row is missing its step length"),
            };
            let slacks: Vec<(usize, f64)> = (0..steps)
                .filter(|&k| d[k] > radii[k])
                .map(|k| {
                    let law = d[k] * d[k] - radii[k] * radii[k] - d[k + 1] * d[k + 1];
                    let step_gap = (lens[k] - radii[k]).abs();
                    // the slack is the distance-law margin unless the step
                    // itself was short of the full radius
                    (k, if step_gap <= tol { law } else { law.min(-step_gap) })
                })
                .collect();
            if slacks.is_empty() {
                return skip("every ball already reaches the minimizer set");
            }
            TheoremReport::from_slacks(theorem_id, slacks, tol)
        }
        TheoremId::ConvLinIII => {
            if !convex {
                return skip("problem not certified convex");
            }
            if !constant_t {
                return skip("needs a constant radius schedule");
            }
            if trace.terminated != TerminationReason::OptimumReached {
                return skip("trace did not terminate at the optimum");
            }
            let d0 = match &dists {
                Some(d) => d[0],
                None => return skip("needs the initial distance to the minimizer set"),
            };
            let t = radii[0];
            let bound = (d0 * d0 / (t * t)).ceil();
            TheoremReport::from_slacks(theorem_id, vec![(steps, bound - steps as f64)], tol)
        }
        TheoremId::ConvLinIV => {
            if !convex {
                return skip("problem not certified convex");
            }
            let (fs, d) = match (f_star, &dists) {
                (Some(fs), Some(d)) => (fs, d),
                _ => return skip("needs f* and distances to the minimizer set"),
            };
            let lens = match &step_lens {
                Some(l) => l,
                None => return skip("a step row is missing its step length"),
            };
            let slacks: Vec<(usize, f64)> = (0..steps)
                .map(|k| {
                    let bound = if d[k + 1] > 0.0 {
                        h(k, fs) / (1.0 + lens[k] / d[k + 1])
                    } else {
                        0.0
                    };
                    (k, bound - h(k + 1, fs))
                })
                .collect();
            TheoremReport::from_slacks(theorem_id, slacks, tol)
        }
        TheoremId::ConvLinV => {
            if !convex {
                return skip("problem not certified convex");
            }
            let fs = match f_star {
                Some(fs) => fs,
                None => return skip("needs f*"),
            };
            let grads: Option<Vec<f64>> =
                rows[..steps].iter().map(|r| r.grad_norm_next).collect();
            let g = match grads {
                // g[k] = ‖∇f(x_{k+1})‖
                Some(g) => g,
                None => return skip("a step row is missing the successor gradient norm"),
            };
            let mut slacks: Vec<(usize, f64)> = Vec::new();
            for k in 1..steps {
                slacks.push((k, g[k - 1] - g[k]));
            }
            let mut weighted = 0.0;
            for k in 0..steps {
                weighted += radii[k] * g[k];
                let slack = h(0, fs) - weighted;
                match slacks.iter_mut().find(|(j, _)| *j == k) {
                    Some((_, s)) => *s = s.min(slack),
                    None => slacks.push((k, slack)),
                }
            }
            slacks.sort_by_key(|(k, _)| *k);
            TheoremReport::from_slacks(theorem_id, slacks, tol)
        }
        TheoremId::CorLinRate => {
            if !convex {
                return skip("problem not certified convex");
            }
            let (fs, d0) = match (f_star, &dists) {
                (Some(fs), Some(d)) => (fs, d[0]),
                _ => return skip("needs f* and the initial distance"),
            };
            if d0 <= 0.0 {
                return skip("starts on the minimizer set");
            }
            let h0 = h(0, fs);
            let mut factor = 1.0;
            let slacks: Vec<(usize, f64)> = (1..=steps)
                .map(|kk| {
                    factor /= 1.0 + radii[kk - 1] / d0;
                    (kk, factor * h0 - h(kk, fs))
                })
                .collect();
            TheoremReport::from_slacks(theorem_id, slacks, tol)
        }
        TheoremId::Sublinear => {
            if !convex {
                return skip("problem not certified convex");
            }
            if !constant_t {
                return skip("needs a constant radius schedule");
            }
            let (fs, d0) = match (f_star, &dists) {
                (Some(fs), Some(d)) => (fs, d[0]),
                _ => return skip("needs f* and the initial distance"),
            };
            if d0 <= 0.0 {
                return skip("starts on the minimizer set");
            }
            let t = radii[0];
            let h0 = h(0, fs);
            let coeff = (2.0 * d0 / (2.0 * d0 + t)) * (d0 * d0 / (2.0 * t * t)) * h0;
            let slacks: Vec<(usize, f64)> =
                (1..=steps).map(|kk| (kk, coeff / kk as f64 - h(kk, fs))).collect();
            TheoremReport::from_slacks(theorem_id, slacks, tol)
        }
        TheoremId::WeakLin => {
            if !constant_t {
                return skip("needs a constant radius schedule");
            }
            let (fs, d0) = match (f_star, &dists) {
                (Some(fs), Some(d)) => (fs, d[0]),
                _ => return skip("needs f* and the initial distance"),
            };
            if d0 <= 0.0 {
                return skip("starts on the minimizer set");
            }
            let t = radii[0];
            let h0 = h(0, fs);
            let base = 1.0 + t / d0;
            let slacks: Vec<(usize, f64)> = (1..=steps)
                .map(|kk| {
                    let e = (kk as f64 - 1.0) / 2.0;
                    (kk, base.powf(-e.ceil()) * h0 - h(kk, fs))
                })
                .collect();
            TheoremReport::from_slacks(theorem_id, slacks, tol)
        }
        TheoremId::SbpmRate => {
            let fsum = match problem.as_finite_sum() {
                Some(fsum) => fsum,
                None => return skip("needs a finite-sum problem"),
            };
            let l_max = match fsum
                .clients()
                .iter()
                .map(|c| c.l_smooth())
                .collect::<Option<Vec<f64>>>()
            {
                Some(ls) => ls.into_iter().fold(0.0f64, f64::max),
                None => return skip("a client is missing its smoothness constant"),
            };
            if !constant_t {
                return skip("needs a constant radius schedule");
            }
            let (fs, d) = match (f_star, &dists) {
                (Some(fs), Some(d)) => (fs, d),
                _ => return skip("needs f* and distances to the common minimizer set"),
            };
            if rows[..steps].iter().any(|r| r.client.is_none()) {
                return skip("trace does not record sampled clients");
            }
            let t = radii[0];
            let d0 = d[0];
            let mut slacks: Vec<(usize, f64)> =
                (0..steps).map(|k| (k, d[k] - d[k + 1])).collect();
            let coeff = l_max * (1.0 + d0 * d0 / (t * t)) * d0 * d0 / 2.0;
            let mut sum_h = 0.0;
            for kk in 1..=steps {
                sum_h += h(kk - 1, fs);
                let slack = coeff / kk as f64 - sum_h / kk as f64;
                match slacks.iter_mut().find(|(j, _)| *j == kk - 1) {
                    Some((_, s)) => *s = s.min(slack),
                    None => slacks.push((kk - 1, slack)),
                }
            }
            TheoremReport::from_slacks(theorem_id, slacks, tol)
        }
        TheoremId::AbpmRate => {
            if !convex {
                return skip("problem not certified convex");
            }
            let l = match problem.l_smooth() {
                Some(l) => l,
                None => return skip("needs a smoothness constant"),
            };
            let (fs, d0) = match (f_star, &dists) {
                (Some(fs), Some(d)) => (fs, d[0]),
                _ => return skip("needs f* and the initial distance"),
            };
            let slacks: Vec<(usize, f64)> = (1..=steps)
                .map(|kk| {
                    let bound = 2.0 * l * d0 * d0 / (kk as f64 * (kk as f64 + 1.0));
                    (kk, bound - h(kk, fs))
                })
                .collect();
            TheoremReport::from_slacks(theorem_id, slacks, tol)
        }
        TheoremId::PpmpRate => {
            let p = match params.p {
                Some(p) if p >= 1 => p,
                _ => return skip("needs the proximal order p"),
            };
            let fs = match f_star {
                Some(fs) => fs,
                None => return skip("needs f*"),
            };
            let hi = steps.min(100);
            let pts: Vec<(f64, f64)> = (5..=hi)
                .filter(|&kk| h(kk, fs) > 0.0)
                .map(|kk| ((kk as f64).ln(), h(kk, fs).ln()))
                .collect();
            if pts.len() < 10 {
                return skip("too few positive-gap prefixes in [5, 100] for a slope fit");
            }
            let n = pts.len() as f64;
            let mx = pts.iter().map(|(a, _)| a).sum::<f64>() / n;
            let my = pts.iter().map(|(_, b)| b).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|(a, b)| (a - mx) * (b - my)).sum();
            let sxx: f64 = pts.iter().map(|(a, _)| (a - mx) * (a - mx)).sum();
            let slope = sxy / sxx;
            let slack = (-(p as f64) + 0.1) - slope;
            TheoremReport::from_slacks(theorem_id, vec![(hi, slack)], tol)
        }
        TheoremId::BregRate => {
            let gen = match params.bregman {
                Some(g) => g,
                None => return skip("needs the divergence generator"),
            };
            if !convex {
                return skip("problem not certified convex");
            }
            if !constant_t {
                return skip("needs a constant radius schedule");
            }
            let fs = match f_star {
                Some(fs) => fs,
                None => return skip("needs f*"),
            };
            let set = match problem.minimizer_set() {
                Some(s) => s,
                None => return skip("needs the minimizer set"),
            };
            let x0 = &rows[0].x;
            let x_star = set.project(x0);
            let div0 = gen.divergence(&x_star, x0);
            let t = radii[0];
            let h0 = h(0, fs);
            let slacks: Vec<(usize, f64)> = (1..=steps)
                .map(|kk| (kk, h0 * div0 / (kk as f64 * t * t) - h(kk, fs)))
                .collect();
            TheoremReport::from_slacks(theorem_id, slacks, tol)
        }
        TheoremId::NgdNbhd => {
            if !convex {
                return skip("problem not certified convex");
            }
            if !constant_t {
                return skip("needs a constant radius schedule");
            }
            let (fs, d0) = match (f_star, &dists) {
                (Some(fs), Some(d)) => (fs, d[0]),
                _ => return skip("needs f* and the initial distance"),
            };
            let g0 = match problem.grad(&rows[0].x) {
                Ok(g) if !g.nonsmooth => norm(&g.v),
                _ => return skip("needs a differentiable problem"),
            };
            let grads: Option<Vec<f64>> =
                rows[..steps].iter().map(|r| r.grad_norm_next).collect();
            let gnext = match grads {
                Some(g) => g,
                None => return skip("a step row is missing the successor gradient norm"),
            };
            let big_g = gnext.iter().copied().fold(g0, f64::max);
            let t = radii[0];
            let mut sum_f = 0.0;
            let slacks: Vec<(usize, f64)> = (1..=steps)
                .map(|kk| {
                    sum_f += rows[kk - 1].f;
                    let bound =
                        fs + big_g * d0 * d0 / (2.0 * t * kk as f64) + big_g * t / 2.0;
                    (kk, bound - sum_f / kk as f64)
                })
                .collect();
            TheoremReport::from_slacks(theorem_id, slacks, tol)
        }
        TheoremId::NgdAda => {
            if !convex {
                return skip("problem not certified convex");
            }
            let d = match &dists {
                Some(d) => d,
                None => return skip("needs distances to the minimizer set"),
            };
            let slacks: Vec<(usize, f64)> = (0..steps)
                .map(|k| (k, d[k] * d[k] - radii[k] * radii[k] - d[k + 1] * d[k + 1]))
                .collect();
            TheoremReport::from_slacks(theorem_id, slacks, tol)
        }
    }
}
