use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::oracles::brox;
use crate::problems::{MinimizerSet, Problem, ProblemKind};
use crate::util::{dist, norm, sub};
use crate::{Error, Result};

use super::schedule::{RadiusSchedule, StopRule};
use super::trace::{IterateTrace, TerminationReason, TraceRow};

/// How a stochastic step behaves once the ball reaches the sampled client's
/// minimizer set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbpmVariant {
    /// Take the Euclidean projection onto the client's minimizer set.
    Projected,
    /// Take the point of `ball ∩ X_i` farthest from the current iterate
    /// (worst admissible selection; ties broken by larger norm, then
    /// lexicographically larger).
    AdversarialUnprojected,
}

/// Stochastic ball-proximal iteration over a finite-sum problem: each step
/// samples a client uniformly and applies the client's ball step. Clients
/// must expose exact oracles and explicit minimizer sets.
pub fn run_sbpm(
    problem: &Problem,
    x0: &[f64],
    schedule: &RadiusSchedule,
    stop: &StopRule,
    variant: SbpmVariant,
    seed: u64,
) -> Result<IterateTrace> {
    schedule.validate()?;
    stop.validate()?;
    if matches!(schedule, RadiusSchedule::PthOrder { .. }) {
        return Err(Error::InvalidArgument(
            "p-th order radii are induced by their own driver".into(),
        ));
    }
    let fs = problem
        .as_finite_sum()
        .ok_or_else(|| Error::InvalidArgument("stochastic driver needs a finite sum".into()))?;
    if x0.len() != problem.dim() {
        return Err(Error::DimensionMismatch { expected: problem.dim(), got: x0.len() });
    }
    for (i, c) in fs.clients().iter().enumerate() {
        if matches!(c.kind(), ProblemKind::BlackBox(_) | ProblemKind::FiniteSum(_)) {
            return Err(Error::Unsupported(format!(
                "client {i} has no exact ball oracle"
            )));
        }
        if c.minimizer_set().is_none() {
            return Err(Error::InvalidProblem(format!(
                "client {i} has no explicit minimizer set"
            )));
        }
    }

    let n = fs.clients().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
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

        let i = rng.gen_range(0..n);
        let client = &fs.clients()[i];
        let set = client.minimizer_set().expect("validated above");
        let reach = set.distance(&x);

        let (u, c_mult) = if reach <= t_k {
            let u = match variant {
                SbpmVariant::Projected => set.project(&x),
                SbpmVariant::AdversarialUnprojected => farthest_in_ball(set, &x, t_k),
            };
            (u, 0.0)
        } else {
            let result = brox(client, &x, t_k, None)?;
            trace.record_residual(result.stationarity_residual);
            if result.multiplier_c > 0.0 {
                trace.record_residual(result.boundary_residual);
            }
            (result.selected().to_vec(), result.multiplier_c)
        };
        let step_len = dist(&u, &x);

        trace.rows.push(TraceRow {
            k,
            x,
            f: f_k,
            radius: Some(t_k),
            step_len: Some(step_len),
            multiplier: Some(c_mult),
            grad_norm_next: None,
            dist_opt: d_k,
            client: Some(i),
        });
        x = u;
    }
    unreachable!()
}

/// Farthest point of `ball(x, t) ∩ set` from `x`. The caller guarantees the
/// intersection is nonempty (`dist(x, set) ≤ t`). Ties prefer larger norm,
/// then lexicographically larger coordinates.
fn farthest_in_ball(set: &MinimizerSet, x: &[f64], t: f64) -> Vec<f64> {
    let better = |cand: &[f64], best: &[f64], x: &[f64]| {
        let dc = norm(&sub(cand, x));
        let db = norm(&sub(best, x));
        if (dc - db).abs() > 1e-12 * (1.0 + db) {
            return dc > db;
        }
        let nc = norm(cand);
        let nb = norm(best);
        if (nc - nb).abs() > 1e-12 * (1.0 + nb) {
            return nc > nb;
        }
        cand > best
    };
    match set {
        MinimizerSet::Points { points } => {
            let mut best: Option<&Vec<f64>> = None;
            for p in points {
                if norm(&sub(p, x)) <= t * (1.0 + 1e-12) {
                    match best {
                        None => best = Some(p),
                        Some(b) if better(p, b, x) => best = Some(p),
                        _ => {}
                    }
                }
            }
            best.expect("intersection known nonempty").clone()
        }
        MinimizerSet::Intervals { intervals } => {
            let xv = x[0];
            let mut best: Option<f64> = None;
            for &(a, b) in intervals {
                let lo = a.max(xv - t);
                let hi = b.min(xv + t);
                if lo > hi {
                    continue;
                }
                for cand in [lo, hi] {
                    let keep = match best {
                        None => true,
                        Some(bv) => better(&[cand], &[bv], x),
                    };
                    if keep {
                        best = Some(cand);
                    }
                }
            }
            vec![best.expect("intersection known nonempty")]
        }
        MinimizerSet::Affine { .. } => {
            let pi = set.project(x);
            let d = norm(&sub(&pi, x));
            let r = (t * t - d * d).max(0.0).sqrt();
            if r == 0.0 {
                return pi;
            }
            let v1 = match set {
                MinimizerSet::Affine { basis, .. } => &basis[0],
                _ => unreachable!(),
            };
            let plus: Vec<f64> = pi.iter().zip(v1.iter()).map(|(p, v)| p + r * v).collect();
            let minus: Vec<f64> = pi.iter().zip(v1.iter()).map(|(p, v)| p - r * v).collect();
            if better(&plus, &minus, x) {
                plus
            } else {
                minus
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::methods::{run_bpm, OracleChoice};
    use crate::problems::{FiniteSumProblem, QuadraticProblem};

    fn shifted_quadratic(center: f64) -> Problem {
        QuadraticProblem::from_rows(&[vec![1.0]], &[-center], 0.5 * center * center)
            .unwrap()
            .into()
    }

    #[test]
    fn single_client_matches_the_deterministic_driver() {
        let fs: Problem = FiniteSumProblem::new(vec![shifted_quadratic(0.0)]).unwrap().into();
        let single: Problem = shifted_quadratic(0.0);
        let a = run_sbpm(
            &fs,
            &[5.0],
            &RadiusSchedule::Constant { t: 1.0 },
            &StopRule::max_iter(8),
            SbpmVariant::Projected,
            7,
        )
        .unwrap();
        let b = run_bpm(
            &single,
            &OracleChoice::Auto,
            &[5.0],
            &RadiusSchedule::Constant { t: 1.0 },
            &StopRule::max_iter(8),
        )
        .unwrap();
        // until the ball reaches the minimizer both drivers take unit steps
        for (ra, rb) in a.rows.iter().zip(b.rows.iter()).take(5) {
            assert!((ra.x[0] - rb.x[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn projected_variant_is_absorbed_at_a_shared_minimizer() {
        let fs: Problem =
            FiniteSumProblem::new(vec![shifted_quadratic(0.0), shifted_quadratic(0.0)])
                .unwrap()
                .into();
        let trace = run_sbpm(
            &fs,
            &[3.0],
            &RadiusSchedule::Constant { t: 1.0 },
            &StopRule::max_iter(20),
            SbpmVariant::Projected,
            3,
        )
        .unwrap();
        let last = trace.rows.last().unwrap();
        assert!(last.x[0].abs() < 1e-12);
        // once reached, every later step stays put
        let hit = trace.rows.iter().position(|r| r.x[0].abs() < 1e-12).unwrap();
        for r in &trace.rows[hit..] {
            assert!(r.x[0].abs() < 1e-12);
        }
    }

    #[test]
    fn adversarial_variant_bounces_inside_the_ball() {
        let fs: Problem = FiniteSumProblem::new(vec![shifted_quadratic(0.0)]).unwrap().into();
        let trace = run_sbpm(
            &fs,
            &[0.2],
            &RadiusSchedule::Constant { t: 1.0 },
            &StopRule::max_iter(3),
            SbpmVariant::AdversarialUnprojected,
            1,
        )
        .unwrap();
        // X = {0}; the farthest admissible point is still 0, so it lands there
        assert!(trace.rows[1].x[0].abs() < 1e-12);
    }

    #[test]
    fn adversarial_interval_picks_the_far_endpoint() {
        let set = MinimizerSet::Intervals { intervals: vec![(-0.5, 10.0)] };
        let u = farthest_in_ball(&set, &[0.2], 1.0);
        assert_eq!(u, vec![1.2]);
        let set2 = MinimizerSet::Intervals { intervals: vec![(-5.0, 5.0)] };
        // both endpoints at distance 1: tie broken by larger norm fails
        // (equal), then lexicographically larger wins
        let u2 = farthest_in_ball(&set2, &[0.0], 1.0);
        assert_eq!(u2, vec![1.0]);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let fs: Problem =
            FiniteSumProblem::new(vec![shifted_quadratic(-2.0), shifted_quadratic(2.0)])
                .unwrap()
                .into();
        let a = run_sbpm(
            &fs,
            &[6.0],
            &RadiusSchedule::Constant { t: 0.5 },
            &StopRule::max_iter(30),
            SbpmVariant::Projected,
            42,
        )
        .unwrap();
        let b = run_sbpm(
            &fs,
            &[6.0],
            &RadiusSchedule::Constant { t: 0.5 },
            &StopRule::max_iter(30),
            SbpmVariant::Projected,
            42,
        )
        .unwrap();
        assert_eq!(a.rows, b.rows);
        assert!(a.rows.iter().take(30).all(|r| r.client.is_some()));
    }
}
