use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::problems::Problem;
use crate::{Error, Result};

use super::{BroxResult, OracleBudget};

/// Approximate ball-constrained minimization by seeded multi-start projected
/// gradient descent with backtracking. Starts: the center, the boundary point
/// along the negative normalized gradient, and `restarts` points drawn
/// uniformly in the ball. Deterministic for fixed inputs and seed.
pub fn brox_blackbox(
    problem: &Problem,
    x: &[f64],
    t: f64,
    budget: &OracleBudget,
) -> Result<BroxResult> {
    if t <= 0.0 {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    budget.validate()?;
    let d = problem.dim();
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: x.len() });
    }

    let mut evals: u64 = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(budget.rng_seed);

    let mut starts: Vec<Vec<f64>> = vec![x.to_vec()];
    let g0 = problem.grad(x)?.v;
    evals += 1;
    let g0n = norm(&g0);
    if g0n > 0.0 {
        starts.push(
            x.iter().zip(g0.iter()).map(|(xi, gi)| xi - t * gi / g0n).collect(),
        );
    }
    for _ in 0..budget.restarts {
        // uniform in the ball: gaussian direction, radius t·U^(1/d)
        let dir: Vec<f64> = (0..d).map(|_| standard_normal(&mut rng)).collect();
        let dn = norm(&dir).max(f64::MIN_POSITIVE);
        let r = t * rng.gen::<f64>().powf(1.0 / d as f64);
        starts.push(x.iter().zip(dir.iter()).map(|(xi, di)| xi + r * di / dn).collect());
    }

    let per_start = (budget.max_evaluations / starts.len() as u64).max(8);
    let mut best: Option<(f64, Vec<f64>)> = None;

    for start in &starts {
        let mut z = start.clone();
        let mut fz = problem.eval(&z)?;
        evals += 1;
        let mut used: u64 = 1;
        let mut alpha = t / (1.0 + g0n);
        while used < per_start && evals < budget.max_evaluations {
            let g = problem.grad(&z)?.v;
            used += 1;
            evals += 1;
            let gn = norm(&g);
            if gn <= budget.inner_tolerance * (1.0 + fz.abs()) {
                break;
            }
            let mut accepted = false;
            let mut a = alpha;
            for _ in 0..40 {
                let cand = project_ball(
                    &z.iter().zip(g.iter()).map(|(zi, gi)| zi - a * gi).collect::<Vec<_>>(),
                    x,
                    t,
                );
                let fc = problem.eval(&cand)?;
                used += 1;
                evals += 1;
                let step2: f64 =
                    cand.iter().zip(z.iter()).map(|(c, zi)| (c - zi) * (c - zi)).sum();
                if fc <= fz - 1e-4 * step2 / a.max(1e-300) {
                    let moved = step2.sqrt();
                    z = cand;
                    fz = fc;
                    alpha = (a * 2.0).min(1e6 * t);
                    accepted = true;
                    if moved <= budget.inner_tolerance * (1.0 + t) {
                        used = per_start; // converged for this start
                    }
                    break;
                }
                a *= 0.5;
                if a < 1e-18 * t {
                    break;
                }
            }
            if !accepted {
                break;
            }
        }
        let better = match &best {
            None => true,
            Some((bf, bz)) => fz < *bf || (fz == *bf && z.as_slice() < bz.as_slice()),
        };
        if better {
            best = Some((fz, z));
        }
    }

    let (_, u) = best.expect("at least one start");
    let gu = problem.grad(&u)?.v;
    evals += 1;
    let step = dist(&u, x);
    let on_boundary = step >= t * (1.0 - 1e-6);
    let c = if on_boundary { norm(&gu) / t } else { 0.0 };
    let stat: f64 = gu
        .iter()
        .zip(x.iter().zip(u.iter()))
        .map(|(g, (xi, ui))| {
            let r = g - c * (xi - ui);
            r * r
        })
        .sum::<f64>()
        .sqrt();

    Ok(BroxResult {
        points: vec![u],
        multiplier_c: c,
        boundary_residual: (step - t).abs(),
        stationarity_residual: stat,
        exact: false,
        evaluations_used: evals,
    })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn project_ball(z: &[f64], x: &[f64], t: f64) -> Vec<f64> {
    let d = dist(z, x);
    if d <= t {
        z.to_vec()
    } else {
        let s = t / d;
        z.iter().zip(x.iter()).map(|(zi, xi)| xi + s * (zi - xi)).collect()
    }
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; two uniforms per sample keeps the stream simple and seeded.
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
