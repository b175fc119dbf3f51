use nalgebra::DVector;

use crate::problems::{BregmanGenerator, Problem, ProblemKind};
use crate::{Error, Result};

use super::{trs, BroxResult};

/// Minimize `f` over the divergence ball `{z : D_h(z, x) ≤ t²}`.
///
/// For quadratic `f` and quadratic `h` the problem is a generalized
/// trust-region subproblem: whitening with the Cholesky factor of the
/// generator matrix reduces it to a Euclidean ball of radius `t√2`, solved
/// exactly by the secular equation. Other combinations run a projected
/// gradient inner loop whose level-set projection bisects along the segment
/// back to `x` (valid because `D_h(·, x)` is strictly convex with minimum 0
/// at `x`).
///
/// The reported multiplier `c` satisfies `∇f(u) = c·(∇h(x) − ∇h(u))` up to
/// the reported stationarity residual.
pub fn breg_brox(
    problem: &Problem,
    h: &BregmanGenerator,
    x: &[f64],
    t: f64,
) -> Result<BroxResult> {
    if t <= 0.0 {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    if problem.is_convex() != Some(true) {
        return Err(Error::Unsupported("divergence-ball oracle requires convex f".into()));
    }
    if x.len() != problem.dim() {
        return Err(Error::DimensionMismatch { expected: problem.dim(), got: x.len() });
    }

    if let (ProblemKind::Quadratic(q), Some(qh)) = (problem.kind(), h.as_quadratic()) {
        // whiten: s = z − x, w = R s with Q = RᵀR; the constraint becomes
        // ½‖w‖² ≤ t², a Euclidean ball of radius t√2.
        let chol = qh
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidProblem("generator matrix not positive definite".into()))?;
        let r = chol.l().transpose();
        let r_inv = r
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Oracle("Cholesky factor not invertible".into()))?;
        let xv = DVector::from_column_slice(x);
        let g = q.matrix() * &xv + q.linear();
        let a_t = &r_inv.transpose() * q.matrix() * &r_inv;
        let a_t = (&a_t + a_t.transpose()) * 0.5;
        let g_t = &r_inv.transpose() * &g;
        let eig = a_t.symmetric_eigen();
        let delta = t * std::f64::consts::SQRT_2;
        let sol = trs::solve_trs(&eig.eigenvalues, &eig.eigenvectors, &g_t, delta);
        let mut points: Vec<Vec<f64>> = sol
            .steps
            .iter()
            .map(|w| (&xv + &r_inv * w).as_slice().to_vec())
            .collect();
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let u = &points[0];
        let c = sol.lambda;
        let grad_u = problem.grad(u)?.v;
        let hx = h.grad(x);
        let hu = h.grad(u);
        let stat = grad_u
            .iter()
            .zip(hx.iter().zip(hu.iter()))
            .map(|(gi, (a, b))| {
                let e = gi - c * (a - b);
                e * e
            })
            .sum::<f64>()
            .sqrt();
        let div = h.divergence(u, x);
        return Ok(BroxResult {
            boundary_residual: (div - t * t).abs(),
            multiplier_c: c,
            stationarity_residual: stat,
            exact: true,
            evaluations_used: 0,
            points,
        });
    }

    // General case: penalty bisection. For λ ≥ 0 let
    // u(λ) = argmin f(z) + λ·D_h(z, x); the divergence D_h(u(λ), x) is
    // nonincreasing in λ, so bisect λ until the level t² is hit. The KKT
    // condition ∇f(u) = λ(∇h(x) − ∇h(u)) makes the multiplier c = λ.
    let mut evals: u64 = 0;
    let mut u = minimize_penalized(problem, h, x, 0.0, x, &mut evals)?;
    if h.divergence(&u, x) <= t * t * (1.0 + 1e-12) {
        let grad_u = problem.grad(&u)?.v;
        let stat = grad_u.iter().map(|v| v * v).sum::<f64>().sqrt();
        return Ok(BroxResult {
            points: vec![u],
            multiplier_c: 0.0,
            boundary_residual: 0.0,
            stationarity_residual: stat,
            exact: false,
            evaluations_used: evals,
        });
    }

    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    loop {
        u = minimize_penalized(problem, h, x, hi, &u, &mut evals)?;
        if h.divergence(&u, x) <= t * t {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > 1e16 {
            return Err(Error::Oracle("penalty bisection failed to bracket".into()));
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        u = minimize_penalized(problem, h, x, mid, &u, &mut evals)?;
        if h.divergence(&u, x) > t * t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c = 0.5 * (lo + hi);
    u = minimize_penalized(problem, h, x, c, &u, &mut evals)?;

    let grad_u = problem.grad(&u)?.v;
    let div = h.divergence(&u, x);
    let hx = h.grad(x);
    let hu = h.grad(&u);
    let stat = grad_u
        .iter()
        .zip(hx.iter().zip(hu.iter()))
        .map(|(gi, (a, b))| {
            let e = gi - c * (a - b);
            e * e
        })
        .sum::<f64>()
        .sqrt();
    Ok(BroxResult {
        points: vec![u],
        multiplier_c: c,
        boundary_residual: (div - t * t).abs(),
        stationarity_residual: stat,
        exact: false,
        evaluations_used: evals,
    })
}

/// Gradient descent with backtracking on `f(z) + λ·D_h(z, x)` (smooth and
/// convex, so plain descent with step adaptation suffices).
fn minimize_penalized(
    problem: &Problem,
    h: &BregmanGenerator,
    x: &[f64],
    lam: f64,
    start: &[f64],
    evals: &mut u64,
) -> Result<Vec<f64>> {
    let value = |z: &[f64], evals: &mut u64| -> Result<f64> {
        *evals += 1;
        Ok(problem.eval(z)? + lam * h.divergence(z, x))
    };
    let gradient = |z: &[f64], evals: &mut u64| -> Result<Vec<f64>> {
        *evals += 1;
        let g = problem.grad(z)?.v;
        let hz = h.grad(z);
        let hx = h.grad(x);
        Ok((0..z.len()).map(|i| g[i] + lam * (hz[i] - hx[i])).collect())
    };

    let mut z = start.to_vec();
    let mut fz = value(&z, evals)?;
    let mut alpha = 1.0 / (1.0 + lam);
    for _ in 0..3000 {
        let g = gradient(&z, evals)?;
        let gn2: f64 = g.iter().map(|v| v * v).sum();
        if gn2.sqrt() <= 1e-13 * (1.0 + fz.abs()) {
            break;
        }
        let mut a = alpha;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = z.iter().zip(g.iter()).map(|(zi, gi)| zi - a * gi).collect();
            let fc = value(&cand, evals)?;
            if fc <= fz - 0.25 * a * gn2 {
                z = cand;
                fz = fc;
                alpha = a * 2.0;
                accepted = true;
                break;
            }
            a *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(z)
}
