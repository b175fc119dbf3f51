use nalgebra::{DMatrix, DVector};

use crate::problems::{Problem, ProblemKind};
use crate::{Error, Result};

/// Proximal point: the unique `z` with `z + γ∇f(z) = x` for convex `f`.
/// Closed form for quadratics, candidate scan for convex 1-D piecewise-linear
/// objectives, safeguarded bisection for convex differentiable 1-D black
/// boxes. Residual ≤ 1e-10 or an error is returned.
pub fn prox(problem: &Problem, x: &[f64], gamma: f64) -> Result<Vec<f64>> {
    if gamma <= 0.0 {
        return Err(Error::InvalidArgument("gamma must be positive".into()));
    }
    if problem.is_convex() != Some(true) {
        return Err(Error::Unsupported(
            "prox requires a certified convex problem (uniqueness)".into(),
        ));
    }
    match problem.kind() {
        ProblemKind::Quadratic(q) => {
            let d = q.dim();
            let m = DMatrix::identity(d, d) + q.matrix() * gamma;
            let rhs = DVector::from_column_slice(x) - q.linear() * gamma;
            let z = m
                .lu()
                .solve(&rhs)
                .ok_or_else(|| Error::Oracle("prox system is singular".into()))?;
            Ok(z.as_slice().to_vec())
        }
        ProblemKind::Pwl1d(f) => {
            // minimize f(z) + (z-x)²/(2γ): per-segment closed form + kinks
            let x = x[0];
            let mut best = (f64::INFINITY, x);
            let mut consider = |z: f64| {
                let obj = f.value(z) + (z - x) * (z - x) / (2.0 * gamma);
                if obj < best.0 || (obj == best.0 && z < best.1) {
                    best = (obj, z);
                }
            };
            let bps = f.breakpoints();
            for &b in bps {
                consider(b);
            }
            for i in 0..f.slopes().len() {
                let z = x - gamma * f.slopes()[i];
                let lo = if i == 0 { f64::NEG_INFINITY } else { bps[i - 1] };
                let hi = if i == bps.len() { f64::INFINITY } else { bps[i] };
                if z >= lo && z <= hi {
                    consider(z);
                }
            }
            Ok(vec![best.1])
        }
        ProblemKind::BlackBox(_) | ProblemKind::FiniteSum(_) => {
            if problem.dim() != 1 {
                return Err(Error::Unsupported(
                    "prox for black boxes is implemented in 1-D only".into(),
                ));
            }
            let x = x[0];
            let fp = |z: f64| problem.grad(&[z]).map(|g| g.v[0]);
            // root of z + γ f'(z) − x, increasing in z for convex f
            let g_x = fp(x)?;
            if g_x == 0.0 {
                return Ok(vec![x]);
            }
            let (mut lo, mut hi) = if g_x > 0.0 { (x - gamma * g_x, x) } else { (x, x - gamma * g_x) };
            // widen until the root is bracketed (guards rounding at the ends)
            for _ in 0..64 {
                if lo + gamma * fp(lo)? - x <= 0.0 {
                    break;
                }
                lo -= gamma * g_x.abs().max(1.0);
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if mid + gamma * fp(mid)? - x > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let z = 0.5 * (lo + hi);
            let residual = (z + gamma * fp(z)? - x).abs();
            if residual > 1e-10 * (1.0 + x.abs()) {
                return Err(Error::RootFind { residual });
            }
            Ok(vec![z])
        }
    }
}

/// p-th order proximal point: `z` minimizing `γf(z) + ‖z−x‖^{p+1}/(p+1)`,
/// i.e. `γ∇f(z) + ‖z−x‖^{p−1}(z−x) = 0`. `p = 1` coincides with [`prox`].
pub fn prox_p(problem: &Problem, x: &[f64], gamma: f64, p: u32) -> Result<Vec<f64>> {
    if gamma <= 0.0 || p < 1 {
        return Err(Error::InvalidArgument("need gamma > 0 and p >= 1".into()));
    }
    if p == 1 {
        return prox(problem, x, gamma);
    }
    if problem.is_convex() != Some(true) {
        return Err(Error::Unsupported("p-th order prox requires convex f".into()));
    }
    let z = match problem.kind() {
        ProblemKind::Quadratic(q) => {
            // bisection on r = ‖z−x‖: with ν = r^{p−1}/γ the stationarity
            // system is (A + νI)s = −g, and ‖s(ν)‖ is decreasing in r.
            let xv = DVector::from_column_slice(x);
            let g = q.matrix() * &xv + q.linear();
            if g.norm() == 0.0 {
                return Ok(x.to_vec());
            }
            let step_norm = |r: f64| -> Result<f64> {
                let nu = r.powi(p as i32 - 1) / gamma;
                let d = q.dim();
                let m = q.matrix() + DMatrix::<f64>::identity(d, d) * nu;
                let s = m
                    .lu()
                    .solve(&(-&g))
                    .ok_or_else(|| Error::Oracle("singular system in p-th order prox".into()))?;
                Ok(s.norm())
            };
            let mut hi = (gamma * g.norm()).powf(1.0 / p as f64);
            for _ in 0..200 {
                if step_norm(hi)? <= hi {
                    break;
                }
                hi *= 2.0;
            }
            let mut lo = 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if step_norm(mid)? > mid {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let r = 0.5 * (lo + hi);
            let nu = r.powi(p as i32 - 1) / gamma;
            let d = q.dim();
            let m = q.matrix() + DMatrix::<f64>::identity(d, d) * nu;
            let s = m
                .lu()
                .solve(&(-&g))
                .ok_or_else(|| Error::Oracle("singular system in p-th order prox".into()))?;
            (&xv + s).as_slice().to_vec()
        }
        _ if problem.dim() == 1 => {
            let x0 = x[0];
            let fp = |z: f64| problem.grad(&[z]).map(|g| g.v[0]);
            let g_x = fp(x0)?;
            if g_x == 0.0 {
                return Ok(vec![x0]);
            }
            // residual γf'(z) + |z−x|^{p−1}(z−x), increasing in z
            let res = |z: f64| -> Result<f64> {
                let s = z - x0;
                Ok(gamma * fp(z)? + s.abs().powi(p as i32 - 1) * s)
            };
            let dir = -g_x.signum();
            let mut far = x0 + dir * (gamma * g_x.abs()).powf(1.0 / (p as f64 + 1.0)).max(1e-8);
            for _ in 0..200 {
                if res(far)? * g_x < 0.0 {
                    break;
                }
                far = x0 + (far - x0) * 2.0;
            }
            let (mut lo, mut hi) = if far < x0 { (far, x0) } else { (x0, far) };
            for _ in 0..300 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if res(mid)? > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            vec![0.5 * (lo + hi)]
        }
        _ => {
            return Err(Error::Unsupported(
                "p-th order prox is implemented for quadratics and 1-D problems".into(),
            ))
        }
    };
    // certify the stationarity residual
    let g = problem.grad(&z)?.v;
    let s: Vec<f64> = z.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
    let r = s.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale = r.powi(p as i32 - 1);
    let residual = g
        .iter()
        .zip(s.iter())
        .map(|(gi, si)| {
            let e = gamma * gi + scale * si;
            e * e
        })
        .sum::<f64>()
        .sqrt();
    if residual > 1e-9 * (1.0 + gamma * g.iter().map(|v| v * v).sum::<f64>().sqrt()) {
        return Err(Error::RootFind { residual });
    }
    Ok(z)
}
