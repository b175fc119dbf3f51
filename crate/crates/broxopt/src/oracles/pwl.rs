use crate::problems::PiecewiseLinear1D;
use crate::{Error, Result};

use super::BroxResult;

/// Exact 1-D broximal oracle for piecewise-linear functions by candidate
/// enumeration: the minimum over `[x−t, x+t]` is attained at a ball endpoint
/// or at a breakpoint. Returns *all* global minimizers of the restriction,
/// sorted ascending.
pub fn brox_pwl1d(f: &PiecewiseLinear1D, x: f64, t: f64) -> Result<BroxResult> {
    if t <= 0.0 {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let (lo, hi) = (x - t, x + t);
    let mut candidates = vec![lo, hi];
    candidates.extend(f.breakpoints().iter().copied().filter(|&b| b > lo && b < hi));
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup();

    let values: Vec<f64> = candidates.iter().map(|&c| f.value(c)).collect();
    let f_min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let tie_tol = 1e-12 * (1.0 + f_min.abs());
    let points: Vec<Vec<f64>> = candidates
        .iter()
        .zip(values.iter())
        .filter(|(_, &v)| v - f_min <= tie_tol)
        .map(|(&c, _)| vec![c])
        .collect();
    let evaluations = candidates.len() as u64;

    let u = points[0][0];
    let is_global_min = match f.global_min() {
        Some((f_star, _)) => f.value(u) - f_star <= 1e-12 * (1.0 + f_star.abs()),
        None => false,
    };
    let on_boundary = (u - x).abs() >= t * (1.0 - 1e-12);
    let right_slope = f.slope_at(u).0;
    let (slo, shi) = f.subgradient_interval(u);
    let left_slope = if right_slope == slo { shi } else { slo };
    // Multiplier: the slope on the ball-interior side of u divided by t when
    // the selected minimizer sits on the ball boundary; 0 when u is a global
    // minimizer of f (interior fixed-point case).
    let c = if is_global_min || !on_boundary {
        0.0
    } else if u <= x {
        // left boundary: f increases to the right of u inside the ball
        right_slope.abs() / t
    } else {
        // right boundary: f decreases to the left of u inside the ball
        left_slope.abs() / t
    };
    // Distance of c·(x−u) to the subgradient interval at u.
    let target = c * (x - u);
    let stationarity = if target < slo {
        slo - target
    } else if target > shi {
        target - shi
    } else {
        0.0
    };

    Ok(BroxResult {
        points,
        multiplier_c: c,
        boundary_residual: ((u - x).abs() - t).abs(),
        stationarity_residual: stationarity,
        exact: true,
        evaluations_used: evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dw() -> PiecewiseLinear1D {
        PiecewiseLinear1D::double_well_symmetric()
    }

    #[test]
    fn table_of_the_double_well() {
        // x > 2 → x−1
        let r = brox_pwl1d(&dw(), 3.0, 1.0).unwrap();
        assert_eq!(r.points, vec![vec![2.0]]);
        assert_eq!(r.multiplier_c, 1.0);
        // x = 0 → both wells
        let r = brox_pwl1d(&dw(), 0.0, 1.0).unwrap();
        assert_eq!(r.points, vec![vec![-1.0], vec![1.0]]);
        assert_eq!(r.multiplier_c, 0.0);
        // -2 ≤ x < 0 → {-1}
        let r = brox_pwl1d(&dw(), -1.5, 1.0).unwrap();
        assert_eq!(r.points, vec![vec![-1.0]]);
        assert_eq!(r.multiplier_c, 0.0);
        // 0 < x ≤ 2 → {1}
        let r = brox_pwl1d(&dw(), 2.0, 1.0).unwrap();
        assert_eq!(r.points, vec![vec![1.0]]);
        // x < -2 → x+1
        let r = brox_pwl1d(&dw(), -4.0, 1.0).unwrap();
        assert_eq!(r.points, vec![vec![-3.0]]);
        assert_eq!(r.multiplier_c, 1.0);
        // fixed point at a global minimizer
        let r = brox_pwl1d(&dw(), -1.0, 1.0).unwrap();
        assert_eq!(r.points[0], vec![-1.0]);
        assert_eq!(r.multiplier_c, 0.0);
    }

    #[test]
    fn certificates_are_clean() {
        for x in [-4.0, -2.5, 0.0, 0.7, 3.1, 5.0] {
            let r = brox_pwl1d(&dw(), x, 1.0).unwrap();
            assert!(r.multiplier_c >= 0.0);
            assert!(r.stationarity_residual <= 1e-12);
            for p in &r.points {
                assert!((p[0] - x).abs() <= 1.0 + 1e-12);
            }
            if r.multiplier_c > 0.0 {
                assert!(r.boundary_residual <= 1e-10);
            }
        }
    }

    #[test]
    fn convex_pwl_single_valued_boundary() {
        // |x| as PWL
        let f = PiecewiseLinear1D::new(vec![0.0], vec![-1.0, 1.0], 0.0).unwrap();
        let r = brox_pwl1d(&f, 5.0, 2.0).unwrap();
        assert_eq!(r.points, vec![vec![3.0]]);
        assert_eq!(r.multiplier_c, 0.5);
        let r = brox_pwl1d(&f, 0.5, 2.0).unwrap();
        assert_eq!(r.points, vec![vec![0.0]]);
        assert_eq!(r.multiplier_c, 0.0);
    }
}
