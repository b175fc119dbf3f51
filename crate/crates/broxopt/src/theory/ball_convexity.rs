use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::oracles::brox;
use crate::problems::Problem;
use crate::util::{dist, dot, sub};
use crate::{Error, Result};

/// A witness pair breaking the defining inequality.
#[derive(Debug, Clone, Serialize)]
pub struct BallConvexityViolation {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub slack: f64,
}

/// Result of grid-testing the ball-convexity defining inequality.
#[derive(Debug, Clone, Serialize)]
pub struct BallConvexityReport {
    pub t: f64,
    pub tested_pairs: usize,
    /// The multiplier `c_t(x)` used at each grid center.
    pub c_values: Vec<(Vec<f64>, f64)>,
    pub violations: Vec<BallConvexityViolation>,
    pub passed: bool,
}

const VIOLATION_SLACK: f64 = -1e-7;

fn require_exact(problem: &Problem) -> Result<()> {
    if !problem.has_exact_oracle() {
        return Err(Error::Unsupported(
            "ball-convexity checks need an exact ball oracle; an approximate one could \
             fabricate violations"
                .into(),
        ));
    }
    Ok(())
}

/// Test `f(y) ≥ f(u) + c_t(x)·⟨x−u, y−u⟩` for every grid center `x` (with
/// `u` its ball step and `c_t(x)` the oracle's multiplier) against every
/// probe `y`.
pub fn check_ball_convexity(
    problem: &Problem,
    t: f64,
    grid_x: &[Vec<f64>],
    grid_y: &[Vec<f64>],
) -> Result<BallConvexityReport> {
    require_exact(problem)?;
    if t <= 0.0 {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let mut report = BallConvexityReport {
        t,
        tested_pairs: 0,
        c_values: Vec::new(),
        violations: Vec::new(),
        passed: true,
    };
    for x in grid_x {
        let r = brox(problem, x, t, None)?;
        let u = r.selected().to_vec();
        let c = r.multiplier_c;
        let fu = problem.eval(&u)?;
        report.c_values.push((x.clone(), c));
        for y in grid_y {
            report.tested_pairs += 1;
            let slack = problem.eval(y)? - fu - c * dot(&sub(x, &u), &sub(y, &u));
            if slack < VIOLATION_SLACK {
                report.violations.push(BallConvexityViolation {
                    x: x.clone(),
                    y: y.clone(),
                    u: u.clone(),
                    slack,
                });
            }
        }
    }
    report.passed = report.violations.is_empty();
    Ok(report)
}

/// Test the two weak-form inequalities against a designated minimizer:
/// `f(u) − f⋆ ≤ c_t(x)·⟨x−u, u−x⋆⟩` and `f(x) − f(u) ≥ c_t(x)·‖x−u‖²`.
pub fn check_weak_ball_convexity(
    problem: &Problem,
    t: f64,
    grid_x: &[Vec<f64>],
    x_star: &[f64],
) -> Result<BallConvexityReport> {
    require_exact(problem)?;
    if t <= 0.0 {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let f_star = problem.eval(x_star)?;
    let mut report = BallConvexityReport {
        t,
        tested_pairs: 0,
        c_values: Vec::new(),
        violations: Vec::new(),
        passed: true,
    };
    for x in grid_x {
        let r = brox(problem, x, t, None)?;
        let u = r.selected().to_vec();
        let c = r.multiplier_c;
        let fu = problem.eval(&u)?;
        let fx = problem.eval(x)?;
        report.c_values.push((x.clone(), c));
        report.tested_pairs += 1;
        let step = sub(x, &u);
        let first = c * dot(&step, &sub(&u, x_star)) - (fu - f_star);
        let second = (fx - fu) - c * dot(&step, &step);
        let slack = first.min(second);
        if slack < VIOLATION_SLACK {
            report.violations.push(BallConvexityViolation {
                x: x.clone(),
                y: x_star.to_vec(),
                u,
                slack,
            });
        }
    }
    report.passed = report.violations.is_empty();
    Ok(report)
}

/// One structural property failing at a grid point.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyViolation {
    pub property: &'static str,
    pub x: Vec<f64>,
    pub slack: f64,
}

/// Result of checking the structural facts about the ball step over a grid:
/// single-valuedness away from the reachable region, the boundary law,
/// minimizer convex combinations mapping into the minimizer set, strict
/// descent, and the two-sided multiplier bounds.
#[derive(Debug, Clone, Serialize)]
pub struct BroxPropertiesReport {
    pub t: f64,
    pub tested_points: usize,
    pub violations: Vec<PropertyViolation>,
    pub passed: bool,
}

pub fn check_brox_properties(
    problem: &Problem,
    t: f64,
    grid_x: &[Vec<f64>],
) -> Result<BroxPropertiesReport> {
    require_exact(problem)?;
    if t <= 0.0 {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let set = problem
        .minimizer_set()
        .ok_or_else(|| Error::InvalidArgument("needs a known minimizer set".into()))?
        .clone();
    let f_star = problem
        .f_star()
        .ok_or_else(|| Error::InvalidArgument("needs a known optimal value".into()))?;
    let tol = 1e-9;

    let mut report = BroxPropertiesReport {
        t,
        tested_points: 0,
        violations: Vec::new(),
        passed: true,
    };
    let fail = |violations: &mut Vec<PropertyViolation>,
                    property: &'static str,
                    x: &[f64],
                    slack: f64| {
        if slack < -tol {
            violations.push(PropertyViolation { property, x: x.to_vec(), slack });
        }
    };

    for x in grid_x {
        report.tested_points += 1;
        let d = set.distance(x);
        let r = brox(problem, x, t, None)?;
        let u = r.selected().to_vec();
        let fx = problem.eval(x)?;
        let fu = problem.eval(&u)?;
        let step = dist(&u, x);

        if d > t + tol {
            // off the reachable region: unique step, exactly on the boundary
            fail(
                &mut report.violations,
                "single_valued",
                x,
                -((r.points.len() - 1) as f64),
            );
            fail(&mut report.violations, "boundary_law", x, -(step - t).abs());
            // strict descent
            fail(&mut report.violations, "strict_descent", x, fx - fu);
            // upper bound: c·‖x−u‖² ≤ f(x) − f(u)
            fail(
                &mut report.violations,
                "c_upper",
                x,
                (fx - fu) - r.multiplier_c * step * step,
            );
            // lower bound: c ≥ (f(u) − f⋆)/(‖u−x‖·dist(u, X_f))
            let du = set.distance(&u);
            if du > tol {
                fail(
                    &mut report.violations,
                    "c_lower",
                    x,
                    r.multiplier_c - (fu - f_star) / (step * du),
                );
            }
        }
    }

    // random convex combinations of known minimizers must map into the set
    let anchors = set.sample_points();
    if anchors.len() >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let i = rng.gen_range(0..anchors.len());
            let j = rng.gen_range(0..anchors.len());
            let lam: f64 = rng.gen_range(0.0..=1.0);
            let z: Vec<f64> = anchors[i]
                .iter()
                .zip(anchors[j].iter())
                .map(|(a, b)| lam * a + (1.0 - lam) * b)
                .collect();
            let r = brox(problem, &z, t, None)?;
            report.tested_points += 1;
            let worst = r
                .points
                .iter()
                .map(|p| set.distance(p))
                .fold(0.0f64, f64::max);
            fail(&mut report.violations, "convex_combination", &z, -worst);
        }
    }

    report.passed = report.violations.is_empty();
    Ok(report)
}
