//! Ball-constrained minimization oracles: exact for structured problem
//! classes, certified-approximate for black boxes, plus proximal and
//! divergence-ball variants.

mod blackbox;
mod bregman;
mod prox;
mod pwl;
pub mod trs;

pub use blackbox::brox_blackbox;
pub use trs::{solve_trs, TrsSolution};
pub use bregman::breg_brox;
pub use prox::{prox, prox_p};
pub use pwl::brox_pwl1d;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::problems::{Problem, ProblemKind, QuadraticProblem};
use crate::{Error, Result};

/// Minimizer(s) of `f` over the ball `‖z − x‖ ≤ t`, with an optimality
/// certificate. Points are sorted lexicographically; downstream consumers use
/// the lexicographic-smallest point so runs are reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct BroxResult {
    pub points: Vec<Vec<f64>>,
    /// The nonnegative multiplier `c` with `c·(x − u)` a (sub)gradient of `f`
    /// at the selected point `u`; zero for interior minimizers.
    pub multiplier_c: f64,
    /// `| ‖u − x‖ − t |` for the selected point (for divergence balls,
    /// `|D(u, x) − t²|`).
    pub boundary_residual: f64,
    /// `‖∇f(u) − c·(x − u)‖`, or the distance of `c·(x − u)` to the
    /// subgradient set for kinked functions.
    pub stationarity_residual: f64,
    pub exact: bool,
    pub evaluations_used: u64,
}

impl BroxResult {
    /// The deterministic selection: lexicographically smallest minimizer.
    pub fn selected(&self) -> &[f64] {
        &self.points[0]
    }
}

/// Effort limits for iterative (inexact) oracles. The same seed always yields
/// a bit-identical result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleBudget {
    pub max_evaluations: u64,
    pub restarts: u32,
    pub inner_tolerance: f64,
    pub rng_seed: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self { max_evaluations: 20_000, restarts: 16, inner_tolerance: 1e-10, rng_seed: 0 }
    }
}

impl OracleBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_evaluations == 0 || self.restarts == 0 || self.inner_tolerance <= 0.0 {
            return Err(Error::InvalidArgument("oracle budget fields must be positive".into()));
        }
        Ok(())
    }
}

/// Exact trust-region solve of the ball-constrained quadratic subproblem via
/// the secular equation, including the degenerate (hard) case.
pub fn brox_quadratic(f: &QuadraticProblem, x: &[f64], t: f64) -> Result<BroxResult> {
    if t <= 0.0 {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    if x.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: x.len() });
    }
    let xv = DVector::from_column_slice(x);
    let g = f.matrix() * &xv + f.linear();
    let sol = trs::solve_trs(f.eigvals(), f.eigvecs(), &g, t);
    let mut points: Vec<Vec<f64>> =
        sol.steps.iter().map(|s| (&xv + s).as_slice().to_vec()).collect();
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let u = DVector::from_column_slice(&points[0]);
    let s = &u - &xv;
    let grad_u = f.matrix() * &u + f.linear();
    let stationarity = (&grad_u + &s * sol.lambda).norm();
    Ok(BroxResult {
        points,
        multiplier_c: sol.lambda,
        boundary_residual: (s.norm() - t).abs(),
        stationarity_residual: stationarity,
        exact: true,
        evaluations_used: 0,
    })
}

/// Dispatch to the strongest available oracle for the problem class.
pub fn brox(problem: &Problem, x: &[f64], t: f64, budget: Option<&OracleBudget>) -> Result<BroxResult> {
    match problem.kind() {
        ProblemKind::Pwl1d(p) => brox_pwl1d(p, x[0], t),
        ProblemKind::Quadratic(q) => brox_quadratic(q, x, t),
        ProblemKind::BlackBox(_) | ProblemKind::FiniteSum(_) => {
            let default = OracleBudget::default();
            brox_blackbox(problem, x, t, budget.unwrap_or(&default))
        }
    }
}
