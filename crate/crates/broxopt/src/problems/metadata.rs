use serde::{Deserialize, Serialize};

use crate::util::{dot, norm, sub};
use crate::{Error, Result};

use super::Problem;

/// Explicit description of a minimizer set, rich enough to give exact
/// distances and projections.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum MinimizerSet {
    /// A finite list of points.
    Points { points: Vec<Vec<f64>> },
    /// A union of closed intervals on the line (ends may be infinite).
    Intervals { intervals: Vec<(f64, f64)> },
    /// An affine set `point + span(basis)` with an orthonormal basis.
    Affine { point: Vec<f64>, basis: Vec<Vec<f64>> },
}

impl MinimizerSet {
    pub fn distance(&self, x: &[f64]) -> f64 {
        norm(&sub(x, &self.project(x)))
    }

    /// Euclidean projection of `x` onto the set. For `Points` ties are broken
    /// by lexicographic order, so the result is deterministic.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        match self {
            MinimizerSet::Points { points } => {
                let mut best: Option<(&Vec<f64>, f64)> = None;
                for p in points {
                    let d = norm(&sub(x, p));
                    let better = match best {
                        None => true,
                        Some((bp, bd)) => d < bd || (d == bd && lex_less(p, bp)),
                    };
                    if better {
                        best = Some((p, d));
                    }
                }
                best.expect("point set must be nonempty").0.clone()
            }
            MinimizerSet::Intervals { intervals } => {
                let xv = x[0];
                let mut best = f64::NAN;
                let mut best_d = f64::INFINITY;
                for &(a, b) in intervals {
                    let p = xv.clamp(a, b);
                    let d = (xv - p).abs();
                    if d < best_d || (d == best_d && p < best) {
                        best = p;
                        best_d = d;
                    }
                }
                vec![best]
            }
            MinimizerSet::Affine { point, basis } => {
                let diff = sub(x, point);
                let mut proj = point.clone();
                for v in basis {
                    let c = dot(&diff, v);
                    for (pi, vi) in proj.iter_mut().zip(v.iter()) {
                        *pi += c * vi;
                    }
                }
                proj
            }
        }
    }

    /// Representative points for sampling and designated-minimizer choices.
    pub fn representative(&self) -> Vec<f64> {
        match self {
            MinimizerSet::Points { points } => points[0].clone(),
            MinimizerSet::Intervals { intervals } => {
                let (a, b) = intervals[0];
                let p = if a.is_finite() {
                    a
                } else if b.is_finite() {
                    b
                } else {
                    0.0
                };
                vec![p]
            }
            MinimizerSet::Affine { point, .. } => point.clone(),
        }
    }

    /// All finite corner points (used by grid checks); affine sets return
    /// only their anchor.
    pub fn sample_points(&self) -> Vec<Vec<f64>> {
        match self {
            MinimizerSet::Points { points } => points.clone(),
            MinimizerSet::Intervals { intervals } => intervals
                .iter()
                .flat_map(|&(a, b)| [a, b])
                .filter(|v| v.is_finite())
                .map(|v| vec![v])
                .collect(),
            MinimizerSet::Affine { point, .. } => vec![point.clone()],
        }
    }
}

/// What is known about a problem beyond point evaluation.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ProblemMetadata {
    pub minimizer_set: Option<MinimizerSet>,
    pub f_star: Option<f64>,
    pub l_smooth: Option<f64>,
    pub mu: Option<f64>,
}

impl ProblemMetadata {
    /// Consistency: f at each listed minimizer must equal `f_star` to 1e-9.
    pub fn validate(&self, problem: &Problem) -> Result<()> {
        if let (Some(set), Some(f_star)) = (&self.minimizer_set, self.f_star) {
            for p in set.sample_points() {
                let v = problem.eval(&p)?;
                if (v - f_star).abs() > 1e-9 * (1.0 + f_star.abs()) {
                    return Err(Error::InvalidProblem(format!(
                        "metadata mismatch: f({p:?}) = {v} but f_star = {f_star}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    a < b
}
