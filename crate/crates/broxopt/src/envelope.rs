//! The ball envelope `N(x) = min_{‖z−x‖ ≤ t} f(z)`: values, gradients where
//! they exist, the geometry of its minimizer set, and the normalized
//! gradient descent reformulation of the ball-proximal iteration.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::methods::{
    run_bpm, IterateTrace, OracleChoice, RadiusSchedule, StopRule, TerminationReason, TraceRow,
};
use crate::oracles::{brox, OracleBudget};
use crate::problems::Problem;
use crate::util::{dist, norm};
use crate::{Error, Result};

/// Immutable handle for querying the envelope of a problem at a fixed
/// radius. All queries go through the ball oracle, so the envelope is exact
/// wherever the oracle is.
#[derive(Clone)]
pub struct EnvelopeHandle {
    problem: Problem,
    t: f64,
    budget: Option<OracleBudget>,
}

/// One point where the Minkowski-sum law failed: either the envelope is at
/// its minimum while the point is outside the fattened minimizer set, or the
/// reverse.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeMinimizerViolation {
    pub x: Vec<f64>,
    pub envelope_gap: f64,
    pub dist_to_minimizers: f64,
}

/// Result of sampling the equivalence `N(x) = f⋆ ⇔ dist(x, X_f) ≤ t`.
/// Points within `1e-3` of the boundary `dist = t` are excluded: there the
/// envelope gap is dominated by quadratic growth below any fixed tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeMinimizerReport {
    pub samples: usize,
    pub excluded_near_boundary: usize,
    pub violations: Vec<EnvelopeMinimizerViolation>,
    pub passed: bool,
}

impl EnvelopeHandle {
    pub fn new(problem: Problem, t: f64) -> Result<Self> {
        if t <= 0.0 {
            return Err(Error::InvalidArgument("radius must be positive".into()));
        }
        Ok(Self { problem, t, budget: None })
    }

    /// Use the multi-start iterative oracle with this budget (needed for
    /// black-box problems).
    pub fn with_budget(mut self, budget: OracleBudget) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn radius(&self) -> f64 {
        self.t
    }

    /// `N(x)`: the objective at the ball step from `x`.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        let r = brox(&self.problem, x, self.t, self.budget.as_ref())?;
        self.problem.eval(r.selected())
    }

    /// `∇N(x) = ∇f(u)` with `u` the (unique) ball step. Refused when the
    /// step is set-valued or the base is not certified convex and smooth.
    pub fn grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.problem.is_convex() != Some(true) {
            return Err(Error::Unsupported(
                "envelope gradients need a certified convex base".into(),
            ));
        }
        if self.problem.l_smooth().is_none() {
            return Err(Error::Unsupported(
                "envelope gradients need a smooth base".into(),
            ));
        }
        let r = brox(&self.problem, x, self.t, self.budget.as_ref())?;
        if r.points.len() > 1 {
            return Err(Error::Unsupported(
                "envelope gradient undefined: the ball step is set-valued here".into(),
            ));
        }
        Ok(self.problem.grad(r.selected())?.v)
    }

    /// Sample the law `X_N = X_f + B_t(0)`: the envelope sits at `f⋆`
    /// exactly on the fattened minimizer set.
    pub fn minimizer_check(&self, samples: usize, seed: u64) -> Result<EnvelopeMinimizerReport> {
        let set = self
            .problem
            .minimizer_set()
            .ok_or_else(|| Error::InvalidArgument("needs a known minimizer set".into()))?
            .clone();
        let f_star = self
            .problem
            .f_star()
            .ok_or_else(|| Error::InvalidArgument("needs a known optimal value".into()))?;

        // sample a box around the anchor points, wide enough to land well
        // inside and well outside the fattened set
        let anchors = set.sample_points();
        let d = self.problem.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for a in &anchors {
            for i in 0..d {
                lo[i] = lo[i].min(a[i]);
                hi[i] = hi[i].max(a[i]);
            }
        }
        let margin = 3.0 * self.t + 1.0;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = EnvelopeMinimizerReport {
            samples: 0,
            excluded_near_boundary: 0,
            violations: Vec::new(),
            passed: true,
        };
        for _ in 0..samples {
            let x: Vec<f64> = (0..d)
                .map(|i| rng.gen_range(lo[i] - margin..=hi[i] + margin))
                .collect();
            let dist_min = set.distance(&x);
            if (dist_min - self.t).abs() <= 1e-3 {
                report.excluded_near_boundary += 1;
                continue;
            }
            report.samples += 1;
            let gap = self.value(&x)? - f_star;
            let at_min = gap.abs() <= 1e-8;
            let inside = dist_min <= self.t;
            if at_min != inside {
                report.violations.push(EnvelopeMinimizerViolation {
                    x,
                    envelope_gap: gap,
                    dist_to_minimizers: dist_min,
                });
            }
        }
        report.passed = report.violations.is_empty();
        Ok(report)
    }

    /// Normalized gradient descent on the envelope,
    /// `x_{k+1} = x_k − t·∇N(x_k)/‖∇N(x_k)‖`, which retraces the
    /// ball-proximal iterates of the base problem. Each prefix is asserted
    /// equal to the independently computed ball-proximal trace to 1e-9.
    pub fn run_gd_on_envelope(&self, x0: &[f64], stop: &StopRule) -> Result<IterateTrace> {
        stop.validate()?;
        if x0.len() != self.problem.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.problem.dim(),
                got: x0.len(),
            });
        }
        let reference = run_bpm(
            &self.problem,
            &OracleChoice::Auto,
            x0,
            &RadiusSchedule::Constant { t: self.t },
            stop,
        )?;

        let mut trace = IterateTrace::new(0);
        let mut x = x0.to_vec();
        for k in 0..=stop.max_iter {
            let n_val = self.value(&x)?;
            let f_k = self.problem.eval(&x)?;
            let d_k = self.problem.dist_opt(&x);
            if let Some(reference_row) = reference.rows.get(k) {
                let gap = dist(&reference_row.x, &x);
                if gap > 1e-9 * (1.0 + norm(&x)) {
                    return Err(Error::Oracle(format!(
                        "envelope descent diverged from the ball iteration by {gap:e} at step {k}"
                    )));
                }
            }
            let g = self.grad(&x)?;
            let gn = norm(&g);
            let stop_now = gn <= 1e-12 * (1.0 + n_val.abs()) || k == stop.max_iter;
            if stop_now {
                trace.rows.push(TraceRow {
                    k,
                    x: x.clone(),
                    f: f_k,
                    radius: None,
                    step_len: None,
                    multiplier: None,
                    grad_norm_next: None,
                    dist_opt: d_k,
                    client: None,
                });
                trace.terminated = if k == stop.max_iter && gn > 1e-12 * (1.0 + n_val.abs()) {
                    TerminationReason::MaxIter
                } else {
                    TerminationReason::OptimumReached
                };
                return Ok(trace);
            }
            let next: Vec<f64> =
                x.iter().zip(g.iter()).map(|(xi, gi)| xi - self.t * gi / gn).collect();
            trace.rows.push(TraceRow {
                k,
                x: x.clone(),
                f: f_k,
                radius: Some(self.t),
                step_len: Some(self.t),
                multiplier: Some(gn / self.t),
                grad_norm_next: None,
                dist_opt: d_k,
                client: None,
            });
            x = next;
        }
        unreachable!()
    }
}
