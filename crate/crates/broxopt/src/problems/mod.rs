//! Objective-function representations and their metadata.

mod blackbox;
mod bregman;
mod metadata;
mod pwl;
mod quadratic;
mod spec;

pub use blackbox::{BlackBoxSmooth, CAMEL_F_STAR, CAMEL_MIN_X, CAMEL_MIN_Y};
pub use bregman::BregmanGenerator;
pub use metadata::{MinimizerSet, ProblemMetadata};
pub use pwl::PiecewiseLinear1D;
pub use quadratic::QuadraticProblem;
pub use spec::{BregmanSpec, ProblemFile, ProblemSpec};

use crate::{Error, Result};

/// Gradient (or chosen subgradient) of a problem at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Grad {
    pub v: Vec<f64>,
    /// True when the point is a kink and `v` is the deterministic
    /// right-slope subgradient choice rather than a true gradient.
    pub nonsmooth: bool,
}

/// A finite average `f = (1/n) Σ f_i` of client objectives.
#[derive(Clone)]
pub struct FiniteSumProblem {
    clients: Vec<Problem>,
}

impl FiniteSumProblem {
    pub fn new(clients: Vec<Problem>) -> Result<Self> {
        if clients.is_empty() {
            return Err(Error::InvalidProblem("finite sum needs n >= 1 clients".into()));
        }
        let d = clients[0].dim();
        for c in &clients {
            if c.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: c.dim() });
            }
        }
        Ok(Self { clients })
    }

    pub fn clients(&self) -> &[Problem] {
        &self.clients
    }

    pub fn dim(&self) -> usize {
        self.clients[0].dim()
    }
}

/// The union of all supported objective classes.
#[derive(Clone)]
pub enum ProblemKind {
    Pwl1d(PiecewiseLinear1D),
    Quadratic(QuadraticProblem),
    BlackBox(BlackBoxSmooth),
    FiniteSum(FiniteSumProblem),
}

/// An objective together with whatever is known about it (minimizer set,
/// optimal value, smoothness constants). Evaluation is pure and the value is
/// immutable after construction, so problems are safe to share across workers.
#[derive(Clone)]
pub struct Problem {
    kind: ProblemKind,
    meta: ProblemMetadata,
}

impl Problem {
    pub fn new(kind: ProblemKind) -> Self {
        let meta = match &kind {
            ProblemKind::Pwl1d(p) => {
                let mut m = ProblemMetadata::default();
                if let Some((f_star, set)) = p.global_min() {
                    m.f_star = Some(f_star);
                    m.minimizer_set = Some(set);
                }
                m
            }
            ProblemKind::Quadratic(q) => {
                let mut m = ProblemMetadata {
                    l_smooth: Some(q.smoothness_l()),
                    ..ProblemMetadata::default()
                };
                if q.lambda_min() > 0.0 {
                    m.mu = Some(q.lambda_min());
                }
                if let Some((f_star, set)) = q.minimizer_set() {
                    m.f_star = Some(f_star);
                    m.minimizer_set = Some(set);
                }
                m
            }
            ProblemKind::BlackBox(b) => {
                let mut m = ProblemMetadata::default();
                if let Some((points, value)) = b.known_optimum() {
                    m.f_star = Some(value);
                    m.minimizer_set = Some(MinimizerSet::Points { points: points.to_vec() });
                }
                m
            }
            ProblemKind::FiniteSum(_) => ProblemMetadata::default(),
        };
        Self { kind, meta }
    }

    /// Replace the metadata (for problems where it cannot be derived, e.g.
    /// finite sums with a known common minimizer).
    pub fn with_metadata(mut self, meta: ProblemMetadata) -> Result<Self> {
        meta.validate(&self)?;
        self.meta = meta;
        Ok(self)
    }

    pub fn kind(&self) -> &ProblemKind {
        &self.kind
    }

    pub fn metadata(&self) -> &ProblemMetadata {
        &self.meta
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ProblemKind::Pwl1d(_) => 1,
            ProblemKind::Quadratic(q) => q.dim(),
            ProblemKind::BlackBox(b) => b.dim(),
            ProblemKind::FiniteSum(s) => s.dim(),
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match &self.kind {
            ProblemKind::Pwl1d(p) => p.value(x[0]),
            ProblemKind::Quadratic(q) => q.value(x),
            ProblemKind::BlackBox(b) => b.value(x),
            ProblemKind::FiniteSum(s) => {
                let mut acc = 0.0;
                for c in s.clients() {
                    acc += c.eval(x)?;
                }
                acc / s.clients().len() as f64
            }
        })
    }

    pub fn grad(&self, x: &[f64]) -> Result<Grad> {
        self.check_dim(x)?;
        Ok(match &self.kind {
            ProblemKind::Pwl1d(p) => {
                let (s, nonsmooth) = p.slope_at(x[0]);
                Grad { v: vec![s], nonsmooth }
            }
            ProblemKind::Quadratic(q) => Grad { v: q.grad(x), nonsmooth: false },
            ProblemKind::BlackBox(b) => Grad { v: b.grad(x), nonsmooth: false },
            ProblemKind::FiniteSum(s) => {
                let n = s.clients().len() as f64;
                let mut v = vec![0.0; x.len()];
                let mut nonsmooth = false;
                for c in s.clients() {
                    let g = c.grad(x)?;
                    nonsmooth |= g.nonsmooth;
                    for (vi, gi) in v.iter_mut().zip(g.v.iter()) {
                        *vi += gi / n;
                    }
                }
                Grad { v, nonsmooth }
            }
        })
    }

    /// `Some(true)` / `Some(false)` when convexity is decidable from the
    /// structure, `None` when unknown (plain black boxes without a hint).
    pub fn is_convex(&self) -> Option<bool> {
        match &self.kind {
            ProblemKind::Pwl1d(p) => Some(p.is_convex()),
            ProblemKind::Quadratic(q) => Some(q.is_convex()),
            ProblemKind::BlackBox(b) => {
                if b.convex_hint() {
                    Some(true)
                } else {
                    None
                }
            }
            ProblemKind::FiniteSum(s) => {
                let mut all = true;
                for c in s.clients() {
                    match c.is_convex() {
                        Some(true) => {}
                        Some(false) => return Some(false),
                        None => all = false,
                    }
                }
                if all {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }

    pub fn f_star(&self) -> Option<f64> {
        self.meta.f_star
    }

    pub fn minimizer_set(&self) -> Option<&MinimizerSet> {
        self.meta.minimizer_set.as_ref()
    }

    /// Distance from `x` to the known minimizer set, when available.
    pub fn dist_opt(&self, x: &[f64]) -> Option<f64> {
        self.minimizer_set().map(|s| s.distance(x))
    }

    /// Smoothness constant, from structure or metadata.
    pub fn l_smooth(&self) -> Option<f64> {
        self.meta.l_smooth
    }

    pub fn as_pwl1d(&self) -> Option<&PiecewiseLinear1D> {
        match &self.kind {
            ProblemKind::Pwl1d(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_quadratic(&self) -> Option<&QuadraticProblem> {
        match &self.kind {
            ProblemKind::Quadratic(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_finite_sum(&self) -> Option<&FiniteSumProblem> {
        match &self.kind {
            ProblemKind::FiniteSum(s) => Some(s),
            _ => None,
        }
    }

    /// True when an exact broximal oracle exists for this class.
    pub fn has_exact_oracle(&self) -> bool {
        matches!(self.kind, ProblemKind::Pwl1d(_) | ProblemKind::Quadratic(_))
    }
}

impl From<PiecewiseLinear1D> for Problem {
    fn from(p: PiecewiseLinear1D) -> Self {
        Problem::new(ProblemKind::Pwl1d(p))
    }
}

impl From<QuadraticProblem> for Problem {
    fn from(q: QuadraticProblem) -> Self {
        Problem::new(ProblemKind::Quadratic(q))
    }
}

impl From<BlackBoxSmooth> for Problem {
    fn from(b: BlackBoxSmooth) -> Self {
        Problem::new(ProblemKind::BlackBox(b))
    }
}

impl From<FiniteSumProblem> for Problem {
    fn from(s: FiniteSumProblem) -> Self {
        Problem::new(ProblemKind::FiniteSum(s))
    }
}
