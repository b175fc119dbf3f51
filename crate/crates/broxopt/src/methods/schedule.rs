use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Rule producing the ball radius `t_k` for step `k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadiusSchedule {
    Constant { t: f64 },
    ExplicitList { ts: Vec<f64> },
    /// `t_k = (f(x_k) − f⋆) / ‖∇f(x_k)‖`; requires the exact optimal value.
    Polyak { f_star_hint: f64 },
    /// Radius induced by the p-th order proximal step,
    /// `t_k = (γ‖∇f(x_{k+1})‖)^{1/p}`, realized by solving that step first.
    PthOrder { p: u32, gamma: f64 },
}

impl RadiusSchedule {
    pub fn validate(&self) -> Result<()> {
        match self {
            RadiusSchedule::Constant { t } => {
                if *t <= 0.0 {
                    return Err(Error::InvalidArgument("constant radius must be > 0".into()));
                }
            }
            RadiusSchedule::ExplicitList { ts } => {
                if ts.is_empty() || ts.iter().any(|t| *t <= 0.0) {
                    return Err(Error::InvalidArgument("radius list must be positive".into()));
                }
            }
            RadiusSchedule::Polyak { f_star_hint } => {
                if !f_star_hint.is_finite() {
                    return Err(Error::InvalidArgument("Polyak needs a finite f_star".into()));
                }
            }
            RadiusSchedule::PthOrder { p, gamma } => {
                if *p < 1 || *gamma <= 0.0 {
                    return Err(Error::InvalidArgument("need p >= 1 and gamma > 0".into()));
                }
            }
        }
        Ok(())
    }

    /// Radius for step `k` given the current value and gradient norm; `None`
    /// when the schedule is exhausted (explicit list) or the step is induced
    /// (p-th order, handled by its own driver).
    pub(crate) fn radius(&self, k: usize, f_k: f64, grad_norm: Option<f64>) -> Option<f64> {
        match self {
            RadiusSchedule::Constant { t } => Some(*t),
            RadiusSchedule::ExplicitList { ts } => ts.get(k).copied(),
            RadiusSchedule::Polyak { f_star_hint } => {
                let g = grad_norm?;
                if g <= 0.0 {
                    None
                } else {
                    Some((f_k - f_star_hint) / g)
                }
            }
            RadiusSchedule::PthOrder { .. } => None,
        }
    }

    pub(crate) fn needs_gradient(&self) -> bool {
        matches!(self, RadiusSchedule::Polyak { .. })
    }
}

/// Step-size rule for the proximal-point baseline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaSchedule {
    Constant { gamma: f64 },
    ExplicitList { gammas: Vec<f64> },
}

impl GammaSchedule {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            GammaSchedule::Constant { gamma } => *gamma > 0.0,
            GammaSchedule::ExplicitList { gammas } => {
                !gammas.is_empty() && gammas.iter().all(|g| *g > 0.0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument("gamma schedule must be positive".into()))
        }
    }

    pub(crate) fn gamma(&self, k: usize) -> Option<f64> {
        match self {
            GammaSchedule::Constant { gamma } => Some(*gamma),
            GammaSchedule::ExplicitList { gammas } => gammas.get(k).copied(),
        }
    }
}

/// Stopping conditions shared by every driver.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StopRule {
    pub max_iter: usize,
    /// Stop when `f − f⋆ ≤ f_tol` (needs a known optimal value).
    #[serde(default)]
    pub f_tol: Option<f64>,
    /// Fixed-point detection threshold on the step length.
    #[serde(default = "default_step_tol")]
    pub step_tol: f64,
}

fn default_step_tol() -> f64 {
    1e-10
}

impl Default for StopRule {
    fn default() -> Self {
        Self { max_iter: 1000, f_tol: None, step_tol: default_step_tol() }
    }
}

impl StopRule {
    pub fn max_iter(max_iter: usize) -> Self {
        Self { max_iter, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iter < 1 {
            return Err(Error::InvalidArgument("max_iter must be >= 1".into()));
        }
        if self.step_tol < 0.0 || self.f_tol.map_or(false, |t| t < 0.0) {
            return Err(Error::InvalidArgument("tolerances must be >= 0".into()));
        }
        Ok(())
    }
}
