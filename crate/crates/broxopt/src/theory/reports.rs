use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// The named convergence guarantees that can be checked against a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TheoremId {
    /// Once a ball reaches the minimizer set, the next iterate is optimal.
    #[serde(rename = "CONV_LIN_I")]
    ConvLinI,
    /// Full steps and the squared-distance law `d²_{k+1} ≤ d²_k − t²_k`.
    #[serde(rename = "CONV_LIN_II")]
    ConvLinII,
    /// Termination within `⌈d₀²/t²⌉` steps under a constant radius.
    #[serde(rename = "CONV_LIN_III")]
    ConvLinIII,
    /// Per-step contraction `h_{k+1} ≤ (1 + s_k/d_{k+1})⁻¹ h_k`.
    #[serde(rename = "CONV_LIN_IV")]
    ConvLinIV,
    /// Gradient-norm monotonicity and the weighted-sum gradient bound.
    #[serde(rename = "CONV_LIN_V")]
    ConvLinV,
    /// Accumulated linear rate `h_K ≤ Π_k (1 + t_k/d₀)⁻¹ h₀`.
    #[serde(rename = "COR_LIN_RATE")]
    CorLinRate,
    /// Sublinear rate for constant radii.
    #[serde(rename = "SUBLINEAR")]
    Sublinear,
    /// Halved-exponent linear rate under the weak ball-convexity assumption.
    #[serde(rename = "WEAK_LIN")]
    WeakLin,
    /// Stochastic driver: distance monotonicity and the averaged-gap bound.
    #[serde(rename = "SBPM_RATE")]
    SbpmRate,
    /// Accelerated driver rate `h_K ≤ 2Ld₀²/(K(K+1))`.
    #[serde(rename = "ABPM_RATE")]
    AbpmRate,
    /// Empirical order of the p-th power proximal iteration (log-log slope).
    #[serde(rename = "PPMP_RATE")]
    PpmpRate,
    /// Divergence-ball driver rate.
    #[serde(rename = "BREG_RATE")]
    BregRate,
    /// Normalized-gradient neighborhood bound on averaged values.
    #[serde(rename = "NGD_NBHD")]
    NgdNbhd,
    /// Adaptive-radius distance law for normalized gradient steps.
    #[serde(rename = "NGD_ADA")]
    NgdAda,
}

pub const ALL_THEOREMS: [TheoremId; 14] = [
    TheoremId::ConvLinI,
    TheoremId::ConvLinII,
    TheoremId::ConvLinIII,
    TheoremId::ConvLinIV,
    TheoremId::ConvLinV,
    TheoremId::CorLinRate,
    TheoremId::Sublinear,
    TheoremId::WeakLin,
    TheoremId::SbpmRate,
    TheoremId::AbpmRate,
    TheoremId::PpmpRate,
    TheoremId::BregRate,
    TheoremId::NgdNbhd,
    TheoremId::NgdAda,
];

impl TheoremId {
    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::ConvLinI => "CONV_LIN_I",
            TheoremId::ConvLinII => "CONV_LIN_II",
            TheoremId::ConvLinIII => "CONV_LIN_III",
            TheoremId::ConvLinIV => "CONV_LIN_IV",
            TheoremId::ConvLinV => "CONV_LIN_V",
            TheoremId::CorLinRate => "COR_LIN_RATE",
            TheoremId::Sublinear => "SUBLINEAR",
            TheoremId::WeakLin => "WEAK_LIN",
            TheoremId::SbpmRate => "SBPM_RATE",
            TheoremId::AbpmRate => "ABPM_RATE",
            TheoremId::PpmpRate => "PPMP_RATE",
            TheoremId::BregRate => "BREG_RATE",
            TheoremId::NgdNbhd => "NGD_NBHD",
            TheoremId::NgdAda => "NGD_ADA",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        ALL_THEOREMS
            .iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown theorem id {s:?}")))
    }
}

/// Outcome of a theorem check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { first_violation: usize },
    Skipped { reason: String },
}

/// Result of checking one theorem against one trace. A slack is the margin
/// by which the inequality holds at step (or prefix length) `k`; the check
/// passes when every slack is at least `−tolerance_used`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem_id: TheoremId,
    pub per_step_slacks: Vec<(usize, f64)>,
    pub verdict: Verdict,
    pub tolerance_used: f64,
}

impl TheoremReport {
    pub(crate) fn from_slacks(
        theorem_id: TheoremId,
        per_step_slacks: Vec<(usize, f64)>,
        tolerance_used: f64,
    ) -> Self {
        let verdict = match per_step_slacks
            .iter()
            .filter(|(_, s)| *s < -tolerance_used)
            .map(|(k, _)| *k)
            .min()
        {
            Some(first_violation) => Verdict::Fail { first_violation },
            None => Verdict::Pass,
        };
        Self { theorem_id, per_step_slacks, verdict, tolerance_used }
    }

    pub(crate) fn skipped(theorem_id: TheoremId, reason: &str, tolerance_used: f64) -> Self {
        Self {
            theorem_id,
            per_step_slacks: Vec::new(),
            verdict: Verdict::Skipped { reason: reason.to_string() },
            tolerance_used,
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Pass | Verdict::Skipped { .. })
    }
}
