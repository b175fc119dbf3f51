//! Executable counterparts of the convergence guarantees: per-step
//! inequality checks over recorded traces, aggregate rate certificates, and
//! grid-based testing of the ball-convexity assumptions.

mod ball_convexity;
mod reports;
mod verify;

pub use ball_convexity::{
    check_ball_convexity, check_brox_properties, check_weak_ball_convexity,
    BallConvexityReport, BallConvexityViolation, BroxPropertiesReport, PropertyViolation,
};
pub use reports::{TheoremId, TheoremReport, Verdict, ALL_THEOREMS};
pub use verify::{verify_trace, VerifyParams};
