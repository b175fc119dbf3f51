//! Ball-proximal optimization toolkit.
//!
//! The central object is the *broximal operator*: the set of minimizers of an
//! objective over a closed Euclidean ball of radius `t` around a point `x`.
//! On top of that oracle the crate provides:
//!
//! - [`problems`]: objective representations (piecewise-linear 1-D, quadratic,
//!   black-box smooth, finite sums) with optional minimizer-set metadata.
//! - [`oracles`]: exact broximal oracles for structured classes (candidate
//!   enumeration, trust-region subproblem via the secular equation), a
//!   certified multi-start oracle for black boxes, plus proximal, p-th order
//!   proximal and Bregman-ball oracles.
//! - [`methods`]: iteration engines (ball-proximal point iterations, normalized
//!   gradient descent, an accelerated variant, p-th order steps, a stochastic
//!   finite-sum variant, Bregman-ball steps and a plain proximal-point
//!   baseline), all producing replayable [`methods::IterateTrace`]s.
//! - [`envelope`]: the ball envelope `N(x) = min_{‖z−x‖≤t} f(z)`, its gradient,
//!   and normalized gradient descent on it.
//! - [`theory`]: executable convergence checks — per-step inequalities and
//!   rate certificates evaluated on recorded traces, and ball-convexity
//!   testing on grids.
//! - [`experiments`]: desk-scale experiment drivers (radius sweeps on two-well
//!   functions, escape-threshold bisection, the six-hump-camel success-rate
//!   study).

pub mod envelope;
pub mod experiments;
pub mod methods;
pub mod oracles;
pub mod problems;
pub mod theory;

mod error;
mod util;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
