use crate::{Error, Result};

use super::MinimizerSet;

/// A continuous piecewise-linear function on the real line, described by
/// strictly increasing breakpoints, one slope per interval (including the two
/// unbounded end intervals) and the value at the first breakpoint.
#[derive(Debug, Clone)]
pub struct PiecewiseLinear1D {
    breakpoints: Vec<f64>,
    slopes: Vec<f64>,
    anchor_value: f64,
    /// Values at the breakpoints, accumulated once so that evaluation at a
    /// breakpoint returns the accumulated value bit-exactly.
    bp_values: Vec<f64>,
}

impl PiecewiseLinear1D {
    pub fn new(breakpoints: Vec<f64>, slopes: Vec<f64>, anchor_value: f64) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidProblem("need at least one breakpoint".into()));
        }
        if slopes.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidProblem(format!(
                "need {} slopes for {} breakpoints, got {}",
                breakpoints.len() + 1,
                breakpoints.len(),
                slopes.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidProblem("breakpoints must be strictly increasing".into()));
        }
        if breakpoints.iter().chain(slopes.iter()).any(|v| !v.is_finite())
            || !anchor_value.is_finite()
        {
            return Err(Error::InvalidProblem("non-finite parameter".into()));
        }
        let mut bp_values = Vec::with_capacity(breakpoints.len());
        bp_values.push(anchor_value);
        for i in 1..breakpoints.len() {
            let gap = breakpoints[i] - breakpoints[i - 1];
            bp_values.push(bp_values[i - 1] + slopes[i] * gap);
        }
        Ok(Self { breakpoints, slopes, anchor_value, bp_values })
    }

    /// The nonconvex double-well example: breakpoints -1, 0, 1 with
    /// slopes -1, 1, -1, 1 and value 0 at x = -1. Both wells (at ±1) are
    /// global minimizers with value 0.
    pub fn double_well_symmetric() -> Self {
        Self::new(vec![-1.0, 0.0, 1.0], vec![-1.0, 1.0, -1.0, 1.0], 0.0).unwrap()
    }

    /// A two-well function with a unique global minimizer: global minimum -2
    /// at x = 0, a ridge of value 0 at x = 2 and a local (non-global) minimum
    /// of -1 at x = 4; slopes ±1 on the outside.
    pub fn two_well() -> Self {
        Self::new(vec![0.0, 2.0, 4.0], vec![-1.0, 1.0, -0.5, 1.0], -2.0).unwrap()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn anchor_value(&self) -> f64 {
        self.anchor_value
    }

    /// Index of the last breakpoint `<= x`, or `None` when x lies left of all
    /// breakpoints.
    fn segment(&self, x: f64) -> Option<usize> {
        if x < self.breakpoints[0] {
            None
        } else {
            Some(self.breakpoints.partition_point(|&b| b <= x) - 1)
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self.segment(x) {
            None => self.bp_values[0] + self.slopes[0] * (x - self.breakpoints[0]),
            Some(j) => self.bp_values[j] + self.slopes[j + 1] * (x - self.breakpoints[j]),
        }
    }

    /// Slope at `x` with a nonsmooth-point flag. At a breakpoint the
    /// right-hand slope is returned (deterministic subgradient choice) and the
    /// flag is set when left and right slopes differ.
    pub fn slope_at(&self, x: f64) -> (f64, bool) {
        match self.segment(x) {
            None => (self.slopes[0], false),
            Some(j) => {
                let right = self.slopes[j + 1];
                if x == self.breakpoints[j] {
                    (right, self.slopes[j] != right)
                } else {
                    (right, false)
                }
            }
        }
    }

    /// Subgradient interval [lo, hi] at `x`.
    pub fn subgradient_interval(&self, x: f64) -> (f64, f64) {
        match self.segment(x) {
            None => (self.slopes[0], self.slopes[0]),
            Some(j) => {
                let right = self.slopes[j + 1];
                if x == self.breakpoints[j] {
                    let left = self.slopes[j];
                    (left.min(right), left.max(right))
                } else {
                    (right, right)
                }
            }
        }
    }

    /// Bounded below iff the left tail does not descend and the right tail
    /// does not descend (strictly descending tails run to -inf).
    pub fn bounded_below(&self) -> bool {
        self.slopes[0] <= 0.0 && *self.slopes.last().unwrap() >= 0.0
    }

    pub fn is_convex(&self) -> bool {
        self.slopes.windows(2).all(|w| w[0] <= w[1])
    }

    /// Global minimum value and minimizer set, when bounded below.
    /// Minimizers are breakpoints, flat segments between them, and flat tails.
    pub fn global_min(&self) -> Option<(f64, MinimizerSet)> {
        if !self.bounded_below() {
            return None;
        }
        let f_star = self.bp_values.iter().cloned().fold(f64::INFINITY, f64::min);
        let n = self.breakpoints.len();
        let at_min = |i: usize| self.bp_values[i] == f_star;
        let mut intervals: Vec<(f64, f64)> = Vec::new();
        if self.slopes[0] == 0.0 && at_min(0) {
            intervals.push((f64::NEG_INFINITY, self.breakpoints[0]));
        }
        for i in 0..n {
            if at_min(i) {
                intervals.push((self.breakpoints[i], self.breakpoints[i]));
            }
            if i + 1 < n && self.slopes[i + 1] == 0.0 && at_min(i) {
                intervals.push((self.breakpoints[i], self.breakpoints[i + 1]));
            }
        }
        if *self.slopes.last().unwrap() == 0.0 && at_min(n - 1) {
            intervals.push((self.breakpoints[n - 1], f64::INFINITY));
        }
        // merge touching intervals
        intervals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Some((f_star, MinimizerSet::Intervals { intervals: merged }))
    }
}
