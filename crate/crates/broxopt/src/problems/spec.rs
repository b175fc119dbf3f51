use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::{
    BlackBoxSmooth, BregmanGenerator, FiniteSumProblem, PiecewiseLinear1D, Problem,
    ProblemMetadata, QuadraticProblem,
};

/// JSON description of a problem. See `docs/problem_schema.md` for the exact
/// field names; numbers are IEEE-754 doubles in full precision.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProblemSpec {
    Pwl1d {
        breakpoints: Vec<f64>,
        slopes: Vec<f64>,
        anchor_value: f64,
    },
    Quadratic {
        matrix: Vec<Vec<f64>>,
        linear: Vec<f64>,
        constant: f64,
    },
    Camel,
    FiniteSum {
        clients: Vec<ProblemSpec>,
    },
}

impl ProblemSpec {
    pub fn build(&self) -> Result<Problem> {
        Ok(match self {
            ProblemSpec::Pwl1d { breakpoints, slopes, anchor_value } => {
                PiecewiseLinear1D::new(breakpoints.clone(), slopes.clone(), *anchor_value)?.into()
            }
            ProblemSpec::Quadratic { matrix, linear, constant } => {
                QuadraticProblem::from_rows(matrix, linear, *constant)?.into()
            }
            ProblemSpec::Camel => BlackBoxSmooth::six_hump_camel().into(),
            ProblemSpec::FiniteSum { clients } => {
                let clients: Result<Vec<Problem>> = clients.iter().map(|c| c.build()).collect();
                FiniteSumProblem::new(clients?)?.into()
            }
        })
    }
}

/// Quadratic Bregman generator in JSON form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BregmanSpec {
    pub matrix: Vec<Vec<f64>>,
}

impl BregmanSpec {
    pub fn build(&self) -> Result<BregmanGenerator> {
        let d = self.matrix.len();
        if self.matrix.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidProblem("generator rows of unequal length".into()));
        }
        BregmanGenerator::quadratic(DMatrix::from_fn(d, d, |i, j| self.matrix[i][j]))
    }
}

/// A problem file: the spec itself plus optional metadata overrides and an
/// optional Bregman generator (used by divergence-ball verification).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(flatten)]
    pub spec: ProblemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<ProblemMetadata>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bregman: Option<BregmanSpec>,
}

impl ProblemFile {
    pub fn build(&self) -> Result<(Problem, Option<BregmanGenerator>)> {
        let mut problem = self.spec.build()?;
        if let Some(meta) = &self.metadata {
            problem = problem.with_metadata(meta.clone())?;
        }
        let h = match &self.bregman {
            Some(b) => Some(b.build()?),
            None => None,
        };
        Ok((problem, h))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_pwl() {
        let text = r#"{"type":"pwl1d","breakpoints":[-1.0,0.0,1.0],"slopes":[-1.0,1.0,-1.0,1.0],"anchor_value":0.0}"#;
        let file = ProblemFile::from_json(text).unwrap();
        let (p, h) = file.build().unwrap();
        assert!(h.is_none());
        assert_eq!(p.eval(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn finite_sum_nesting() {
        let text = r#"{"type":"finite_sum","clients":[
            {"type":"quadratic","matrix":[[2.0,0.0],[0.0,0.0]],"linear":[0.0,0.0],"constant":0.0},
            {"type":"quadratic","matrix":[[0.0,0.0],[0.0,2.0]],"linear":[0.0,0.0],"constant":0.0}
        ]}"#;
        let (p, _) = ProblemFile::from_json(text).unwrap().build().unwrap();
        assert_eq!(p.eval(&[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(p.is_convex(), Some(true));
    }

    #[test]
    fn camel_with_bregman() {
        let text = r#"{"type":"camel","bregman":{"matrix":[[2.0,0.0],[0.0,1.0]]}}"#;
        let (p, h) = ProblemFile::from_json(text).unwrap().build().unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(h.unwrap().lambda_min(), 1.0);
    }

    #[test]
    fn bad_spec_is_an_error() {
        let text = r#"{"type":"pwl1d","breakpoints":[1.0,0.0],"slopes":[0.0,0.0,0.0],"anchor_value":0.0}"#;
        assert!(ProblemFile::from_json(text).unwrap().build().is_err());
    }
}
