use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A strictly convex distance generator `h` and its divergence
/// `D(x, y) = h(x) − h(y) − ⟨∇h(y), x − y⟩`.
#[derive(Clone)]
pub enum BregmanGenerator {
    /// `h(x) = ½ xᵀQx` with symmetric positive definite `Q`; the divergence
    /// is the exact quadratic form `½ (x−y)ᵀQ(x−y)`.
    Quadratic { q: DMatrix<f64>, lambda_min: f64 },
    /// General callables with a certified strict-convexity constant on the
    /// working box.
    Custom { value: ValueFn, grad: GradFn, lambda_min: f64 },
}

impl BregmanGenerator {
    /// `h = ½‖·‖²`, the Euclidean generator.
    pub fn euclidean(dim: usize) -> Self {
        BregmanGenerator::Quadratic { q: DMatrix::identity(dim, dim), lambda_min: 1.0 }
    }

    pub fn quadratic(q: DMatrix<f64>) -> Result<Self> {
        if q.nrows() != q.ncols() || q.nrows() == 0 {
            return Err(Error::InvalidProblem("generator matrix must be square".into()));
        }
        let sym = (&q + q.transpose()) * 0.5;
        let lambda_min = sym.clone().symmetric_eigen().eigenvalues.min();
        if lambda_min <= 0.0 {
            return Err(Error::InvalidProblem(
                "generator matrix must be positive definite".into(),
            ));
        }
        Ok(BregmanGenerator::Quadratic { q: sym, lambda_min })
    }

    pub fn custom(
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        lambda_min: f64,
    ) -> Result<Self> {
        if lambda_min <= 0.0 {
            return Err(Error::InvalidProblem(
                "strict-convexity witness must be positive".into(),
            ));
        }
        Ok(BregmanGenerator::Custom {
            value: Arc::new(value),
            grad: Arc::new(grad),
            lambda_min,
        })
    }

    pub fn lambda_min(&self) -> f64 {
        match self {
            BregmanGenerator::Quadratic { lambda_min, .. } => *lambda_min,
            BregmanGenerator::Custom { lambda_min, .. } => *lambda_min,
        }
    }

    pub fn as_quadratic(&self) -> Option<&DMatrix<f64>> {
        match self {
            BregmanGenerator::Quadratic { q, .. } => Some(q),
            BregmanGenerator::Custom { .. } => None,
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            BregmanGenerator::Quadratic { q, .. } => {
                let x = DVector::from_column_slice(x);
                0.5 * (q * &x).dot(&x)
            }
            BregmanGenerator::Custom { value, .. } => value(x),
        }
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        match self {
            BregmanGenerator::Quadratic { q, .. } => {
                let x = DVector::from_column_slice(x);
                (q * &x).as_slice().to_vec()
            }
            BregmanGenerator::Custom { grad, .. } => grad(x),
        }
    }

    pub fn divergence(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            BregmanGenerator::Quadratic { q, .. } => {
                let d = DVector::from_iterator(x.len(), x.iter().zip(y).map(|(a, b)| a - b));
                0.5 * (q * &d).dot(&d)
            }
            BregmanGenerator::Custom { value, grad, .. } => {
                let gy = grad(y);
                let inner: f64 = gy.iter().zip(x.iter().zip(y)).map(|(g, (a, b))| g * (a - b)).sum();
                value(x) - value(y) - inner
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn euclidean_divergence_is_half_squared_distance() {
        let h = BregmanGenerator::euclidean(1);
        assert_eq!(h.divergence(&[3.0], &[1.0]), 2.0);
        assert_eq!(h.divergence(&[3.0], &[3.0]), 0.0);
    }

    #[test]
    fn elliptic_divergence() {
        let h = BregmanGenerator::quadratic(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]))
            .unwrap();
        // D((1,1),(0,0)) = ½(2·1 + 1·1) = 1.5
        assert_relative_eq!(h.divergence(&[1.0, 1.0], &[0.0, 0.0]), 1.5);
        assert_eq!(h.lambda_min(), 1.0);
    }

    #[test]
    fn custom_matches_quadratic() {
        let h = BregmanGenerator::custom(
            |x| x[0] * x[0] + 0.5 * x[1] * x[1],
            |x| vec![2.0 * x[0], x[1]],
            1.0,
        )
        .unwrap();
        let hq = BregmanGenerator::quadratic(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]))
            .unwrap();
        for (x, y) in [([1.0, 2.0], [0.5, -0.25]), ([-3.0, 0.1], [0.0, 0.0])] {
            assert_relative_eq!(h.divergence(&x, &y), hq.divergence(&x, &y), epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_indefinite_generator() {
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(BregmanGenerator::quadratic(q).is_err());
    }
}
