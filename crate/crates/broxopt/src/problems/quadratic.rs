use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

use super::MinimizerSet;

/// `f(x) = ½ xᵀAx + bᵀx + c₀` with symmetric `A`. The eigendecomposition is
/// computed once at construction and shared by the oracles.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    a: DMatrix<f64>,
    b: DVector<f64>,
    c0: f64,
    eigvals: DVector<f64>,
    eigvecs: DMatrix<f64>,
}

impl QuadraticProblem {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, c0: f64) -> Result<Self> {
        let d = a.nrows();
        if a.ncols() != d || b.len() != d || d == 0 {
            return Err(Error::InvalidProblem("matrix/vector shape mismatch".into()));
        }
        let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        for i in 0..d {
            for j in 0..i {
                if (a[(i, j)] - a[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidProblem(format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let sym = (&a + a.transpose()) * 0.5;
        let eig = sym.clone().symmetric_eigen();
        Ok(Self { a: sym, b, c0, eigvals: eig.eigenvalues, eigvecs: eig.eigenvectors })
    }

    pub fn from_rows(matrix: &[Vec<f64>], linear: &[f64], constant: f64) -> Result<Self> {
        let d = matrix.len();
        if matrix.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidProblem("matrix rows of unequal length".into()));
        }
        let a = DMatrix::from_fn(d, d, |i, j| matrix[i][j]);
        Ok(Self::new(a, DVector::from_column_slice(linear), constant)?)
    }

    /// Scaled identity: `f(x) = (s/2)‖x‖²`.
    pub fn scaled_norm_squared(dim: usize, s: f64) -> Self {
        Self::new(DMatrix::identity(dim, dim) * s, DVector::zeros(dim), 0.0).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn linear(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn constant(&self) -> f64 {
        self.c0
    }

    pub fn eigvals(&self) -> &DVector<f64> {
        &self.eigvals
    }

    pub fn eigvecs(&self) -> &DMatrix<f64> {
        &self.eigvecs
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let x = DVector::from_column_slice(x);
        0.5 * (&self.a * &x).dot(&x) + self.b.dot(&x) + self.c0
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        let x = DVector::from_column_slice(x);
        (&self.a * &x + &self.b).as_slice().to_vec()
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigvals.min()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigvals.max()
    }

    pub fn smoothness_l(&self) -> f64 {
        self.eigvals.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_convex(&self) -> bool {
        self.lambda_min() >= -1e-10 * self.smoothness_l().max(1.0)
    }

    /// Optimal value and minimizer set for convex instances: the affine set
    /// `{z : Az = -b}` expressed through the eigenbasis. `None` when the
    /// problem is nonconvex or unbounded below (`b` not in range(A)).
    pub fn minimizer_set(&self) -> Option<(f64, MinimizerSet)> {
        if !self.is_convex() {
            return None;
        }
        let d = self.dim();
        let scale = self.smoothness_l().max(1.0);
        let tol = 1e-10 * scale;
        let bh = self.eigvecs.transpose() * &self.b;
        let mut zh = DVector::zeros(d);
        let mut basis = Vec::new();
        for i in 0..d {
            if self.eigvals[i] > tol {
                zh[i] = -bh[i] / self.eigvals[i];
            } else {
                if bh[i].abs() > 1e-9 * (1.0 + self.b.norm()) {
                    return None; // descent direction with zero curvature
                }
                basis.push(self.eigvecs.column(i).as_slice().to_vec());
            }
        }
        let point = &self.eigvecs * zh;
        let f_star = self.value(point.as_slice());
        let point = point.as_slice().to_vec();
        if basis.is_empty() {
            Some((f_star, MinimizerSet::Points { points: vec![point] }))
        } else {
            Some((f_star, MinimizerSet::Affine { point, basis }))
        }
    }
}
