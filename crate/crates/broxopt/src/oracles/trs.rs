use nalgebra::{DMatrix, DVector};

/// Solution of `min ½sᵀAs + gᵀs  s.t. ‖s‖ ≤ delta` for symmetric `A`.
#[derive(Debug, Clone)]
pub struct TrsSolution {
    /// Global minimizers (two in the degenerate boundary case, one otherwise),
    /// sorted lexicographically.
    pub steps: Vec<DVector<f64>>,
    /// Lagrange multiplier λ ≥ max(0, −λ_min(A)); zero for interior solutions.
    pub lambda: f64,
    /// True when the gradient is orthogonal to the bottom eigenspace and the
    /// boundary solution needed an explicit eigenvector component.
    pub hard_case: bool,
}

/// Solve the ball-constrained quadratic subproblem through the explicit
/// eigendecomposition of `A` and safeguarded bisection on the 1-D secular
/// equation `‖s(λ)‖ = delta` over λ ≥ max(0, −λ_min).
pub fn solve_trs(
    eigvals: &DVector<f64>,
    eigvecs: &DMatrix<f64>,
    g: &DVector<f64>,
    delta: f64,
) -> TrsSolution {
    let d = g.len();
    let gh = eigvecs.transpose() * g;
    let lam_min = eigvals.min();
    let scale = eigvals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let lam_lo = (-lam_min).max(0.0);
    let g_scale = 1.0 + gh.norm();

    // Components (nearly) annihilated at λ = lam_lo.
    let degenerate: Vec<bool> =
        (0..d).map(|i| eigvals[i] + lam_lo <= 1e-12 * scale).collect();
    let g_zero_on_degenerate = (0..d)
        .all(|i| !degenerate[i] || gh[i].abs() <= 1e-9 * g_scale);

    let coords = |lam: f64| -> DVector<f64> {
        DVector::from_fn(d, |i, _| {
            let den = eigvals[i] + lam;
            if degenerate[i] && den.abs() <= 1e-12 * scale && gh[i].abs() <= 1e-9 * g_scale {
                0.0
            } else {
                -gh[i] / den
            }
        })
    };

    // Interior candidate: min-norm stationary point at λ = 0 when A ⪰ 0.
    if lam_lo == 0.0 && g_zero_on_degenerate {
        let s0 = coords(0.0);
        if s0.norm() <= delta {
            return TrsSolution { steps: vec![eigvecs * s0], lambda: 0.0, hard_case: false };
        }
    }

    // Boundary: ‖s(λ)‖ is strictly decreasing in λ on (lam_lo, ∞).
    let norm_at = |lam: f64| coords(lam).norm();
    let limit_norm = if g_zero_on_degenerate { norm_at(lam_lo) } else { f64::INFINITY };

    if limit_norm <= delta && lam_lo > 0.0 {
        // Hard case: pad the interior-limit solution with a bottom
        // eigenvector up to the boundary. Both signs are global minimizers.
        let s_bar = coords(lam_lo);
        let tau = (delta * delta - s_bar.norm_squared()).max(0.0).sqrt();
        let idx = (0..d).position(|i| degenerate[i]).expect("hard case needs a bottom direction");
        let q = eigvecs.column(idx).clone_owned();
        let a = eigvecs * &s_bar + &q * tau;
        let b = eigvecs * &s_bar - &q * tau;
        let mut steps = vec![a, b];
        steps.sort_by(|u, v| u.as_slice().partial_cmp(v.as_slice()).unwrap());
        if tau == 0.0 {
            steps.truncate(1);
        }
        return TrsSolution { steps, lambda: lam_lo, hard_case: true };
    }
    if limit_norm <= delta {
        // λ_lo = 0 with ‖s‖ ≤ delta is the interior case already handled;
        // reaching here means numerical ties — return the boundary-limit point.
        return TrsSolution { steps: vec![eigvecs * coords(0.0)], lambda: 0.0, hard_case: false };
    }

    let mut lo = lam_lo;
    let mut hi = lam_lo + gh.norm() / delta + 1e-12 * scale;
    while norm_at(hi) > delta {
        hi = lam_lo + 2.0 * (hi - lam_lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if norm_at(mid) > delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lam = 0.5 * (lo + hi);
    TrsSolution { steps: vec![eigvecs * coords(lam)], lambda: lam.max(0.0), hard_case: false }
}
