use std::sync::Arc;

type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A smooth objective known only through callables. When no analytic gradient
/// is supplied, central differences with step `h = 1e-6·(1+‖x‖)` are used.
#[derive(Clone)]
pub struct BlackBoxSmooth {
    value_fn: ValueFn,
    grad_fn: Option<GradFn>,
    dimension: usize,
    known_optimum: Option<(Vec<Vec<f64>>, f64)>,
    convex_hint: bool,
}

impl BlackBoxSmooth {
    pub fn new(dimension: usize, value_fn: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            value_fn: Arc::new(value_fn),
            grad_fn: None,
            dimension,
            known_optimum: None,
            convex_hint: false,
        }
    }

    pub fn with_grad(mut self, grad_fn: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.grad_fn = Some(Arc::new(grad_fn));
        self
    }

    /// Attach the known minimizers and optimal value. Panics if the value
    /// disagrees with the callable by more than 1e-9 at any listed point.
    pub fn with_known_optimum(mut self, points: Vec<Vec<f64>>, value: f64) -> Self {
        for p in &points {
            let v = (self.value_fn)(p);
            assert!(
                (v - value).abs() <= 1e-9 * (1.0 + value.abs()),
                "claimed optimum {value} but f({p:?}) = {v}"
            );
        }
        self.known_optimum = Some((points, value));
        self
    }

    /// Declare the function convex (enables prox-type oracles for 1-D cases).
    pub fn with_convex_hint(mut self) -> Self {
        self.convex_hint = true;
        self
    }

    pub fn dim(&self) -> usize {
        self.dimension
    }

    pub fn known_optimum(&self) -> Option<(&[Vec<f64>], f64)> {
        self.known_optimum.as_ref().map(|(p, v)| (p.as_slice(), *v))
    }

    pub fn convex_hint(&self) -> bool {
        self.convex_hint
    }

    pub fn has_analytic_grad(&self) -> bool {
        self.grad_fn.is_some()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.value_fn)(x)
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        if let Some(g) = &self.grad_fn {
            return g(x);
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let h = 1e-6 * (1.0 + norm);
        let mut g = vec![0.0; x.len()];
        let mut xp = x.to_vec();
        for i in 0..x.len() {
            xp[i] = x[i] + h;
            let fp = (self.value_fn)(&xp);
            xp[i] = x[i] - h;
            let fm = (self.value_fn)(&xp);
            xp[i] = x[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        g
    }

    /// The six-hump camel benchmark on ℝ², with analytic gradient and both
    /// global minima attached.
    pub fn six_hump_camel() -> Self {
        Self::new(2, |x| {
            let (a, b) = (x[0], x[1]);
            (4.0 - 2.1 * a.powi(2) + a.powi(4) / 3.0) * a.powi(2)
                + a * b
                + (-4.0 + 4.0 * b.powi(2)) * b.powi(2)
        })
        .with_grad(|x| {
            let (a, b) = (x[0], x[1]);
            vec![
                (8.0 - 8.4 * a.powi(2) + 2.0 * a.powi(4)) * a + b,
                a + (-8.0 + 16.0 * b.powi(2)) * b,
            ]
        })
        .with_known_optimum(
            vec![
                vec![-CAMEL_MIN_X, -CAMEL_MIN_Y],
                vec![CAMEL_MIN_X, CAMEL_MIN_Y],
            ],
            CAMEL_F_STAR,
        )
    }
}

pub const CAMEL_MIN_X: f64 = 0.08984201310031806;
pub const CAMEL_MIN_Y: f64 = -0.7126564030207396;
pub const CAMEL_F_STAR: f64 = -1.0316284534898774;
