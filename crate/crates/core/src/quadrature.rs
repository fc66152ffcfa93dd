//! One-dimensional rules: Gauss–Legendre nodes and the composite radial rule
//! used for every integral against the radial densities.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess for the i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A rule `∫ g(r) dr ≈ Σ w_i g(r_i)` over some interval of the half line.
#[derive(Debug, Clone, Default)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn apply(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| w * g(r))
            .sum()
    }

    /// Append Gauss–Legendre panels of `n` nodes over `[lo, hi]` split into
    /// pieces no longer than `max_len`.
    pub fn push_panels(&mut self, lo: f64, hi: f64, max_len: f64, n: usize) {
        if hi <= lo {
            return;
        }
        let count = ((hi - lo) / max_len).ceil().max(1.0) as usize;
        let step = (hi - lo) / count as f64;
        let (x, w) = gauss_legendre(n);
        for p in 0..count {
            let a = lo + p as f64 * step;
            let b = if p + 1 == count { hi } else { a + step };
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (xi, wi) in x.iter().zip(&w) {
                self.nodes.push(mid + half * xi);
                self.weights.push(half * wi);
            }
        }
    }
}

/// Shape of the radial rule on `[0, r_max]`.
///
/// `[0, 1]` is mapped by `r = s^beta` and integrated with Gauss–Legendre on
/// geometrically graded panels `[0, 2^-levels], …, [1/4, 1/2], [1/2, 1]` in `s`;
/// `[1, r_max]` is covered by unit-length Gauss–Legendre panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialShape {
    pub beta: f64,
    pub panel_nodes: usize,
    pub levels: usize,
}

impl RadialShape {
    /// The substitution exponent for deformation `mu`: `beta = 1/(2 min(mu, 1/2) + 1)`.
    pub fn for_mu(mu: f64, panel_nodes: usize, levels: usize) -> Self {
        let mu_eff = mu.min(0.5);
        Self {
            beta: 1.0 / (2.0 * mu_eff + 1.0),
            panel_nodes,
            levels,
        }
    }
}

/// Radial rule on `[0, r_max]` in the given shape. Nodes are strictly increasing
/// and never touch `0` or `r_max`.
pub fn radial_rule(shape: RadialShape, r_max: f64) -> Rule1d {
    let mut rule = Rule1d::default();
    let inner_end = r_max.min(1.0);
    let (x, w) = gauss_legendre(shape.panel_nodes);
    let s_end = inner_end.powf(1.0 / shape.beta);
    let mut breaks: Vec<f64> = (0..=shape.levels)
        .rev()
        .map(|j| s_end * 0.5f64.powi(j as i32))
        .collect();
    breaks.insert(0, 0.0);
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (xi, wi) in x.iter().zip(&w) {
            let s = mid + half * xi;
            let r = s.powf(shape.beta);
            let jac = shape.beta * s.powf(shape.beta - 1.0);
            rule.nodes.push(r);
            rule.weights.push(half * wi * jac);
        }
    }
    if r_max > 1.0 {
        rule.push_panels(1.0, r_max, 1.0, shape.panel_nodes);
    }
    rule
}
