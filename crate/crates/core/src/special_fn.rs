//! Scalar special functions: Euler log-Gamma, the Macdonald function `K_α`,
//! the deformed factorial `γ_μ` and the deformed exponential `exp_μ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Deformation / dilation / weight context every computation is relative to.
///
/// `mu` is the deformation parameter (`mu > -1/2`), `lambda` the dilation
/// (`lambda > 0`) and `a` the exponent of the Gaussian weight `e^{-a|z|^2}`.
/// `a` is an independent parameter, never an alias for `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuParams {
    mu: f64,
    lambda: f64,
    a: f64,
}

impl MuParams {
    pub fn new(mu: f64, lambda: f64, a: f64) -> Result<Self> {
        check_mu(mu)?;
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
        }
        if !a.is_finite() {
            return Err(Error::Domain(format!("weight exponent a must be finite, got {a}")));
        }
        Ok(Self { mu, lambda, a })
    }

    /// `lambda = 1`, `a = 0`.
    pub fn standard(mu: f64) -> Result<Self> {
        Self::new(mu, 1.0, 0.0)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn with_a(self, a: f64) -> Result<Self> {
        Self::new(self.mu, self.lambda, a)
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self::new(self.mu, lambda, self.a)
    }
}

pub(crate) fn check_mu(mu: f64) -> Result<()> {
    if mu.is_finite() && mu > -0.5 {
        Ok(())
    } else {
        Err(Error::Domain(format!("mu must be > -1/2, got {mu}")))
    }
}

/// Characteristic function of the odd integers.
#[inline]
pub fn chi_odd(k: usize) -> f64 {
    (k & 1) as f64
}

/// One step of the deformed factorial recursion: `k + 2 mu chi_o(k)`.
#[inline]
pub fn gamma_step(k: usize, mu: f64) -> f64 {
    k as f64 + 2.0 * mu * chi_odd(k)
}

/// Deformed factorial `γ_μ(k)`: `γ_μ(0) = 1`, `γ_μ(k) = (k + 2μ χ_o(k)) γ_μ(k-1)`.
pub fn gamma_mu(k: usize, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok((1..=k).fold(1.0, |acc, j| acc * gamma_step(j, mu)))
}

/// Table of `γ_μ(0..=n)`, with the convention `γ_μ(-1) = 0`.
#[derive(Debug, Clone)]
pub struct DeformedFactorials {
    mu: f64,
    values: Vec<f64>,
}

impl DeformedFactorials {
    pub fn new(mu: f64, n: usize) -> Result<Self> {
        check_mu(mu)?;
        let mut values = Vec::with_capacity(n + 1);
        values.push(1.0);
        for k in 1..=n {
            values.push(values[k - 1] * gamma_step(k, mu));
        }
        Ok(Self { mu, values })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// `γ_μ(k)`; `k = -1` yields 0. Indices beyond the table extend it on the fly.
    pub fn get(&self, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        let k = k as usize;
        if k < self.values.len() {
            self.values[k]
        } else {
            let last = self.values.len() - 1;
            ((last + 1)..=k).fold(self.values[last], |acc, j| acc * gamma_step(j, self.mu))
        }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of Euler's Gamma function for `x > 0` (Lanczos, g = 7).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("log_gamma needs x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Euler Gamma for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    log_gamma(x).map(f64::exp)
}

/// Above this argument `K_α` is evaluated from its large-x asymptotic series.
pub const MACDONALD_CROSSOVER: f64 = 30.0;

/// Macdonald function (modified Bessel function of the third kind) `K_α(x)`, `x > 0`.
pub fn macdonald_k(alpha: f64, x: f64) -> Result<f64> {
    Ok(macdonald_k_scaled(alpha, x)? * (-x).exp())
}

/// Exponentially scaled Macdonald function `e^x K_α(x)`.
///
/// For `x <= 30` this is the trapezoid rule on
/// `∫_0^∞ exp(-2x sinh²(u/2)) cosh(αu) du`, whose integrand already decays
/// double exponentially, refined by step halving until successive levels
/// agree to 1e-15. Beyond the crossover the Hankel asymptotic series is summed
/// to its smallest term (at least four terms).
pub fn macdonald_k_scaled(alpha: f64, x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("macdonald_k needs x > 0, got {x}")));
    }
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("macdonald_k needs finite order, got {alpha}")));
    }
    let alpha = alpha.abs();
    if x > MACDONALD_CROSSOVER {
        Ok(macdonald_asymptotic_scaled(alpha, x))
    } else {
        macdonald_integral_scaled(alpha, x)
    }
}

fn ln_cosh(t: f64) -> f64 {
    let t = t.abs();
    t + (0.5 * (1.0 + (-2.0 * t).exp())).ln()
}

fn macdonald_integral_scaled(alpha: f64, x: f64) -> Result<f64> {
    let log_term = |u: f64| {
        let s = (0.5 * u).sinh();
        -2.0 * x * s * s + ln_cosh(alpha * u)
    };
    // location of the integrand's maximum
    let peak = (alpha / x).asinh();

    // Sum g(u0 + j*step) for j = 0, 1, ... until past the peak and negligible.
    let tail_sum = |start: f64, step: f64| -> f64 {
        let mut sum = 0.0;
        let mut j = 0usize;
        loop {
            let u = start + j as f64 * step;
            let term = log_term(u).exp();
            sum += term;
            if u > peak && term <= 1e-18 * sum {
                break;
            }
            if j > 2_000_000 {
                break;
            }
            j += 1;
        }
        sum
    };

    let mut h = 0.5;
    // trapezoid with nodes k*h, k >= 0, half weight at u = 0
    let mut node_sum = 0.5 * log_term(0.0).exp() + tail_sum(h, h);
    let mut estimate = h * node_sum;
    for _ in 0..10 {
        let mids = tail_sum(0.5 * h, h);
        node_sum += mids;
        h *= 0.5;
        let refined = h * node_sum;
        let gap = (refined - estimate).abs();
        estimate = refined;
        if gap <= 1e-15 * refined.abs() {
            return Ok(estimate);
        }
    }
    Err(Error::numeric(
        format!("K_{alpha}({x}) trapezoid did not converge"),
        0.0,
    ))
}

fn macdonald_asymptotic_scaled(alpha: f64, x: f64) -> f64 {
    let four_alpha_sq = 4.0 * alpha * alpha;
    let mut term = 1.0;
    let mut sum: f64 = 1.0;
    let mut prev_mag = f64::INFINITY;
    for k in 1..=60usize {
        let odd = (2 * k - 1) as f64;
        let next = term * (four_alpha_sq - odd * odd) / (k as f64 * 8.0 * x);
        let mag = next.abs();
        if k > 4 && (mag >= prev_mag || mag <= 1e-17 * sum.abs()) {
            break;
        }
        sum += next;
        term = next;
        prev_mag = mag;
        if next == 0.0 {
            break;
        }
    }
    (PI / (2.0 * x)).sqrt() * sum
}

/// Which Taylor terms of `exp_μ` to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesPart {
    Full,
    Even,
    Odd,
}

impl SeriesPart {
    #[inline]
    pub fn keeps(self, k: usize) -> bool {
        match self {
            SeriesPart::Full => true,
            SeriesPart::Even => k % 2 == 0,
            SeriesPart::Odd => k % 2 == 1,
        }
    }
}

/// Hard cap on the number of `exp_μ` series terms.
pub const EXP_MU_MAX_TERMS: usize = 400;

/// Deformed exponential `exp_μ(z) = Σ z^k / γ_μ(k)`, restricted to a parity class.
///
/// Terms are generated by the ratio `z / (k + 2μχ_o(k))`. Summation stops once
/// the current term is below `1e-17` of the partial sum (or of the rounding
/// floor set by the largest term, when the sum suffers cancellation). Running
/// into the term cap is an error.
pub fn exp_mu(z: Complex64, mu: f64, part: SeriesPart) -> Result<Complex64> {
    check_mu(mu)?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("exp_mu needs finite z, got {z}")));
    }
    let radius = z.norm();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut largest = 1.0f64;
    for k in 0..EXP_MU_MAX_TERMS {
        if k > 0 {
            term = term * z / gamma_step(k, mu);
        }
        let mag = term.norm();
        largest = largest.max(mag);
        if part.keeps(k) {
            sum += term;
        }
        if k > 0 && k as f64 > radius {
            let floor = sum.norm().max(f64::EPSILON * largest);
            if mag <= 1e-17 * floor {
                return Ok(sum);
            }
        }
    }
    Err(Error::numeric(
        format!("exp_mu series for |z| = {radius} hit the {EXP_MU_MAX_TERMS}-term cap"),
        term.norm(),
    ))
}

/// Constant `C_μ` used in `|exp_μ(z)| <= C_μ (1 + |z|^{|μ|}) e^{|z|}`.
///
/// `1` for `μ >= 0`; `1/(1+2μ)` for `-1/2 < μ < 0`. The latter matches the
/// large-|z| limit of the ratio as `μ → 0` and dominates it as `μ → -1/2`;
/// it is checked numerically, not claimed optimal.
pub fn growth_constant(mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(if mu >= 0.0 { 1.0 } else { 1.0 / (1.0 + 2.0 * mu) })
}
