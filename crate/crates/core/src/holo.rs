//! Holomorphic functions as finite Taylor coefficient sequences, and the
//! deformed creation/annihilation operators acting on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{Parity, QuadGrid};
use crate::special_fn::{check_mu, gamma_step, DeformedFactorials, MuParams};

/// Default truncation degree for materialized series.
pub const DEFAULT_DEGREE: usize = 64;

/// `Σ a_k z^k`, coefficient first. `tail_sq` is an upper bound on the squared
/// coefficient norm dropped by truncation (zero for genuine polynomials).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoloFn {
    coeffs: Vec<Complex64>,
    #[serde(default)]
    tail_sq: f64,
}

impl HoloFn {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if let Some(k) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Domain(format!("coefficient a_{k} is not finite")));
        }
        Ok(Self { coeffs, tail_sq: 0.0 })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0)],
            tail_sq: 0.0,
        }
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self { coeffs, tail_sq: 0.0 }
    }

    /// Orthonormal basis element `Ψ_n(z) = z^n / γ_μ(n)^{1/2}`.
    pub fn psi(n: usize, mu: f64) -> Result<Self> {
        let g = DeformedFactorials::new(mu, n)?;
        let mut f = Self::monomial(n);
        f.coeffs[n] /= g.get(n as i64).sqrt();
        Ok(f)
    }

    /// `Σ_j c_j Ψ_{k_j}` for real `c_j`.
    pub fn psi_combination(terms: &[(usize, f64)], mu: f64) -> Result<Self> {
        let top = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let g = DeformedFactorials::new(mu, top)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); top + 1];
        for &(k, c) in terms {
            coeffs[k] += Complex64::new(c / g.get(k as i64).sqrt(), 0.0);
        }
        Self::new(coeffs)
    }

    /// Degree-`N` truncation of `exp_μ(c z)` restricted to `part`, with `N`
    /// the smallest degree whose dropped coefficient norm is below
    /// `rel_tail` times the kept norm (capped at [`DEFAULT_DEGREE`]).
    pub fn exp_trial(c: f64, mu: f64, parity: Parity, rel_tail: f64) -> Result<Self> {
        check_mu(mu)?;
        let cap = 4 * DEFAULT_DEGREE;
        let g = DeformedFactorials::new(mu, cap)?;
        // |a_k|² γ(k) = c^{2k}/γ(k)
        let weights: Vec<f64> = (0..=cap)
            .map(|k| if parity.matches(k) { c.powi(2 * k as i32) / g.get(k as i64) } else { 0.0 })
            .collect();
        let total: f64 = weights.iter().sum();
        let mut kept = 0.0;
        let mut degree = cap;
        for (k, w) in weights.iter().enumerate() {
            kept += w;
            if parity.matches(k) && total - kept <= rel_tail * kept {
                degree = k;
                break;
            }
        }
        let degree = degree.min(DEFAULT_DEGREE);
        let kept: f64 = weights[..=degree].iter().sum();
        let coeffs = (0..=degree)
            .map(|k| {
                if parity.matches(k) {
                    Complex64::new(c.powi(k as i32) / g.get(k as i64), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok(Self {
            coeffs,
            tail_sq: (total - kept).max(0.0),
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Length of the coefficient sequence minus one (trailing zeros included).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Highest index with a nonzero coefficient (0 for the zero function).
    pub fn effective_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0)).unwrap_or(0)
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_sq
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// True when every nonzero coefficient has the given parity.
    pub fn is_parity_pure(&self, parity: Parity) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| parity.matches(k) || *c == Complex64::new(0.0, 0.0))
    }

    /// Parity of a nonzero parity-pure function.
    pub fn pure_parity(&self) -> Option<Parity> {
        if self.is_zero() {
            return None;
        }
        Parity::BOTH.into_iter().find(|&p| self.is_parity_pure(p))
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn part(&self, parity: Parity) -> HoloFn {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if parity.matches(k) { *c } else { Complex64::new(0.0, 0.0) })
            .collect();
        HoloFn { coeffs, tail_sq: 0.0 }
    }

    /// `(f_e, f_o)` with `f = f_e + f_o`.
    pub fn parity_split(&self) -> (HoloFn, HoloFn) {
        (self.part(Parity::Even), self.part(Parity::Odd))
    }

    /// `Jf(z) = f(-z)`.
    pub fn apply_parity(&self) -> HoloFn {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { *c } else { -c })
            .collect();
        HoloFn {
            coeffs,
            tail_sq: self.tail_sq,
        }
    }

    /// `T_λ f(z) = f(λ^{1/2} z)`.
    pub fn dilate(&self, lambda: f64) -> Result<HoloFn> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Domain(format!("dilation needs lambda > 0, got {lambda}")));
        }
        let s = lambda.sqrt();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * s.powi(k as i32))
            .collect();
        Ok(HoloFn { coeffs, tail_sq: 0.0 })
    }

    pub fn scale(&self, c: Complex64) -> HoloFn {
        HoloFn {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            tail_sq: self.tail_sq * c.norm_sqr(),
        }
    }

    pub fn add(&self, other: &HoloFn) -> HoloFn {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        HoloFn {
            coeffs,
            tail_sq: 0.0,
        }
    }

    pub fn sub(&self, other: &HoloFn) -> HoloFn {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Dunkl operator `D_μ` (the annihilation operator `A_μ`):
    /// `b_{k-1} = a_k (k + 2μ χ_o(k))`.
    pub fn dunkl_apply(&self, mu: f64) -> Result<HoloFn> {
        check_mu(mu)?;
        if self.coeffs.len() <= 1 {
            return Ok(HoloFn::zero());
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| self.coeffs[k] * gamma_step(k, mu))
            .collect();
        Ok(HoloFn { coeffs, tail_sq: 0.0 })
    }

    /// Multiplication by `z` (the creation operator `A*_μ`).
    pub fn mult_apply(&self) -> HoloFn {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        HoloFn { coeffs, tail_sq: 0.0 }
    }

    /// Coefficients as `[re, im]` pairs.
    pub fn to_json(&self) -> Result<String> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        Ok(serde_json::to_string(&pairs)?)
    }

    pub fn from_json(text: &str) -> Result<HoloFn> {
        let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
        HoloFn::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

/// `⟨f, g⟩ = Σ conj(a_k) b_k γ_μ(k)`, anti-linear in `f`.
pub fn inner_product_coeff(f: &HoloFn, g: &HoloFn, mu: f64) -> Result<Complex64> {
    let n = f.coeffs.len().min(g.coeffs.len());
    let gamma = DeformedFactorials::new(mu, n)?;
    Ok((0..n)
        .map(|k| f.coeffs[k].conj() * g.coeffs[k] * gamma.get(k as i64))
        .sum())
}

/// `Σ |a_k|² γ_μ(k)`.
pub fn norm_sq_coeff(f: &HoloFn, mu: f64) -> Result<f64> {
    let gamma = DeformedFactorials::new(mu, f.degree())?;
    Ok(f
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm_sqr() * gamma.get(k as i64))
        .sum())
}

/// `∫|f_e|² dν_e + ∫|f_o|² dν_o` on a calibrated grid.
pub fn norm_sq_quad(f: &HoloFn, params: &MuParams, grid: &QuadGrid) -> Result<f64> {
    if f.effective_degree() > grid.degree() {
        return Err(Error::numeric(
            format!(
                "grid calibrated to degree {} cannot integrate a degree-{} function",
                grid.degree(),
                f.effective_degree()
            ),
            f64::NAN,
        ));
    }
    let (even, odd) = f.parity_split();
    let e = grid.integrate_real(|z| even.evaluate(z).norm_sqr(), Parity::Even, params)?;
    let o = grid.integrate_real(|z| odd.evaluate(z).norm_sqr(), Parity::Odd, params)?;
    Ok(e + o)
}

/// Coefficient norm of `(A A* − A* A − I − 2μJ) f`; zero up to rounding.
pub fn commutator_residual(f: &HoloFn, mu: f64) -> Result<f64> {
    let a_astar = f.mult_apply().dunkl_apply(mu)?;
    let astar_a = f.dunkl_apply(mu)?.mult_apply();
    let rhs = f.add(&f.apply_parity().scale(Complex64::new(2.0 * mu, 0.0)));
    let diff = a_astar.sub(&astar_a).sub(&rhs);
    Ok(norm_sq_coeff(&diff, mu)?.sqrt())
}
