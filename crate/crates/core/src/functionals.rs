//! Entropies and energies of holomorphic functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holo::{inner_product_coeff, norm_sq_coeff, HoloFn};
use crate::measures::{moment_oracle_dilated, Parity, QuadGrid};
use crate::special_fn::{check_mu, gamma_step, DeformedFactorials, MuParams};

/// Norms below this are treated as the zero function.
pub const DEGENERATE_NORM: f64 = 1e-14;
const TINY_DENSITY: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyRoute {
    Quadrature,
    Coefficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirichletRoute {
    Direct,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub even_part: f64,
    pub odd_part: f64,
    pub total: f64,
    pub route: EnergyRoute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyBreakdown {
    pub even_part: f64,
    pub odd_part: f64,
    pub total: f64,
}

fn unweighted(params: &MuParams) -> MuParams {
    params.with_a(0.0).expect("a = 0 is always valid")
}

fn check_degree(f: &HoloFn, grid: &QuadGrid) -> Result<()> {
    if f.effective_degree() > grid.degree() {
        return Err(Error::numeric(
            format!(
                "grid calibrated to degree {} is too coarse for a degree-{} function",
                grid.degree(),
                f.effective_degree()
            ),
            f64::NAN,
        ));
    }
    Ok(())
}

/// `∫|f|² dν_{parity}` on the grid, with the weight carried by `params`.
pub fn norm_sq_on(f: &HoloFn, parity: Parity, params: &MuParams, grid: &QuadGrid) -> Result<f64> {
    check_degree(f, grid)?;
    grid.integrate_real(|z| f.evaluate(z).norm_sqr(), parity, params)
}

/// `∫|f|² log|f|² dν − ‖f‖² log‖f‖²` against `ν_{parity}` (weight from `params`).
pub fn shannon_entropy(f: &HoloFn, parity: Parity, params: &MuParams, grid: &QuadGrid) -> Result<f64> {
    check_degree(f, grid)?;
    let norm_sq = grid.integrate_real(|z| f.evaluate(z).norm_sqr(), parity, params)?;
    if norm_sq.sqrt() < DEGENERATE_NORM {
        return Err(Error::Degenerate("entropy of a function with vanishing norm".into()));
    }
    let first = grid.integrate_real(
        |z| {
            let m = f.evaluate(z).norm_sqr();
            if m < TINY_DENSITY {
                0.0
            } else {
                m * m.ln()
            }
        },
        parity,
        params,
    )?;
    Ok(first - norm_sq * norm_sq.ln())
}

/// `S_μ(f) = S_{L²(ν_e)}(f_e) + S_{L²(ν_o)}(f_o)`; a vanishing part contributes 0.
pub fn mu_entropy(f: &HoloFn, params: &MuParams, grid: &QuadGrid) -> Result<EntropyBreakdown> {
    let params = unweighted(params);
    let (even, odd) = f.parity_split();
    let part = |g: &HoloFn, parity: Parity| -> Result<Option<f64>> {
        match shannon_entropy(g, parity, &params, grid) {
            Ok(s) => Ok(Some(s)),
            Err(Error::Degenerate(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let e = part(&even, Parity::Even)?;
    let o = part(&odd, Parity::Odd)?;
    if e.is_none() && o.is_none() {
        return Err(Error::Degenerate("both parity parts vanish".into()));
    }
    let (even_part, odd_part) = (e.unwrap_or(0.0), o.unwrap_or(0.0));
    Ok(EntropyBreakdown {
        even_part,
        odd_part,
        total: even_part + odd_part,
    })
}

/// Coefficient route of `∫λ|z|²|f|² dν_{parity,λ}` for a function of that parity.
fn energy_coefficient(f: &HoloFn, parity: Parity, mu: f64, lambda: f64) -> Result<f64> {
    let mut sum = 0.0;
    for (k, a) in f.coeffs().iter().enumerate() {
        if parity.matches(k) && *a != Complex64::new(0.0, 0.0) {
            sum += a.norm_sqr() * lambda * moment_oracle_dilated(parity, k + 1, mu, lambda)?;
        }
    }
    Ok(sum)
}

/// μ-deformed energy `E_{μ,λ}(f) = ∫λ|z|²|f_e|²dν_e + ∫λ|z|²|f_o|²dν_o`.
///
/// Energies are always taken against the unweighted measures. The quadrature
/// route is cross-checked against the coefficient route.
pub fn mu_energy(f: &HoloFn, params: &MuParams, grid: &QuadGrid, route: EnergyRoute) -> Result<EnergyBreakdown> {
    let (mu, lambda) = (params.mu(), params.lambda());
    let even_c = energy_coefficient(f, Parity::Even, mu, lambda)?;
    let odd_c = energy_coefficient(f, Parity::Odd, mu, lambda)?;
    let (even_part, odd_part) = match route {
        EnergyRoute::Coefficient => (even_c, odd_c),
        EnergyRoute::Quadrature => {
            check_degree(f, grid)?;
            let params = unweighted(params);
            let (fe, fo) = f.parity_split();
            let e = grid.integrate_real(|z| lambda * z.norm_sqr() * fe.evaluate(z).norm_sqr(), Parity::Even, &params)?;
            let o = grid.integrate_real(|z| lambda * z.norm_sqr() * fo.evaluate(z).norm_sqr(), Parity::Odd, &params)?;
            let gap = (e + o - even_c - odd_c).abs();
            let allowed = 10.0 * grid.tol() * (1.0 + even_c + odd_c);
            if gap > allowed {
                return Err(Error::numeric(
                    "quadrature and coefficient energies disagree; the grid is too coarse",
                    gap,
                ));
            }
            (e, o)
        }
    };
    Ok(EnergyBreakdown {
        even_part,
        odd_part,
        total: even_part + odd_part,
        route,
    })
}

/// Energy of a parity-pure function against the opposite parity's measure:
/// `∫λ|z|²|f|² dν_{opposite,λ}`. Coefficient route: `Σ|a_k|² λ^{-k} γ_μ(k+1)`.
pub fn mixed_energy(
    f: &HoloFn,
    source_parity: Parity,
    params: &MuParams,
    grid: &QuadGrid,
    route: EnergyRoute,
) -> Result<f64> {
    if !f.is_parity_pure(source_parity) {
        return Err(Error::Precondition(format!(
            "mixed energy needs a purely {source_parity} function"
        )));
    }
    let (mu, lambda) = (params.mu(), params.lambda());
    match route {
        EnergyRoute::Coefficient => {
            let gamma = DeformedFactorials::new(mu, f.degree() + 1)?;
            Ok(f.coeffs()
                .iter()
                .enumerate()
                .map(|(k, a)| a.norm_sqr() * lambda.powi(-(k as i32)) * gamma.get(k as i64 + 1))
                .sum())
        }
        EnergyRoute::Quadrature => {
            check_degree(f, grid)?;
            grid.integrate_real(
                |z| lambda * z.norm_sqr() * f.evaluate(z).norm_sqr(),
                source_parity.opposite(),
                &unweighted(params),
            )
        }
    }
}

/// Dirichlet energy `‖D_μ f‖²`.
///
/// Direct: `Σ|a_k|²(k+2μχ_o(k))²γ_μ(k-1)`. Identity: `‖A*f‖² − ‖f‖² − 2μ⟨f, Jf⟩`.
pub fn dirichlet_energy(f: &HoloFn, mu: f64, route: DirichletRoute) -> Result<f64> {
    check_mu(mu)?;
    match route {
        DirichletRoute::Direct => {
            let gamma = DeformedFactorials::new(mu, f.degree())?;
            Ok(f.coeffs()
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    let step = gamma_step(k, mu);
                    a.norm_sqr() * step * step * gamma.get(k as i64 - 1)
                })
                .sum())
        }
        DirichletRoute::Identity => {
            let raised = norm_sq_coeff(&f.mult_apply(), mu)?;
            let plain = norm_sq_coeff(f, mu)?;
            let reflected = inner_product_coeff(f, &f.apply_parity(), mu)?;
            Ok(raised - plain - 2.0 * mu * reflected.re)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::make_grid;

    #[test]
    fn dirichlet_basis_values() {
        for &mu in &[-0.3, 0.0, 0.5, 2.5] {
            let psi1 = HoloFn::psi(1, mu).unwrap();
            for route in [DirichletRoute::Direct, DirichletRoute::Identity] {
                let v = dirichlet_energy(&psi1, mu, route).unwrap();
                assert!((v - (1.0 + 2.0 * mu)).abs() < 1e-13, "mu {mu} {route:?}: {v}");
                assert!(dirichlet_energy(&HoloFn::psi(0, mu).unwrap(), mu, route).unwrap().abs() < 1e-15);
            }
        }
    }

    #[test]
    fn energy_and_entropy_basics() {
        let params = MuParams::standard(0.0).unwrap();
        let grid = make_grid(&params, 8, 1e-10).unwrap();
        for n in 0..=8 {
            let e = mu_energy(&HoloFn::psi(n, 0.0).unwrap(), &params, &grid, EnergyRoute::Quadrature).unwrap();
            assert!((e.total - (n as f64 + 1.0)).abs() < 1e-9);
        }
        let zero = mu_energy(&HoloFn::zero(), &params, &grid, EnergyRoute::Coefficient).unwrap();
        assert_eq!(zero.total, 0.0);
        let one = HoloFn::from_real(&[1.0]).unwrap();
        assert!(shannon_entropy(&one, Parity::Even, &params, &grid).unwrap().abs() < 1e-10);
        assert!(shannon_entropy(&HoloFn::zero(), Parity::Even, &params, &grid).is_err());
        let s = mu_entropy(&one, &params, &grid).unwrap();
        assert_eq!(s.odd_part, 0.0);
        assert!(mu_entropy(&HoloFn::zero(), &params, &grid).is_err());
    }

    #[test]
    fn mixed_energy_needs_pure_input() {
        let params = MuParams::standard(1.0).unwrap();
        let grid = make_grid(&params, 4, 1e-10).unwrap();
        let f = HoloFn::from_real(&[1.0, 1.0]).unwrap();
        assert!(mixed_energy(&f, Parity::Even, &params, &grid, EnergyRoute::Coefficient).is_err());
        let psi0 = HoloFn::psi(0, 1.0).unwrap();
        for route in [EnergyRoute::Coefficient, EnergyRoute::Quadrature] {
            let v = mixed_energy(&psi0, Parity::Even, &params, &grid, route).unwrap();
            assert!((v - 3.0).abs() < 1e-9);
        }
    }
}
