//! Reproducing kernels, the kernel integral transforms, Hille–Tamarkin
//! bounds for their operator norms and trial-function lower bounds.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::holo::HoloFn;
use crate::inequality_lab::{IneqReport, Provenance};
use crate::measures::{radial_density, GridConfig, Parity, QuadGrid};
use crate::optim::nelder_mead_max;
use crate::quadrature::{radial_rule, RadialShape, Rule1d};
use crate::special_fn::{check_mu, exp_mu, gamma_step, DeformedFactorials, MuParams, SeriesPart, EXP_MU_MAX_TERMS};

/// `K(z, w) = exp_μ(conj(z) w)`, or its even/odd part.
pub fn kernel_eval(z: Complex64, w: Complex64, part: SeriesPart, mu: f64) -> Result<Complex64> {
    exp_mu(z.conj() * w, mu, part)
}

/// Transform data `(parity, p, q, a, μ)` for `K_par : L^p(ν_par) → L^q(ν_{par,a})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub parity: Parity,
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub mu: f64,
}

impl TransformSpec {
    pub fn new(parity: Parity, p: f64, q: f64, a: f64, mu: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::Domain(format!("p must lie in (1, inf), got {p}")));
        }
        if !(q.is_finite() && q >= 1.0) {
            return Err(Error::Domain(format!("q must lie in [1, inf), got {q}")));
        }
        if !a.is_finite() {
            return Err(Error::Domain(format!("a must be finite, got {a}")));
        }
        check_mu(mu)?;
        Ok(Self { parity, p, q, a, mu })
    }

    /// Conjugate exponent `p' = p/(p-1)`.
    pub fn p_conj(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// `p'q/4 − 1`; the spec is admissible when `a` exceeds it.
    pub fn threshold(&self) -> f64 {
        self.p_conj() * self.q / 4.0 - 1.0
    }

    pub fn admissible(&self) -> bool {
        self.a > self.threshold()
    }

    /// Parameters of the weighted target measure `ν_{par,μ,a}`.
    pub fn target_params(&self) -> Result<MuParams> {
        MuParams::new(self.mu, 1.0, self.a)
    }

    pub fn source_params(&self) -> Result<MuParams> {
        MuParams::standard(self.mu)
    }
}

/// Coefficients `x^k/γ_μ(k)` of `exp_μ(x ·)` restricted to `part`, up to negligible size.
fn kernel_coefficients(x: f64, mu: f64, part: SeriesPart) -> Result<Vec<f64>> {
    let mut coeffs = Vec::new();
    let mut term = 1.0f64;
    let mut largest = 1.0f64;
    for k in 0..EXP_MU_MAX_TERMS {
        if k > 0 {
            term *= x / gamma_step(k, mu);
        }
        largest = largest.max(term);
        coeffs.push(if part.keeps(k) { term } else { 0.0 });
        if k as f64 > x && term <= 1e-17 * largest {
            return Ok(coeffs);
        }
    }
    Err(Error::numeric(
        format!("kernel series at |conj(z) w| = {x} hit the {EXP_MU_MAX_TERMS}-term cap"),
        term / largest,
    ))
}

/// Values of `exp_part(x e^{i(φ − θ_j)})` at `θ_j = 2πj/m`, all at once via one FFT.
fn kernel_on_ring(
    planner: &mut FftPlanner<f64>,
    x: f64,
    phi: f64,
    mu: f64,
    part: SeriesPart,
    m: usize,
) -> Result<Vec<Complex64>> {
    let coeffs = kernel_coefficients(x, mu, part)?;
    let mut buffer = vec![Complex64::new(0.0, 0.0); m];
    for (k, c) in coeffs.iter().enumerate() {
        if *c != 0.0 {
            buffer[k % m] += Complex64::from_polar(*c, k as f64 * phi);
        }
    }
    planner.plan_fft_forward(m).process(&mut buffer);
    Ok(buffer)
}

fn even_count(x: f64) -> usize {
    let n = x.ceil() as usize;
    n + n % 2
}

/// `(K_par f)(w) = ∫ dν_par(z) K_par(z, w) f(z)`, by direct quadrature.
///
/// The grid's radial rule is reused; each ring gets an angular count large
/// enough to resolve the kernel at that radius.
pub fn transform_apply(f: &HoloFn, w: Complex64, parity: Parity, params: &MuParams, grid: &QuadGrid) -> Result<Complex64> {
    let params = params.with_a(0.0)?;
    grid.check_params(&params)?;
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::Domain(format!("transform point must be finite, got {w}")));
    }
    let lambda = params.lambda();
    let (mu, part) = (params.mu(), SeriesPart::from(parity));
    let phi = w.arg();
    let per_ring: Vec<Result<Complex64>> = grid
        .rings()
        .par_iter()
        .map_init(FftPlanner::new, |planner, ring| {
            let x = lambda * ring.r * w.norm();
            let m = even_count(f.degree() as f64 + 1.0 + x + 9.0 * x.sqrt() + 24.0).max(grid.angular_count());
            let kernel = kernel_on_ring(planner, x, phi, mu, part, m)?;
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, k) in kernel.iter().enumerate() {
                let z = Complex64::from_polar(ring.r, 2.0 * PI * j as f64 / m as f64);
                acc += k * f.evaluate(z);
            }
            Ok(acc * (ring.weight * ring.density(parity) / m as f64))
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for v in per_ring {
        total += v?;
    }
    Ok(total)
}

/// `K_par g` as a Taylor series: `c_k = λ^k/γ_μ(k) ∫ conj(z)^k g(z) dν_par(z)`
/// for `k ≤ grid.degree()` of the given parity.
pub fn transform_project<F>(g: F, parity: Parity, params: &MuParams, grid: &QuadGrid) -> Result<HoloFn>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let params = params.with_a(0.0)?;
    grid.check_params(&params)?;
    let n = grid.degree();
    let phases = grid.phases();
    let m = phases.len() as f64;
    let per_ring: Vec<Result<Vec<Complex64>>> = grid
        .rings()
        .par_iter()
        .map(|ring| {
            let mut sums = vec![Complex64::new(0.0, 0.0); n + 1];
            for phase in &phases {
                let z = phase * ring.r;
                let v = g(z);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::numeric(format!("integrand is not finite at node z = {z}"), f64::NAN));
                }
                let zc = z.conj();
                let mut power = Complex64::new(1.0, 0.0);
                for s in sums.iter_mut() {
                    *s += power * v;
                    power *= zc;
                }
            }
            let scale = ring.weight * ring.density(parity) / m;
            Ok(sums.into_iter().map(|s| s * scale).collect())
        })
        .collect();
    let mut totals = vec![Complex64::new(0.0, 0.0); n + 1];
    for ring in per_ring {
        for (t, v) in totals.iter_mut().zip(ring?) {
            *t += v;
        }
    }
    let gamma = DeformedFactorials::new(params.mu(), n)?;
    let lambda = params.lambda();
    let coeffs = totals
        .into_iter()
        .enumerate()
        .map(|(k, t)| {
            if parity.matches(k) {
                t * (lambda.powi(k as i32) / gamma.get(k as i64))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    HoloFn::new(coeffs)
}

/// `K_par f` for a Taylor series `f`, as a Taylor series.
pub fn transform_holo(f: &HoloFn, parity: Parity, params: &MuParams, grid: &QuadGrid) -> Result<HoloFn> {
    if f.effective_degree() > grid.degree() {
        return Err(Error::numeric(
            format!(
                "grid calibrated to degree {} cannot transform a degree-{} function",
                grid.degree(),
                f.effective_degree()
            ),
            f64::NAN,
        ));
    }
    transform_project(|z| f.evaluate(z), parity, params, grid)
}

/// Hille–Tamarkin value: finite, or divergent by the cutoff-growth test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HtValue {
    Finite { value: f64 },
    Divergent { cutoffs: Vec<f64>, partial_integrals: Vec<f64> },
}

impl HtValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            HtValue::Finite { value } => Some(*value),
            HtValue::Divergent { .. } => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, HtValue::Divergent { .. })
    }
}

/// Knobs for the nested Hille–Tamarkin quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HtConfig {
    /// Gauss–Legendre nodes per panel in both radial rules.
    pub panel_nodes: usize,
    /// Multiplier on the per-ring angular count of the inner integral.
    pub angular_factor: f64,
    /// Largest outer radius before the outer integral is declared unconverged.
    pub outer_cap: f64,
    /// Also evaluate with doubled node counts and report the gap.
    pub refine: bool,
}

impl Default for HtConfig {
    fn default() -> Self {
        Self {
            panel_nodes: 16,
            angular_factor: 1.0,
            outer_cap: 14.0,
            refine: true,
        }
    }
}

/// Hille–Tamarkin value with its refinement gap (NaN when not refined).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HtResult {
    pub value: HtValue,
    pub refinement_gap: f64,
}

/// Cutoffs for the divergence test.
pub const DIVERGENCE_CUTOFFS: [f64; 4] = [2.0, 3.0, 4.5, 6.75];
/// Growth factor each successive cutoff integral must exceed.
pub const DIVERGENCE_GROWTH: f64 = 1.5;

struct HtIntegrator {
    spec: TransformSpec,
    panel_nodes: usize,
    angular_factor: f64,
}

impl HtIntegrator {
    fn shape(&self) -> RadialShape {
        RadialShape::for_mu(self.spec.mu, self.panel_nodes, 10)
    }

    /// `I(ρ) = ∫ dν_par(z) |K_par(z, ρ)|^{p'}` for real `ρ ≥ 0`.
    fn inner(&self, planner: &mut FftPlanner<f64>, rho: f64) -> Result<f64> {
        self.inner_at(planner, rho, 0.0)
    }

    /// The same integral at `w = ρ e^{iφ}`.
    fn inner_at(&self, planner: &mut FftPlanner<f64>, rho: f64, phi: f64) -> Result<f64> {
        let spec = &self.spec;
        let pc = spec.p_conj();
        let part = SeriesPart::from(spec.parity);
        let rule = radial_rule(self.shape(), pc * rho / 2.0 + 8.0);
        let mut total = 0.0;
        for (&r, &w) in rule.nodes.iter().zip(&rule.weights) {
            let x = r * rho;
            let m = (self.angular_factor * (9.0 * (pc * x).sqrt() + 32.0)).ceil() as usize;
            let m = m.next_power_of_two();
            let values = kernel_on_ring(planner, x, phi, spec.mu, part, m)?;
            let mean = values.iter().map(|v| v.norm().powf(pc)).sum::<f64>() / m as f64;
            total += 2.0 * PI * r * w * radial_density(r, spec.parity, spec.mu, 1.0) * mean;
        }
        Ok(total)
    }

    /// Outer integrand contributions on the nodes of `rule`, in order.
    fn outer_terms(&self, rule: &Rule1d) -> Result<Vec<f64>> {
        let spec = self.spec;
        let exponent = spec.q / spec.p_conj();
        let terms: Vec<Result<f64>> = rule
            .nodes
            .par_iter()
            .zip(&rule.weights)
            .map_init(FftPlanner::new, |planner, (&rho, &w)| {
                let inner = self.inner(planner, rho)?;
                let weight = 2.0 * PI * rho * w * radial_density(rho, spec.parity, spec.mu, 1.0) * (-spec.a * rho * rho).exp();
                Ok(weight * inner.powf(exponent))
            })
            .collect();
        terms.into_iter().collect()
    }

    /// `∫_0^R (...)`, the `q`-th power of the Hille–Tamarkin norm truncated at `R`.
    fn truncated(&self, cutoff: f64) -> Result<f64> {
        let rule = radial_rule(self.shape(), cutoff);
        Ok(self.outer_terms(&rule)?.iter().sum())
    }

    /// Full outer integral, extending unit panels until they are negligible.
    fn full(&self, cap: f64) -> Result<f64> {
        let mut total = self.truncated(1.0)?;
        let mut previous = f64::INFINITY;
        let mut lo = 1.0;
        while lo < cap {
            let mut panel = Rule1d::default();
            panel.push_panels(lo, lo + 1.0, 1.0, self.panel_nodes);
            let contribution: f64 = self.outer_terms(&panel)?.iter().sum();
            total += contribution;
            if contribution <= 1e-15 * total && contribution <= previous {
                return Ok(total);
            }
            previous = contribution;
            lo += 1.0;
        }
        Err(Error::numeric(
            format!("outer Hille-Tamarkin integral still growing at radius {cap}"),
            previous / total,
        ))
    }
}

/// Hille–Tamarkin norm `(∫dν_{par,a}(w) (∫dν_par(z)|K_par(z,w)|^{p'})^{q/p'})^{1/q}`.
///
/// The inner integral depends on `|w|` only, so `w` runs over the positive
/// axis. Inadmissible specs go through the cutoff-growth test instead: three
/// successive growth factors above 1.5 confirm divergence; anything else is a
/// numeric error.
pub fn ht_norm(spec: &TransformSpec, config: &HtConfig) -> Result<HtResult> {
    let base = HtIntegrator {
        spec: *spec,
        panel_nodes: config.panel_nodes,
        angular_factor: config.angular_factor,
    };
    if !spec.admissible() {
        let partial: Vec<f64> = DIVERGENCE_CUTOFFS
            .iter()
            .map(|&r| base.truncated(r))
            .collect::<Result<_>>()?;
        let growing = partial.windows(2).all(|w| w[1] > DIVERGENCE_GROWTH * w[0]);
        if growing {
            return Ok(HtResult {
                value: HtValue::Divergent {
                    cutoffs: DIVERGENCE_CUTOFFS.to_vec(),
                    partial_integrals: partial,
                },
                refinement_gap: f64::NAN,
            });
        }
        return Err(Error::numeric(
            format!(
                "spec (p, q, a) = ({}, {}, {}) is outside the admissible range but divergence was not confirmed",
                spec.p, spec.q, spec.a
            ),
            partial.last().copied().unwrap_or(f64::NAN),
        ));
    }
    let coarse = base.full(config.outer_cap)?.powf(1.0 / spec.q);
    if !config.refine {
        return Ok(HtResult {
            value: HtValue::Finite { value: coarse },
            refinement_gap: f64::NAN,
        });
    }
    let fine = HtIntegrator {
        spec: *spec,
        panel_nodes: 2 * config.panel_nodes,
        angular_factor: 2.0 * config.angular_factor,
    }
    .full(config.outer_cap)?
    .powf(1.0 / spec.q);
    Ok(HtResult {
        value: HtValue::Finite { value: fine },
        refinement_gap: (fine - coarse).abs() / fine,
    })
}

/// Inner Hille–Tamarkin integral `∫ dν_par(z)|K_par(z, w)|^{p'}` at a complex `w`,
/// evaluated without the rotation reduction (for checking it).
///
/// `|K|^{p'}` is only finitely smooth where the kernel vanishes, so the angular
/// trapezoid converges algebraically; `angular_factor` scales the ring count.
pub fn ht_inner_at(spec: &TransformSpec, w: Complex64, panel_nodes: usize, angular_factor: f64) -> Result<f64> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::Domain(format!("inner integral needs a finite w, got {w}")));
    }
    let integrator = HtIntegrator {
        spec: *spec,
        panel_nodes,
        angular_factor,
    };
    integrator.inner_at(&mut FftPlanner::new(), w.norm(), w.arg())
}

/// Rotation-reduced inner integral at `|w| = rho`.
pub fn ht_inner(spec: &TransformSpec, rho: f64, panel_nodes: usize, angular_factor: f64) -> Result<f64> {
    ht_inner_at(spec, Complex64::new(rho, 0.0), panel_nodes, angular_factor)
}

/// Trial search settings for [`opnorm_lower_bound`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_evals: usize,
    /// Real multipliers `c` of the `exp_{μ,par}(c z)` trials.
    pub c_values: Vec<f64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            restarts: 3,
            max_evals: 240,
            c_values: vec![0.25, 0.5, 1.0, 1.5, 2.0],
        }
    }
}

/// Best ratio found and the trial that achieved it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialBound {
    pub ratio: f64,
    pub trial: String,
    pub evaluations: usize,
}

/// Number of real simplex parameters: coefficients of six basis elements of one parity.
const SEARCH_DIM: usize = 6;

/// Grid on which trial ratios for `spec` are evaluated.
pub fn trial_grid(spec: &TransformSpec, degree: usize) -> Result<QuadGrid> {
    let params = MuParams::new(spec.mu, 1.0, spec.a.min(0.0))?;
    let mut config = GridConfig::new(degree, 1e-10);
    config.angular_nodes = Some((2 * (degree + 2)).max(128));
    QuadGrid::build(&params, &config)
}

/// `‖K_par f‖_{L^q(ν_{par,a})} / ‖f‖_{L^p(ν_par)}`.
pub fn trial_ratio(f: &HoloFn, spec: &TransformSpec, grid: &QuadGrid) -> Result<f64> {
    let source = spec.source_params()?;
    let image = transform_holo(f, spec.parity, &source, grid)?;
    let num = grid.lp_norm(|z| image.evaluate(z), spec.q, spec.parity, &spec.target_params()?)?;
    let den = grid.lp_norm(|z| f.evaluate(z), spec.p, spec.parity, &source)?;
    if den < 1e-14 {
        return Err(Error::Degenerate("trial function has vanishing L^p norm".into()));
    }
    Ok(num / den)
}

/// Lower bound for `‖K_par‖_{p→q}`: best ratio over `exp_{μ,par}(c z)` trials
/// and simplex searches over six basis coefficients, deterministic in the seed.
pub fn opnorm_lower_bound(spec: &TransformSpec, search: &SearchConfig) -> Result<TrialBound> {
    if !spec.admissible() {
        return Err(Error::Precondition(format!(
            "trial search needs an admissible spec, got (p, q, a) = ({}, {}, {})",
            spec.p, spec.q, spec.a
        )));
    }
    let mu = spec.mu;
    let exp_trials: Vec<(f64, HoloFn)> = search
        .c_values
        .iter()
        .map(|&c| HoloFn::exp_trial(c, mu, spec.parity, 1e-15).map(|f| (c, f)))
        .collect::<Result<_>>()?;
    let degree = exp_trials
        .iter()
        .map(|(_, f)| f.degree())
        .max()
        .unwrap_or(0)
        .max(2 * SEARCH_DIM + 1);
    let grid = trial_grid(spec, degree)?;

    let mut best = TrialBound {
        ratio: 0.0,
        trial: String::new(),
        evaluations: 0,
    };
    for (c, f) in &exp_trials {
        let r = trial_ratio(f, spec, &grid)?;
        best.evaluations += 1;
        if r > best.ratio {
            best.ratio = r;
            best.trial = format!("exp-{}-c{c}", spec.parity);
        }
    }

    let offset = match spec.parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let build = |x: &[f64]| -> Result<HoloFn> {
        let terms: Vec<(usize, f64)> = x.iter().enumerate().map(|(j, &c)| (offset + 2 * j, c)).collect();
        HoloFn::psi_combination(&terms, mu)
    };
    let objective = |x: &[f64]| -> f64 {
        match build(x).and_then(|f| trial_ratio(&f, spec, &grid)) {
            Ok(r) => r,
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    for restart in 0..search.restarts {
        let start: Vec<f64> = if restart == 0 {
            let mut s = vec![0.0; SEARCH_DIM];
            s[0] = 1.0;
            s
        } else {
            (0..SEARCH_DIM).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        let result = nelder_mead_max(objective, &start, 0.3, search.max_evals, 1e-10);
        best.evaluations += result.evaluations;
        if result.value > best.ratio {
            best.ratio = result.value;
            let coeffs: Vec<String> = result.x.iter().map(|c| format!("{c:.6}")).collect();
            best.trial = format!("psi-{}-mix[{}]", spec.parity, coeffs.join(","));
        }
    }
    Ok(best)
}

/// Hille–Tamarkin upper bound paired with a trial lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub ht_upper: HtValue,
    pub trial_lower: f64,
    pub trial: String,
    pub spec: TransformSpec,
    pub refinement_gap: f64,
}

pub fn estimate_norm(spec: &TransformSpec, ht: &HtConfig, search: &SearchConfig) -> Result<NormEstimate> {
    let upper = ht_norm(spec, ht)?;
    let (trial_lower, trial) = if spec.admissible() {
        let b = opnorm_lower_bound(spec, search)?;
        (b.ratio, b.trial)
    } else {
        (0.0, String::new())
    };
    Ok(NormEstimate {
        ht_upper: upper.value,
        trial_lower,
        trial,
        spec: *spec,
        refinement_gap: upper.refinement_gap,
    })
}

/// Interpolated exponent: `1/p_t = (1−t)/2 + t/p`.
pub fn interpolated_exponent(p: f64, t: f64) -> f64 {
    1.0 / ((1.0 - t) / 2.0 + t / p)
}

/// Checks `‖(K_par f) k_t‖_{L^{q_t}(ν_par)} ≤ ht^t ‖f‖_{L^{p_t}(ν_par)}` with
/// `k_t(z) = exp(−a t |z|²/q)` for each `t`.
pub fn stein_bound_check(
    f: &HoloFn,
    spec: &TransformSpec,
    t_values: &[f64],
    ht_upper: f64,
    grid: &QuadGrid,
) -> Result<Vec<IneqReport>> {
    if !spec.admissible() {
        return Err(Error::Precondition("interpolation bound needs an admissible spec".into()));
    }
    if !f.is_parity_pure(spec.parity) {
        return Err(Error::Precondition(format!("trial must be purely {}", spec.parity)));
    }
    let source = spec.source_params()?;
    let image = transform_holo(f, spec.parity, &source, grid)?;
    let mut reports = Vec::with_capacity(t_values.len());
    for &t in t_values {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("interpolation parameter must lie in [0, 1], got {t}")));
        }
        let p_t = interpolated_exponent(spec.p, t);
        let q_t = interpolated_exponent(spec.q, t);
        // |k_t|^{q_t} = exp(-a t q_t |z|²/q) folds into the weight of the measure
        let weighted = MuParams::new(spec.mu, 1.0, spec.a * t * q_t / spec.q)?;
        let lhs = grid.lp_norm(|z| image.evaluate(z), q_t, spec.parity, &weighted)?;
        let rhs = ht_upper.powf(t) * grid.lp_norm(|z| f.evaluate(z), p_t, spec.parity, &source)?;
        let report = IneqReport::evaluate(format!("stein-interpolation-{}", spec.parity), lhs, rhs)
            .with_constant("ht_upper", ht_upper, Provenance::HtBound)
            .with_input("t", t)
            .with_input("p_t", p_t)
            .with_input("q_t", q_t)
            .with_spec(spec);
        reports.push(report);
    }
    Ok(reports)
}
