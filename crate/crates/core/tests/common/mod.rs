//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use mubarg::special_fn::log_gamma;

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const G_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = GK_WEIGHTS[7] * fc;
    let mut gauss = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let pair = f(c - x) + f(c + x);
        kronrod += GK_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature on `[a, b]`: the interval
/// with the largest error estimate is bisected until the summed estimate drops
/// below `rel` times the running total or the interval budget runs out. The
/// (K − G) estimate is pessimistic, so the true error is far smaller.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> f64 {
    const BUDGET: usize = 4000;
    // a coarse initial partition guards against false convergence on peaked integrands
    const START: usize = 64;
    let h = (b - a) / START as f64;
    let mut parts: Vec<(f64, f64, f64, f64)> = (0..START)
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == START { b } else { lo + h };
            let (v, err) = gk15(&f, lo, hi);
            (lo, hi, v, err)
        })
        .collect();
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let total_err: f64 = parts.iter().map(|p| p.3).sum();
        if total_err <= rel * total.abs() || parts.len() >= BUDGET {
            return total;
        }
        let worst = (0..parts.len())
            .max_by(|&i, &j| parts[i].3.total_cmp(&parts[j].3))
            .expect("nonempty");
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (lv, le) = gk15(&f, lo, mid);
        let (rv, re) = gk15(&f, mid, hi);
        parts.push((lo, mid, lv, le));
        parts.push((mid, hi, rv, re));
    }
}

/// `K_ν(x) = ∫_0^∞ e^{−x cosh t} cosh(ν t) dt` by adaptive quadrature.
pub fn bessel_k_integral(nu: f64, x: f64) -> f64 {
    // e^{−x cosh t} < 1e-300 beyond this t
    let upper = (700.0 / x + 1.0).acosh() + 1.0;
    adaptive(|t| (-x * t.cosh()).exp() * (nu * t).cosh(), 0.0, upper, 1e-14)
}

/// Radial density of the measure built directly from the defining formula.
pub fn density_reference(r: f64, odd: bool, mu: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let nu = if odd { mu + 0.5 } else { mu - 0.5 };
    let log_pref = (0.5 - mu) * 2f64.ln() - std::f64::consts::PI.ln() - log_gamma(mu + 0.5).unwrap();
    let k = bessel_k_integral(nu.abs(), r * r);
    log_pref.exp() * k * r.powf(2.0 * mu + 1.0)
}

/// `∫ |z|^{2k} dν_par` by brute-force nested adaptive quadrature.
pub fn moment_brute_force(odd: bool, k: usize, mu: f64) -> f64 {
    let f = |r: f64| 2.0 * std::f64::consts::PI * r * r.powi(2 * k as i32) * density_reference(r, odd, mu);
    // r = s⁴ on [0, 1] smooths the r^{4μ+1} endpoint singularity of negative μ
    let inner = adaptive(|s: f64| 4.0 * s.powi(3) * f(s.powi(4)), 0.0, 1.0, 1e-12);
    inner + adaptive(&f, 1.0, 14.0, 1e-12)
}

/// Deterministic pseudo-random numbers in [-1, 1) (SplitMix64).
pub struct Mix(pub u64);

impl Mix {
    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }
}

pub const MU_GRID: [f64; 6] = [-0.4, -0.1, 0.0, 0.5, 1.0, 2.5];
