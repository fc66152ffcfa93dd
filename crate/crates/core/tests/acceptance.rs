//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test --test acceptance`.

mod common;

use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use common::{moment_brute_force, Mix, MU_GRID};
use mubarg::functionals::{dirichlet_energy, mu_energy, DirichletRoute, EnergyRoute};
use mubarg::holo::{commutator_residual, norm_sq_coeff, norm_sq_quad, HoloFn};
use mubarg::inequality_lab::{
    comparability_scan, kappa, scan, suite_degree, trial_suite, CheckSet, IneqReport, SweepSpec,
};
use mubarg::kernel_transform::{ht_norm, stein_bound_check, transform_apply, trial_grid, HtConfig, TransformSpec};
use mubarg::measures::{make_grid, moment, moment_oracle, total_mass, Parity};
use mubarg::special_fn::{DeformedFactorials, MuParams};

const PARITIES: [Parity; 2] = [Parity::Even, Parity::Odd];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Random coefficients `(U + iU)/√γ(k)` so every term has unit-scale norm.
fn scaled_random(rng: &mut Mix, degree: usize, mu: f64) -> HoloFn {
    let gamma = DeformedFactorials::new(mu, degree).unwrap();
    let coeffs = (0..=degree)
        .map(|k| Complex64::new(rng.next(), rng.next()) / gamma.get(k as i64).sqrt())
        .collect();
    HoloFn::new(coeffs).unwrap()
}

fn c1_normalization() -> Outcome {
    let mut worst = 0.0f64;
    for &mu in &MU_GRID {
        let start = Instant::now();
        let mass = total_mass(Parity::Even, &MuParams::standard(mu).map_err(e)?).map_err(e)?;
        ensure(start.elapsed().as_secs_f64() < 1.0, format!("mu {mu}: took {:?}", start.elapsed()))?;
        worst = worst.max((mass - 1.0).abs());
    }
    ensure(worst < 1e-8, format!("max |mass - 1| = {worst:e}"))?;
    Ok(format!("max |mass - 1| = {worst:.1e}"))
}

fn c2_moments() -> Outcome {
    let mut oracle_gap = 0.0f64;
    for &mu in &MU_GRID {
        for parity in PARITIES {
            for k in [0, 2, 5] {
                let brute = moment_brute_force(parity == Parity::Odd, k, mu);
                oracle_gap = oracle_gap.max(rel(brute, moment_oracle(parity, k, mu).map_err(e)?));
            }
        }
    }
    ensure(oracle_gap < 1e-10, format!("oracle vs brute force {oracle_gap:e}"))?;
    let mut worst = 0.0f64;
    for &mu in &MU_GRID {
        let params = MuParams::standard(mu).map_err(e)?;
        for parity in PARITIES {
            for k in 0..=12 {
                let got = moment(parity, k, &params).map_err(e)?;
                worst = worst.max(rel(got, moment_oracle(parity, k, mu).map_err(e)?));
            }
        }
    }
    ensure(worst < 1e-8, format!("max relative moment error {worst:e}"))?;
    Ok(format!("moments {worst:.1e}, oracle vs brute force {oracle_gap:.1e}"))
}

fn c3_orthonormality() -> Outcome {
    let mut worst = 0.0f64;
    for &mu in &MU_GRID {
        let params = MuParams::standard(mu).map_err(e)?;
        let grid = make_grid(&params, 8, 1e-10).map_err(e)?;
        for parity in PARITIES {
            let basis: Vec<HoloFn> = (0..=8)
                .filter(|&n| parity.matches(n))
                .map(|n| HoloFn::psi(n, mu).unwrap())
                .collect();
            for (i, f) in basis.iter().enumerate() {
                for (j, g) in basis.iter().enumerate() {
                    let v = grid
                        .integrate(|z| f.evaluate(z).conj() * g.evaluate(z), parity, &params)
                        .map_err(e)?;
                    let want = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((v - want).norm());
                }
            }
        }
    }
    ensure(worst < 1e-7, format!("max Gram deviation {worst:e}"))?;
    Ok(format!("max Gram deviation {worst:.1e}"))
}

fn c4_norms() -> Outcome {
    let mut rng = Mix(2024);
    let mut worst = 0.0f64;
    for &mu in &MU_GRID {
        let params = MuParams::standard(mu).map_err(e)?;
        let grid = make_grid(&params, 16, 1e-10).map_err(e)?;
        for _ in 0..50 {
            let degree = ((rng.next() + 1.0) * 8.5) as usize % 17;
            let f = HoloFn::new((0..=degree).map(|_| Complex64::new(rng.next(), rng.next())).collect()).unwrap();
            let coeff = norm_sq_coeff(&f, mu).map_err(e)?;
            let quad = norm_sq_quad(&f, &params, &grid).map_err(e)?;
            worst = worst.max(rel(quad, coeff));
        }
    }
    ensure(worst < 1e-7, format!("max relative gap {worst:e}"))?;
    Ok(format!("max relative gap {worst:.1e}"))
}

fn c5_reproducing() -> Outcome {
    let mut rng = Mix(5);
    let mut worst = 0.0f64;
    for &mu in &MU_GRID {
        let params = MuParams::standard(mu).map_err(e)?;
        let grid = make_grid(&params, 8, 1e-10).map_err(e)?;
        let points: Vec<Complex64> = (0..20)
            .map(|_| {
                let (r, t) = (2.0 * (0.5 * (rng.next() + 1.0)).sqrt(), std::f64::consts::PI * rng.next());
                Complex64::from_polar(r, t)
            })
            .collect();
        for n in 0..=8 {
            let f = HoloFn::monomial(n);
            for &w in &points {
                let got = transform_apply(&f, w, Parity::of_index(n), &params, &grid).map_err(e)?;
                worst = worst.max((got - f.evaluate(w)).norm());
            }
        }
    }
    ensure(worst < 1e-6, format!("max |Kf(w) - f(w)| = {worst:e}"))?;
    Ok(format!("max |Kf(w) - f(w)| = {worst:.1e}"))
}

fn c6_identities() -> Outcome {
    let mut rng = Mix(6);
    let (mut commutator, mut dirichlet) = (0.0f64, 0.0f64);
    for &mu in &MU_GRID {
        for _ in 0..10 {
            let f = scaled_random(&mut rng, 32, mu);
            commutator = commutator.max(commutator_residual(&f, mu).map_err(e)?);
            let direct = dirichlet_energy(&f, mu, DirichletRoute::Direct).map_err(e)?;
            let identity = dirichlet_energy(&f, mu, DirichletRoute::Identity).map_err(e)?;
            dirichlet = dirichlet.max((direct - identity).abs() / norm_sq_coeff(&f.mult_apply(), mu).map_err(e)?);
        }
    }
    ensure(commutator < 1e-12, format!("commutator residual {commutator:e}"))?;
    ensure(dirichlet < 1e-12, format!("Dirichlet identity residual {dirichlet:e}"))?;
    let big = |n: i64| BigRational::from_integer(BigInt::from(n));
    for (num, den) in [(-2i64, 5i64), (0, 1), (1, 2), (7, 3)] {
        let two_mu = big(2) * BigRational::new(BigInt::from(num), BigInt::from(den));
        let step = |k: i64| if k % 2 == 1 { big(k) + two_mu.clone() } else { big(k) };
        let mut g = vec![big(0), big(1)];
        for k in 1..=65 {
            let next = step(k) * g[k as usize].clone();
            g.push(next);
        }
        let gamma = |k: i64| g[(k + 1) as usize].clone();
        for k in 0..=64i64 {
            let sign = if k % 2 == 0 { big(1) } else { big(-1) };
            let lhs = step(k) * step(k) * gamma(k - 1);
            let rhs = gamma(k + 1) - gamma(k) - two_mu.clone() * sign * gamma(k);
            ensure(lhs == rhs, format!("per-k identity fails at k = {k}, mu = {num}/{den}"))?;
        }
    }
    Ok(format!("commutator {commutator:.1e}, Dirichlet {dirichlet:.1e}, per-k identity exact to k = 64"))
}

fn c7_hille_tamarkin() -> Outcome {
    let mut notes = Vec::new();
    for mu in [0.0, 0.5] {
        let spec = TransformSpec::new(Parity::Even, 4.0, 2.0, 1.2, mu).map_err(e)?;
        let ht = ht_norm(&spec, &HtConfig::default()).map_err(e)?;
        let value = ht.value.finite().ok_or("admissible spec reported divergent")?;
        ensure(ht.refinement_gap < 1e-4, format!("mu {mu}: refinement gap {:e}", ht.refinement_gap))?;
        notes.push(format!("HT(mu={mu}) = {value:.6} (gap {:.0e})", ht.refinement_gap));
    }
    let inadmissible = TransformSpec::new(Parity::Even, 2.0, 2.0, 0.0, 0.5).map_err(e)?;
    ensure(
        ht_norm(&inadmissible, &HtConfig::default()).map_err(e)?.value.is_divergent(),
        "(2,2,0) not flagged divergent",
    )?;
    notes.push("(2,2,0) divergent".into());
    Ok(notes.join(", "))
}

fn c8_stein() -> Outcome {
    let mu = 0.5;
    let spec = TransformSpec::new(Parity::Even, 4.0, 2.0, 1.2, mu).map_err(e)?;
    let ht = ht_norm(&spec, &HtConfig::default()).map_err(e)?.value.finite().ok_or("divergent")?;
    let grid = trial_grid(&spec, 16).map_err(e)?;
    let f = HoloFn::psi(0, mu).map_err(e)?.add(&HoloFn::psi(2, mu).map_err(e)?);
    let reports = stein_bound_check(&f, &spec, &[0.0, 0.25, 0.5, 0.75, 1.0], ht, &grid).map_err(e)?;
    let min_slack = reports.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    ensure(min_slack >= -1e-9, format!("min slack {min_slack:e}"))?;
    let t0 = &reports[0];
    ensure((t0.lhs - t0.rhs).abs() < 1e-7, format!("t = 0 gap {:e}", t0.lhs - t0.rhs))?;
    Ok(format!("min slack {min_slack:.3e}, t = 0 gap {:.1e}", (t0.lhs - t0.rhs).abs()))
}

/// One sweep shared by criteria 9, 10 and 13.
fn lsi_sweep() -> Result<Vec<(String, IneqReport)>, String> {
    let sweep = SweepSpec {
        mu: vec![0.0, 0.5, 1.0],
        specs: vec![(2.0, 4.0, 1.5)],
        c: vec![1.5, 2.0, 4.0],
        checks: CheckSet {
            lsi: false,
            ..CheckSet::ALL
        },
        ..SweepSpec::default()
    };
    let report = scan(&sweep).map_err(e)?;
    Ok(report.cells.into_iter().map(|c| (c.key, c.report)).collect())
}

fn family(cells: &[(String, IneqReport)], prefix: &str) -> Outcome {
    let selected: Vec<&(String, IneqReport)> = cells.iter().filter(|(_, r)| r.name.starts_with(prefix)).collect();
    ensure(!selected.is_empty(), format!("no {prefix} cells"))?;
    let setup: Vec<&String> = cells.iter().filter(|(_, r)| !r.pass && r.name == "setup").map(|(k, _)| k).collect();
    ensure(setup.is_empty(), format!("setup failures: {setup:?}"))?;
    let failed: Vec<String> = selected
        .iter()
        .filter(|(_, r)| !r.pass)
        .map(|(k, r)| format!("{k}{}", r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()))
        .collect();
    if let Some(first) = failed.first() {
        return Err(format!("{} failures, first {first}", failed.len()));
    }
    let min_slack = selected.iter().map(|(_, r)| r.slack).fold(f64::INFINITY, f64::min);
    ensure(min_slack >= -1e-9, format!("min slack {min_slack:e}"))?;
    Ok(format!("{} cells, min slack {min_slack:.3e}", selected.len()))
}

fn c10_anchor() -> Result<(), String> {
    let k = kappa(2.0, Parity::Even, 0.0).map_err(e)?;
    ensure((k - 2.0 * 2f64.ln()).abs() < 1e-8, format!("kappa_e(2, 0) = {k}"))
}

fn c11_comparability() -> Outcome {
    let mut notes = Vec::new();
    for mu in [1.0, 0.0, -0.25] {
        let params = MuParams::standard(mu).map_err(e)?;
        let grid = make_grid(&params, suite_degree(mu).map_err(e)? + 1, 1e-10).map_err(e)?;
        let mut trials = trial_suite(mu, Parity::Even, mubarg::inequality_lab::DEFAULT_SEED).map_err(e)?;
        trials.extend(trial_suite(mu, Parity::Odd, mubarg::inequality_lab::DEFAULT_SEED).map_err(e)?);
        let s = comparability_scan(&trials, &params, &grid).map_err(e)?;
        let ok = if mu > 0.0 {
            s.even_inf > 1.0 && s.odd_sup < 1.0
        } else if mu < 0.0 {
            s.even_sup < 1.0 && s.odd_inf > 1.0
        } else {
            [s.even_inf, s.even_sup, s.odd_inf, s.odd_sup].iter().all(|r| (r - 1.0).abs() <= 1e-7)
        };
        ensure(ok && s.reports.iter().all(|r| r.pass), format!("mu {mu}: ordering violated ({s:?})"))?;
        notes.push(format!(
            "mu={mu}: even [{:.4}, {:.4}], odd [{:.4}, {:.4}]",
            s.even_inf, s.even_sup, s.odd_inf, s.odd_sup
        ));
    }
    Ok(notes.join("; "))
}

fn c12_bargmann() -> Outcome {
    let params = MuParams::standard(0.0).map_err(e)?;
    let grid = make_grid(&params, 16, 1e-10).map_err(e)?;
    let mut worst = 0.0f64;
    for n in 0..=8 {
        let energy = mu_energy(&HoloFn::psi(n, 0.0).map_err(e)?, &params, &grid, EnergyRoute::Quadrature).map_err(e)?;
        worst = worst.max((energy.total - (n as f64 + 1.0)).abs());
    }
    let mut rng = Mix(12);
    for _ in 0..20 {
        let f = scaled_random(&mut rng, 12, 0.0);
        let energy = mu_energy(&f, &params, &grid, EnergyRoute::Quadrature).map_err(e)?.total;
        let want = norm_sq_coeff(&f, 0.0).map_err(e)? + dirichlet_energy(&f, 0.0, DirichletRoute::Direct).map_err(e)?;
        worst = worst.max((energy - want).abs());
    }
    ensure(worst < 1e-7, format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn c14_dilation() -> Outcome {
    let lambda = 2.5;
    let mut rng = Mix(14);
    let (mut norm_gap, mut energy_gap) = (0.0f64, 0.0f64);
    for &mu in &MU_GRID {
        let unit = MuParams::standard(mu).map_err(e)?;
        let dilated = MuParams::new(mu, lambda, 0.0).map_err(e)?;
        let grid_1 = make_grid(&unit, 12, 1e-10).map_err(e)?;
        let grid_l = make_grid(&dilated, 12, 1e-10).map_err(e)?;
        for _ in 0..5 {
            let f = scaled_random(&mut rng, 10, mu);
            let g = f.dilate(lambda).map_err(e)?;
            norm_gap = norm_gap.max(
                (norm_sq_quad(&f, &unit, &grid_1).map_err(e)? - norm_sq_quad(&g, &dilated, &grid_l).map_err(e)?).abs(),
            );
            let before = mu_energy(&f, &unit, &grid_1, EnergyRoute::Quadrature).map_err(e)?.total;
            let after = mu_energy(&g, &dilated, &grid_l, EnergyRoute::Quadrature).map_err(e)?.total;
            energy_gap = energy_gap.max((before - after).abs());
        }
    }
    ensure(norm_gap < 1e-7, format!("norm gap {norm_gap:e}"))?;
    ensure(energy_gap < 1e-7, format!("energy gap {energy_gap:e}"))?;
    Ok(format!("norm gap {norm_gap:.1e}, energy gap {energy_gap:.1e}"))
}

fn c15_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let mut bytes = Vec::new();
    for name in ["first", "second"] {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_mubarg"))
            .args(["sweep", "--mu", "0.5", "--p", "2", "--q", "4", "--a", "1.5", "--c", "2", "--seed", "7"])
            .arg("--out")
            .arg(&out)
            .env_remove("MUBARG_SEED")
            .output()
            .map_err(e)?
            .status;
        ensure(status.success(), format!("sweep exited with {status}"))?;
        bytes.push(std::fs::read(out.with_extension("json")).map_err(e)?);
    }
    ensure(bytes[0] == bytes[1], "sweep reports differ")?;
    Ok(format!("{} identical bytes", bytes[0].len()))
}

fn main() {
    let started = Instant::now();
    let sweep = lsi_sweep();
    let from_sweep = |prefix: &str| sweep.as_ref().map_err(Clone::clone).and_then(|cells| family(cells, prefix));
    let criteria: Vec<(&str, Outcome)> = vec![
        ("measure normalization", c1_normalization()),
        ("moment oracle agreement", c2_moments()),
        ("orthonormality", c3_orthonormality()),
        ("norm formula agreement", c4_norms()),
        ("reproducing property", c5_reproducing()),
        ("exact coefficient identities", c6_identities()),
        ("Hille-Tamarkin admissibility", c7_hille_tamarkin()),
        ("Stein-interpolated bound", c8_stein()),
        ("direct log-Sobolev (2,4,1.5)", from_sweep("direct-lsi")),
        ("reverse log-Sobolev with kappa", c10_anchor().and_then(|()| from_sweep("rlsi"))),
        ("energy comparability", c11_comparability()),
        ("Bargmann cross-check at mu = 0", c12_bargmann()),
        ("Dirichlet-energy inequalities", from_sweep("dirichlet")),
        ("dilation unitarity", c14_dilation()),
        ("sweep determinism", c15_determinism()),
    ];
    let mut failures = 0;
    for (n, (title, outcome)) in criteria.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS {:>2} {title}: {detail}", n + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {title}: {detail}", n + 1);
            }
        }
    }
    println!("acceptance finished in {:.1} s", started.elapsed().as_secs_f64());
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
