mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use common::Mix;
use mubarg::holo::{norm_sq_coeff, HoloFn};
use mubarg::kernel_transform::{
    ht_inner, ht_inner_at, ht_norm, kernel_eval, opnorm_lower_bound, stein_bound_check, transform_apply,
    transform_holo, transform_project, trial_grid, HtConfig, HtValue, SearchConfig, TransformSpec,
    DIVERGENCE_CUTOFFS,
};
use mubarg::measures::{make_grid, Parity};
use mubarg::special_fn::{MuParams, SeriesPart};

#[test]
fn reproducing_property() {
    let mut rng = Mix(99);
    for &mu in &[-0.3, 0.0, 0.5, 1.0] {
        let params = MuParams::standard(mu).unwrap();
        let grid = make_grid(&params, 12, 1e-10).unwrap();
        for n in 0..=8 {
            let f = HoloFn::psi(n, mu).unwrap();
            let parity = Parity::of_index(n);
            for _ in 0..4 {
                let w = Complex64::new(2.0 * rng.next(), 2.0 * rng.next());
                let got = transform_apply(&f, w, parity, &params, &grid).unwrap();
                let want = f.evaluate(w);
                assert!((got - want).norm() < 1e-6 * (1.0 + want.norm()), "mu {mu} n {n}");
                // The other parity's kernel annihilates f.
                let other = transform_apply(&f, w, parity.opposite(), &params, &grid).unwrap();
                assert!(other.norm() < 1e-6 * (1.0 + want.norm()));
            }
        }
    }
}

#[test]
fn transform_is_an_idempotent_projection() {
    let mu = 0.5;
    let params = MuParams::standard(mu).unwrap();
    let grid = make_grid(&params, 12, 1e-10).unwrap();
    let mut rng = Mix(4);
    let f = HoloFn::new((0..=10).map(|_| Complex64::new(rng.next(), rng.next())).collect()).unwrap();
    for parity in [Parity::Even, Parity::Odd] {
        let once = transform_holo(&f, parity, &params, &grid).unwrap();
        let twice = transform_holo(&once, parity, &params, &grid).unwrap();
        let gap = norm_sq_coeff(&once.sub(&f.part(parity)), mu).unwrap().sqrt();
        assert!(gap < 1e-8, "{parity}: {gap}");
        assert!(norm_sq_coeff(&twice.sub(&once), mu).unwrap().sqrt() < 1e-8);
    }
}

#[test]
fn projection_of_antiholomorphic_data() {
    // z ↦ conj(z)·z² has angular frequency 1, so it projects onto a multiple of z.
    let mu = 1.0;
    let params = MuParams::standard(mu).unwrap();
    let grid = make_grid(&params, 8, 1e-10).unwrap();
    let image = transform_project(|z| z.conj() * z * z, Parity::Odd, &params, &grid).unwrap();
    for k in 0..image.coeffs().len() {
        if k != 1 {
            assert!(image.coeff(k).norm() < 1e-10, "k {k}: {}", image.coeff(k));
        }
    }
    // ⟨z, conj(z) z²⟩ / ‖z‖² = ∫|z|⁴dν_o / ∫|z|²dν_o
    let want = mubarg::measures::moment_oracle(Parity::Odd, 2, mu).unwrap()
        / mubarg::measures::moment_oracle(Parity::Odd, 1, mu).unwrap();
    assert!((image.coeff(1).re - want).abs() < 1e-8 * want);
}

#[test]
fn ht_inner_is_rotation_invariant() {
    for parity in [Parity::Even, Parity::Odd] {
        let spec = TransformSpec::new(parity, 4.0, 2.0, 1.2, 0.5).unwrap();
        for &rho in &[0.3, 1.7, 4.0] {
            // A fine angular rule resolves |K|^{p'} near the kernel's zeros.
            let radial = ht_inner(&spec, rho, 16, 64.0).unwrap();
            for &theta in &[0.4, 2.0, -2.9] {
                let turned = ht_inner_at(&spec, Complex64::from_polar(rho, theta), 16, 64.0).unwrap();
                assert!((turned - radial).abs() < 1e-10 * radial, "{parity} rho {rho} theta {theta}");
            }
            let default = ht_inner(&spec, rho, 16, 1.0).unwrap();
            assert!((default - radial).abs() < 1e-5 * radial);
        }
    }
}

#[test]
fn ht_norm_is_stable_under_refinement() {
    let spec = TransformSpec::new(Parity::Even, 4.0, 2.0, 1.2, 0.5).unwrap();
    let result = ht_norm(&spec, &HtConfig::default()).unwrap();
    let value = result.value.finite().expect("admissible spec has a finite bound");
    assert!(value > 0.0 && value.is_finite());
    assert!(result.refinement_gap <= 1e-4 * value, "gap {}", result.refinement_gap);
}

#[test]
fn ht_norm_flags_divergence() {
    let spec = TransformSpec::new(Parity::Even, 2.0, 2.0, 0.0, 0.0).unwrap();
    match ht_norm(&spec, &HtConfig::default()).unwrap().value {
        HtValue::Divergent { cutoffs, partial_integrals } => {
            assert_eq!(cutoffs, DIVERGENCE_CUTOFFS.to_vec());
            assert!(partial_integrals.windows(2).all(|w| w[1] > w[0]));
            // At μ = 0 the inner integral is cosh(ρ²), so the partial integral is
            // R²/2 + (1 − e^{−2R²})/4.
            for (r, v) in cutoffs.iter().zip(&partial_integrals) {
                let want = r * r / 2.0 + (1.0 - (-2.0 * r * r).exp()) / 4.0;
                assert!((v - want).abs() < 1e-6 * want, "R {r}: {v}");
            }
        }
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn trial_ratio_never_exceeds_ht_bound() {
    let spec = TransformSpec::new(Parity::Odd, 4.0, 2.0, 1.2, 0.5).unwrap();
    let ht = ht_norm(&spec, &HtConfig::default()).unwrap().value.finite().unwrap();
    let search = SearchConfig {
        restarts: 1,
        max_evals: 60,
        ..SearchConfig::default()
    };
    let lower = opnorm_lower_bound(&spec, &search).unwrap();
    assert!(lower.ratio > 0.0);
    assert!(lower.ratio <= ht * (1.0 + 1e-6), "{} > {ht}", lower.ratio);
    let divergent = TransformSpec::new(Parity::Odd, 2.0, 2.0, 0.0, 0.5).unwrap();
    assert!(opnorm_lower_bound(&divergent, &search).is_err());
}

#[test]
fn stein_interpolation_holds() {
    let spec = TransformSpec::new(Parity::Even, 4.0, 2.0, 1.2, 0.5).unwrap();
    let ht = ht_norm(&spec, &HtConfig::default()).unwrap().value.finite().unwrap();
    let grid = trial_grid(&spec, 24).unwrap();
    let f = HoloFn::psi_combination(&[(0, 1.0), (2, 0.5), (6, -0.25)], 0.5).unwrap();
    let reports = stein_bound_check(&f, &spec, &[0.0, 0.25, 0.5, 0.75, 1.0], ht, &grid).unwrap();
    assert_eq!(reports.len(), 5);
    for r in &reports {
        assert!(r.pass, "{r:?}");
    }
    // At t = 0 both sides are the L² norm of f.
    assert!((reports[0].lhs - reports[0].rhs).abs() < 1e-8 * reports[0].rhs);
    assert!(stein_bound_check(&HoloFn::psi(1, 0.5).unwrap(), &spec, &[0.5], ht, &grid).is_err());
    assert!(stein_bound_check(&f, &spec, &[1.5], ht, &grid).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_hermitian(mu in -0.45f64..2.5, zr in -3.0f64..3.0, zi in -3.0f64..3.0, wr in -3.0f64..3.0, wi in -3.0f64..3.0) {
        let (z, w) = (Complex64::new(zr, zi), Complex64::new(wr, wi));
        for part in [SeriesPart::Even, SeriesPart::Odd, SeriesPart::Full] {
            let a = kernel_eval(z, w, part, mu).unwrap();
            let b = kernel_eval(w, z, part, mu).unwrap();
            prop_assert!((a - b.conj()).norm() <= 1e-13 * (1.0 + a.norm()));
        }
    }
}
