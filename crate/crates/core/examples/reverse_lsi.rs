//! Reverse log-Sobolev inequalities with the closed-form constants kappa.

use mubarg::inequality_lab::{full_trial_suite, rlsi_check, suite_degree, KappaPair, DEFAULT_SEED};
use mubarg::measures::make_grid;
use mubarg::special_fn::{MuParams, SeriesPart};

fn main() -> mubarg::Result<()> {
    for &mu in &[0.0, 1.0] {
        let params = MuParams::standard(mu)?;
        let grid = make_grid(&params, suite_degree(mu)?, 1e-10)?;
        for &c in &[1.5, 4.0] {
            let kappas = KappaPair::new(c, mu)?;
            println!("mu = {mu}, c = {c}: kappa_e = {:.6}, kappa_o = {:.6}", kappas.even, kappas.odd);
            let mut tightest = (f64::INFINITY, String::new());
            for trial in full_trial_suite(mu, DEFAULT_SEED)? {
                let r = rlsi_check(&trial.f, c, SeriesPart::Full, &kappas, &params, &grid)?;
                assert!(r.pass, "{}: {r:?}", trial.id);
                let relative = r.slack / r.rhs.abs().max(1.0);
                if relative < tightest.0 {
                    tightest = (relative, trial.id);
                }
            }
            println!("  all full-space trials pass; tightest {} (relative slack {:.3})", tightest.1, tightest.0);
        }
    }
    Ok(())
}
