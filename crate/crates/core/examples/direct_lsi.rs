//! A direct log-Sobolev inequality with constants from the Hille–Tamarkin bound.

use mubarg::inequality_lab::{direct_lsi_check, trial_suite, DirectConstants, DEFAULT_SEED};
use mubarg::kernel_transform::{ht_norm, trial_grid, HtConfig, TransformSpec};
use mubarg::measures::Parity;
use mubarg::special_fn::SeriesPart;

fn main() -> mubarg::Result<()> {
    let mu = 0.5;
    for parity in [Parity::Even, Parity::Odd] {
        let spec = TransformSpec::new(parity, 2.0, 4.0, 1.5, mu)?;
        let ht = ht_norm(&spec, &HtConfig::default())?;
        let bound = ht.value.finite().expect("admissible");
        let constants = DirectConstants::from_direct_spec(&spec, bound)?;
        println!(
            "{parity}: HT = {bound:.8}, a* = {}, b* = {}, c* = {:.8}",
            constants.a_star, constants.b_star, constants.c_star
        );
        let grid = trial_grid(&spec, 40)?;
        for trial in trial_suite(mu, parity, DEFAULT_SEED)?.iter().take(6) {
            let r = direct_lsi_check(&trial.f, SeriesPart::from(parity), &constants, &spec.source_params()?, &grid)?;
            println!("  {:<14} {:>12.6} <= {:>12.6}  {}", trial.id, r.lhs, r.rhs, if r.pass { "ok" } else { "FAIL" });
        }
    }
    Ok(())
}
