//! Ratios of mixed to ordinary energies, and the constants derived from them.

use mubarg::inequality_lab::{comparability_scan, suite_degree, trial_suite, DEFAULT_SEED};
use mubarg::measures::{make_grid, Parity};
use mubarg::special_fn::MuParams;

fn main() -> mubarg::Result<()> {
    for &mu in &[-0.25, 0.0, 0.5, 2.5] {
        let params = MuParams::standard(mu)?;
        let grid = make_grid(&params, suite_degree(mu)? + 1, 1e-10)?;
        let mut trials = trial_suite(mu, Parity::Even, DEFAULT_SEED)?;
        trials.extend(trial_suite(mu, Parity::Odd, DEFAULT_SEED)?);
        let scan = comparability_scan(&trials, &params, &grid)?;
        let constants = scan.constants(mu);
        println!(
            "mu = {mu:>5}: even ratios [{:.4}, {:.4}], odd ratios [{:.4}, {:.4}], C_e = {:.4}, 1/C_o = {:.4}",
            scan.even_inf, scan.even_sup, scan.odd_inf, scan.odd_sup, constants.c_e.value, constants.c_o_inv.value
        );
    }
    Ok(())
}
