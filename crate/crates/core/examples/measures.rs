//! Total masses and moments of the even and odd measures against the closed form.

use mubarg::measures::{make_grid, moment_oracle, total_mass, Parity};
use mubarg::special_fn::MuParams;

fn main() -> mubarg::Result<()> {
    for &mu in &[-0.4, 0.0, 0.5, 2.5] {
        let params = MuParams::standard(mu)?;
        let grid = make_grid(&params, 12, 1e-10)?;
        println!(
            "mu = {mu}: {} nodes, r_max = {:.2}, calibration residual {:.1e}",
            grid.node_count(),
            grid.r_max(),
            grid.residual()
        );
        for parity in [Parity::Even, Parity::Odd] {
            let mass = total_mass(parity, &params)?;
            let worst = (0..=12)
                .map(|k| {
                    let got = grid.radial_moment(parity, 0.0, k);
                    let want = moment_oracle(parity, k, mu).unwrap();
                    (got - want).abs() / want
                })
                .fold(0.0f64, f64::max);
            println!("  {parity}: mass {mass:.12}, worst moment error (k <= 12) {worst:.1e}");
        }
    }
    Ok(())
}
