//! Entropy, energy and Dirichlet energy of a few basis functions.

use mubarg::functionals::{dirichlet_energy, mixed_energy, mu_energy, mu_entropy, DirichletRoute, EnergyRoute};
use mubarg::holo::HoloFn;
use mubarg::measures::{make_grid, Parity};
use mubarg::special_fn::MuParams;

fn main() -> mubarg::Result<()> {
    for &mu in &[0.0, 0.5] {
        let params = MuParams::standard(mu)?;
        let grid = make_grid(&params, 12, 1e-10)?;
        println!("mu = {mu}");
        println!("{:>6} {:>14} {:>14} {:>14} {:>14}", "f", "entropy", "energy", "mixed", "dirichlet");
        for n in 0..=6 {
            let f = HoloFn::psi(n, mu)?;
            let parity = Parity::of_index(n);
            let s = mu_entropy(&f, &params, &grid)?.total;
            let e = mu_energy(&f, &params, &grid, EnergyRoute::Quadrature)?.total;
            let m = mixed_energy(&f, parity, &params, &grid, EnergyRoute::Coefficient)?;
            let d = dirichlet_energy(&f, mu, DirichletRoute::Direct)?;
            println!("{:>6} {s:>14.8} {e:>14.8} {m:>14.8} {d:>14.8}", format!("psi{n}"));
        }
    }
    Ok(())
}
