//! The kernel transform reproduces holomorphic functions and projects others.

use num_complex::Complex64;

use mubarg::holo::HoloFn;
use mubarg::kernel_transform::{transform_apply, transform_project};
use mubarg::measures::{make_grid, Parity};
use mubarg::special_fn::MuParams;

fn main() -> mubarg::Result<()> {
    let mu = 0.5;
    let params = MuParams::standard(mu)?;
    let grid = make_grid(&params, 10, 1e-10)?;

    let f = HoloFn::psi_combination(&[(1, 1.0), (5, -0.3)], mu)?;
    for w in [Complex64::new(0.5, 0.5), Complex64::new(-1.2, 0.8), Complex64::new(0.0, -2.0)] {
        let image = transform_apply(&f, w, Parity::Odd, &params, &grid)?;
        println!("w = {w}: (K_o f)(w) = {image:.10}, f(w) = {:.10}", f.evaluate(w));
    }

    // |z|² z is not holomorphic; its projection keeps only the z¹ direction.
    let projected = transform_project(|z| z.norm_sqr() * z, Parity::Odd, &params, &grid)?;
    let shown: Vec<String> = projected.coeffs().iter().take(4).map(|c| format!("{:.6}", c.re)).collect();
    println!("projection of |z|^2 z: first coefficients [{}]", shown.join(", "));
    Ok(())
}
