//! Creation and annihilation operators on coefficient sequences.

use num_complex::Complex64;

use mubarg::holo::{commutator_residual, inner_product_coeff, norm_sq_coeff, norm_sq_quad, HoloFn};
use mubarg::measures::make_grid;
use mubarg::special_fn::MuParams;

fn main() -> mubarg::Result<()> {
    let mu = 0.75;
    let f = HoloFn::new(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -0.5),
        Complex64::new(0.25, 0.25),
        Complex64::new(-0.1, 0.0),
    ])?;
    let g = HoloFn::psi_combination(&[(0, 1.0), (3, 0.5)], mu)?;

    let lhs = inner_product_coeff(&f.mult_apply(), &g, mu)?;
    let rhs = inner_product_coeff(&f, &g.dunkl_apply(mu)?, mu)?;
    println!("<z f, g> = {lhs:.12}");
    println!("<f, D g> = {rhs:.12}");
    println!("commutator residual: {:.1e}", commutator_residual(&f, mu)?);

    let params = MuParams::standard(mu)?;
    let grid = make_grid(&params, 8, 1e-10)?;
    println!(
        "|f|^2: coefficients {:.12}, quadrature {:.12}",
        norm_sq_coeff(&f, mu)?,
        norm_sq_quad(&f, &params, &grid)?
    );

    let lambda = 2.5;
    let dilated = MuParams::new(mu, lambda, 0.0)?;
    let grid_l = make_grid(&dilated, 8, 1e-10)?;
    println!(
        "|T_lambda f|^2 at lambda = {lambda}: {:.12}",
        norm_sq_quad(&f.dilate(lambda)?, &dilated, &grid_l)?
    );
    println!("coefficients as JSON: {}", f.to_json()?);
    Ok(())
}
