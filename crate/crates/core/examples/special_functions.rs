//! Deformed factorials, the deformed exponential and the Macdonald function.

use num_complex::Complex64;

use mubarg::special_fn::{exp_mu, gamma_mu, growth_constant, macdonald_k, SeriesPart};

fn main() -> mubarg::Result<()> {
    for &mu in &[-0.25, 0.0, 0.5, 2.0] {
        let gammas: Vec<String> = (0..6).map(|k| format!("{:.4}", gamma_mu(k, mu).unwrap())).collect();
        println!("mu = {mu}: gamma(0..6) = [{}], C_mu = {}", gammas.join(", "), growth_constant(mu)?);
    }

    let z = Complex64::new(1.5, -2.0);
    for &mu in &[0.0, 0.5] {
        let full = exp_mu(z, mu, SeriesPart::Full)?;
        let even = exp_mu(z, mu, SeriesPart::Even)?;
        let odd = exp_mu(z, mu, SeriesPart::Odd)?;
        println!("mu = {mu}: exp_mu({z}) = {full:.6} = {even:.6} + {odd:.6}");
    }
    println!("e^z for comparison: {:.6}", z.exp());

    println!("\n{:>8} {:>20} {:>20}", "x", "K_0.3(x)", "K_1.7(x)");
    for &x in &[1e-3, 0.1, 1.0, 10.0, 40.0] {
        println!("{x:>8} {:>20.12e} {:>20.12e}", macdonald_k(0.3, x)?, macdonald_k(1.7, x)?);
    }
    Ok(())
}
