//! Hille–Tamarkin norms: a finite admissible case and the divergent boundary.

use mubarg::kernel_transform::{ht_norm, HtConfig, HtValue, TransformSpec};
use mubarg::measures::Parity;

fn main() -> mubarg::Result<()> {
    let config = HtConfig::default();
    for &(p, q, a) in &[(4.0, 2.0, 1.2), (2.0, 4.0, 1.5), (2.0, 2.0, 0.0)] {
        for &mu in &[0.0, 0.5] {
            let spec = TransformSpec::new(Parity::Even, p, q, a, mu)?;
            let start = std::time::Instant::now();
            let result = ht_norm(&spec, &config)?;
            let elapsed = start.elapsed().as_secs_f64();
            match result.value {
                HtValue::Finite { value } => println!(
                    "(p, q, a) = ({p}, {q}, {a}), mu = {mu}: {value:.10} (refinement gap {:.1e}, {elapsed:.2} s)",
                    result.refinement_gap
                ),
                HtValue::Divergent { partial_integrals, .. } => println!(
                    "(p, q, a) = ({p}, {q}, {a}), mu = {mu}: divergent, partial integrals {partial_integrals:?} ({elapsed:.2} s)"
                ),
            }
        }
    }
    Ok(())
}
