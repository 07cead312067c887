//! Ray pairs accumulating on primitive roots, and how fast they approach.

use multibrot::lamination::{build, is_primitive};
use multibrot::queries::approximating_pairs;
use multibrot::Degree;

fn main() -> multibrot::Result<()> {
    let lam = build(Degree::QUADRATIC, 6, 2)?;
    for (i, c) in lam.components().iter().enumerate().skip(1) {
        if c.period > 4 || !is_primitive(&lam, i) {
            continue;
        }
        let pairs = approximating_pairs(&lam, &c.root, 3)?;
        println!("root ({}, {}) period {}", c.root.lower, c.root.upper, c.period);
        let gaps: Vec<f64> = pairs.iter().map(|p| c.root.lower.to_f64() - p.lower.to_f64()).collect();
        for (p, g) in pairs.iter().zip(&gaps) {
            println!("  ({}, {})  gap {g:.3e}", p.lower, p.upper);
        }
        println!("  ratio {:.6}", gaps[1] / gaps[0]);
    }
    Ok(())
}
