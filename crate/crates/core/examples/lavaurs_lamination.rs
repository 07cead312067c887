//! Builds the periodic lamination of the Mandelbrot set and lists its leaves.

use multibrot::lamination::{build_periodic, is_primitive, write_lamination};
use multibrot::Degree;

fn main() -> multibrot::Result<()> {
    let lam = build_periodic(Degree::QUADRATIC, 5)?;
    for (i, c) in lam.components().iter().enumerate().skip(1) {
        let kind = if is_primitive(&lam, i) { "primitive" } else { "satellite" };
        println!("period {}  ({}, {})  {kind}", c.period, c.root.lower, c.root.upper);
    }
    println!();
    print!("{}", write_lamination(&lam));

    let cubic = build_periodic(Degree::new(3)?, 2)?;
    for c in cubic.components() {
        let co: Vec<String> = c.co_roots.iter().map(|a| a.to_string()).collect();
        println!("d=3 period {}: root ({}, {}) co-roots {}", c.period, c.root.lower, c.root.upper, co.join(" "));
    }
    Ok(())
}
