//! Writes the lamination up to period 7 as an SVG.
//!
//! `cargo run --example render_lamination -- lamination.svg`

use multibrot::lamination::build;
use multibrot::render::{lamination_svg, RenderOptions};
use multibrot::Degree;

fn main() -> multibrot::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "lamination.svg".into());
    let d = Degree::QUADRATIC;
    let lam = build(d, 7, 2)?;
    std::fs::write(&path, lamination_svg(&lam, &RenderOptions::new(d)))?;
    println!("wrote {path}");
    Ok(())
}
