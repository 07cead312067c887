//! Renders the Mandelbrot set with the rays at 1/3, 2/3, 1/7 and 2/7.
//!
//! `cargo run --release --example render_set -- set.png`

use std::fs::File;
use std::io::BufWriter;

use multibrot::render::{set_image, RenderOptions};
use multibrot::Degree;

fn main() -> multibrot::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "set.png".into());
    let d = Degree::QUADRATIC;
    let mut opts = RenderOptions::new(d);
    opts.size = 600;
    opts.overlay_rays = ["1/3", "2/3", "1/7", "2/7"].iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let img = set_image(d, &opts)?;
    img.write_png(BufWriter::new(File::create(&path)?))?;
    for (k, v) in &img.metadata {
        println!("{k}: {v}");
    }
    println!("wrote {path}");
    Ok(())
}
