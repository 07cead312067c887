//! Traces a few parameter rays of the Mandelbrot set and prints where they land.

use multibrot::numerics::{trace_parameter_ray, DEFAULT_DEPTH, DEFAULT_T_MIN};
use multibrot::{Angle, Degree};

fn main() -> multibrot::Result<()> {
    let d = Degree::QUADRATIC;
    for s in ["0/1", "1/3", "2/3", "1/2", "1/7", "2/7", "9/56", "1/4", "3/4"] {
        let theta: Angle = s.parse()?;
        let ray = trace_parameter_ray(d, &theta, DEFAULT_DEPTH, DEFAULT_T_MIN)?;
        println!(
            "{theta:>5}  land={:+.9} {:+.9}i  resid={:.1e}  points={}",
            ray.landing.re,
            ray.landing.im,
            ray.residual,
            ray.points.len()
        );
    }
    Ok(())
}
