//! Classification, orbit and kneading sequence of a few angles.
//!
//! `cargo run --example angle_info -- 9/56 3`

use multibrot::symbolic::kneading_sequence;
use multibrot::{classify, Angle, Degree};

fn main() -> multibrot::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let theta: Angle = args.first().map(String::as_str).unwrap_or("9/56").parse()?;
    let d = Degree::new(args.get(1).map(|s| s.parse().unwrap_or(2)).unwrap_or(2))?;

    let class = classify(&theta, d);
    println!("{theta} under multiplication by {d}: preperiod {} period {}", class.preperiod, class.period);
    let mut x = theta.clone();
    let mut orbit = Vec::new();
    for _ in 0..class.preperiod + class.period + 1 {
        orbit.push(x.to_string());
        x = x.map(d);
    }
    println!("orbit {}", orbit.join(" -> "));
    let pre: Vec<String> = theta.preimages(d).iter().map(|a| a.to_string()).collect();
    println!("preimages {}", pre.join(" "));
    if !theta.is_zero() && !theta.is_one() {
        println!("kneading {}", kneading_sequence(&theta, d)?);
    }
    Ok(())
}
