//! Separation witnesses and the partition of a set of angles into fibers.

use multibrot::lamination::build;
use multibrot::queries::{fiber_partition, separate};
use multibrot::{Angle, Degree};

fn main() -> multibrot::Result<()> {
    let lam = build(Degree::QUADRATIC, 8, 3)?;
    for (a, b) in [("1/7", "2/7"), ("9/56", "3/7"), ("1/7", "5/7"), ("1/4", "3/4")] {
        let (a, b): (Angle, Angle) = (a.parse()?, b.parse()?);
        println!("separate {a} {b}: {}", separate(&lam, &a, &b)?);
    }

    let angles: Vec<Angle> =
        (1..16u64).map(|p| Angle::new(p, 16)).chain((1..7).map(|p| Angle::new(p, 7))).collect::<Result<_, _>>()?;
    let part = fiber_partition(&lam, &angles)?;
    for class in &part.classes {
        let names: Vec<String> = class.iter().map(|a| a.to_string()).collect();
        println!("{{{}}}", names.join(", "));
    }
    println!("{} undecided pairs", part.undecided.len());
    Ok(())
}
