//! Where the paths from two angles towards the main component meet.

use multibrot::lamination::build;
use multibrot::queries::branch_point;
use multibrot::{Angle, Degree};

fn main() -> multibrot::Result<()> {
    let lam = build(Degree::QUADRATIC, 8, 3)?;
    let pairs = [("1/7", "3/7"), ("1/3", "3/7"), ("1/7", "2/7"), ("9/56", "11/56"), ("1/5", "2/9"), ("1/15", "3/7")];
    for (a, b) in pairs {
        let (a, b): (Angle, Angle) = (a.parse()?, b.parse()?);
        println!("{a:>5} {b:>5}  {}", branch_point(&lam, &a, &b)?);
    }
    Ok(())
}
