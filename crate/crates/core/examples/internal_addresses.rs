//! Angled internal addresses read from the lamination, next to the
//! addresses read from kneading sequences.

use multibrot::lamination::build;
use multibrot::symbolic::{address_prefix, kneading_sequence, rho_address};
use multibrot::{Angle, Degree};

fn main() -> multibrot::Result<()> {
    let d = Degree::QUADRATIC;
    let lam = build(d, 10, 3)?;
    for s in ["1/3", "3/7", "1/5", "2/5", "13/31", "9/56", "1/4", "1/2"] {
        let theta: Angle = s.parse()?;
        let prefix = address_prefix(&theta, &lam)?;
        let tail = if prefix.complete { "" } else { " ..." };
        let nu = kneading_sequence(&theta, d)?;
        println!("{theta:>6}  {}{tail}   kneading {nu}   rho {}", prefix.address, rho_address(&nu, 10));
    }
    Ok(())
}
