//! The subwakes of a Misiurewicz group, each with a periodic leaf inside.

use multibrot::lamination::build;
use multibrot::queries::misiurewicz_subwakes;
use multibrot::{Angle, Degree, NodeId};

fn main() -> multibrot::Result<()> {
    let lam = build(Degree::QUADRATIC, 10, 3)?;
    for s in ["9/56", "1/2", "1/4", "5/12"] {
        let theta: Angle = s.parse()?;
        let Some(NodeId::Misiurewicz(m)) = lam.node_of(&theta) else { continue };
        let node = lam.misiurewicz(m);
        let angles: Vec<String> = node.angles.iter().map(|a| a.to_string()).collect();
        println!("{} (l={}, n={}): {}", NodeId::Misiurewicz(m), node.preperiod, node.period, angles.join(" "));
        for g in misiurewicz_subwakes(&lam, m)? {
            let w = g.witness.map(|l| format!("({}, {})", l.lower, l.upper)).unwrap_or_else(|| "-".into());
            let zero = if g.zero { " [zero]" } else { "" };
            println!("  gap {} from {} to {}{zero}  witness {w}", g.index, g.from, g.to);
        }
    }
    Ok(())
}
