//! Root pairs of subwakes at rational internal angles.
//!
//! A rotation by `p/q` on a sector of a component is read off as `q` words of
//! `q` symbols; each symbol is then replaced by the period block of the
//! corresponding angle of the component.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Attachment, ComponentNode, InternalAngle, Lamination, Leaf};
use crate::angle::{Angle, Degree};

/// Subwake of a component: the arc `sector` between two of its angles and an
/// internal angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subwake {
    pub sector: u32,
    pub angle: InternalAngle,
}

impl fmt::Display for Subwake {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.angle.numer(), self.angle.denom())
    }
}

/// Root leaf of the subwake of `node` at internal angle `pq` in the arc
/// between its first two angles.
pub fn bifurcation_angles(node: &ComponentNode, d: Degree, pq: InternalAngle) -> Leaf {
    bifurcation_leaf(d, node, 0, pq)
}

/// Root leaf of the subwake of `node` at internal angle `pq` in `sector`.
///
/// # Panics
/// If `pq` is not in `(0, 1)` or `sector` is not an arc of `node`.
pub fn bifurcation_leaf(d: Degree, node: &ComponentNode, sector: u32, pq: InternalAngle) -> Leaf {
    let (p, q) = (*pq.numer(), *pq.denom());
    assert!(q >= 2 && p > 0 && p < q, "internal angle must lie in (0, 1)");
    assert!((sector as usize) < node.co_roots.len() + 1, "no such sector");

    let n = node.period;
    let block_base = BigUint::from(d.get()).pow(n);
    let full = &block_base - 1u32;
    let blocks: Vec<BigUint> = node.angles().iter().map(|a| a.numer() * (&full / a.denom())).collect();

    let digit = |i: u64| sector as usize + usize::from(i > q - p);
    let mut words: Vec<BigUint> = (1..=q)
        .map(|i| {
            let mut v = BigUint::zero();
            for k in 0..q {
                let idx = (i - 1 + k * p) % q + 1;
                v = v * &block_base + &blocks[digit(idx)];
            }
            v
        })
        .collect();
    words.sort();
    let (lo, hi) = words
        .windows(2)
        .min_by(|a, b| (&a[1] - &a[0]).cmp(&(&b[1] - &b[0])))
        .map(|w| (w[0].clone(), w[1].clone()))
        .expect("q >= 2");
    let den = block_base.pow(q as u32) - BigUint::one();
    let angle = |v: BigUint| Angle::from_biguint(v, den.clone()).expect("value below denominator");
    Leaf::new(angle(lo), angle(hi), n * q as u32)
}

/// Whether component `i` is primitive, i.e. not a bifurcation from the
/// boundary of its parent. Main counts as primitive.
pub fn is_primitive(lam: &Lamination, i: usize) -> bool {
    lam.component(i).attachment.is_none()
}

pub(crate) fn attachment(d: Degree, parent: &ComponentNode, child: &ComponentNode) -> Option<Attachment> {
    if !child.period.is_multiple_of(parent.period) {
        return None;
    }
    let q = (child.period / parent.period) as u64;
    if q < 2 {
        return None;
    }
    let sector = sector_of(parent, &child.root.lower)?;
    (1..q).filter(|p| p.gcd(&q) == 1).find_map(|p| {
        let angle = InternalAngle::new(p, q);
        (bifurcation_leaf(d, parent, sector, angle) == child.root).then_some(Attachment { sector, angle })
    })
}

/// Index of the arc of `node` strictly containing θ.
fn sector_of(node: &ComponentNode, theta: &Angle) -> Option<u32> {
    let angles = node.angles();
    if *theta <= angles[0] || *theta >= angles[angles.len() - 1] || angles.binary_search(theta).is_ok() {
        return None;
    }
    Some((angles.partition_point(|a| a < theta) - 1) as u32)
}

/// Stern–Brocot search for the subwake whose closed root interval contains θ.
pub(crate) fn find_subwake(d: Degree, node: &ComponentNode, theta: &Angle, max_q: u64) -> Option<Subwake> {
    let sector = sector_of(node, theta)?;
    let (mut left, mut right) = ((0u64, 1u64), (1u64, 1u64));
    loop {
        let m = (left.0 + right.0, left.1 + right.1);
        if m.1 > max_q {
            return None;
        }
        let angle = InternalAngle::new(m.0, m.1);
        let leaf = bifurcation_leaf(d, node, sector, angle);
        if *theta < leaf.lower {
            right = m;
        } else if *theta > leaf.upper {
            left = m;
        } else {
            return Some(Subwake { sector, angle });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn main_node(d: Degree) -> ComponentNode {
        let dd = d.get() as u64;
        ComponentNode {
            period: 1,
            root: Leaf::new(Angle::zero(), Angle::one(), 1),
            co_roots: (1..dd - 1).map(|j| Angle::new(j, dd - 1).unwrap()).collect(),
            parent: None,
            attachment: None,
        }
    }

    #[test]
    fn main_cardioid_bifurcations() {
        let d = Degree::QUADRATIC;
        let m = main_node(d);
        let leaf = |p, q| {
            let l = bifurcation_angles(&m, d, InternalAngle::new(p, q));
            (l.lower.to_string(), l.upper.to_string(), l.period)
        };
        assert_eq!(leaf(1, 2), ("1/3".into(), "2/3".into(), 2));
        assert_eq!(leaf(1, 3), ("1/7".into(), "2/7".into(), 3));
        assert_eq!(leaf(2, 3), ("5/7".into(), "6/7".into(), 3));
        assert_eq!(leaf(1, 4), ("1/15".into(), "2/15".into(), 4));
        assert_eq!(leaf(2, 5), ("9/31".into(), "10/31".into(), 5));
    }

    #[test]
    fn tuned_satellites() {
        let d = Degree::QUADRATIC;
        let node = |lo: &str, hi: &str, n| ComponentNode {
            period: n,
            root: Leaf::new(a(lo), a(hi), n),
            co_roots: vec![],
            parent: None,
            attachment: None,
        };
        let half = InternalAngle::new(1, 2);
        let l = bifurcation_angles(&node("1/3", "2/3", 2), d, half);
        assert_eq!((l.lower, l.upper), (a("2/5"), a("3/5")));
        let l = bifurcation_angles(&node("1/7", "2/7", 3), d, half);
        assert_eq!((l.lower, l.upper), (a("10/63"), a("17/63")));
    }

    #[test]
    fn cubic_sectors() {
        let d = Degree::new(3).unwrap();
        let m = main_node(d);
        let l = bifurcation_leaf(d, &m, 0, InternalAngle::new(1, 2));
        assert_eq!((l.lower, l.upper), (a("1/8"), a("3/8")));
        let l = bifurcation_leaf(d, &m, 1, InternalAngle::new(1, 2));
        assert_eq!((l.lower, l.upper), (a("5/8"), a("7/8")));
    }

    #[test]
    fn subwake_search() {
        let d = Degree::QUADRATIC;
        let m = main_node(d);
        let sw = find_subwake(d, &m, &a("1/7"), 10).unwrap();
        assert_eq!(sw.angle, InternalAngle::new(1, 3));
        let sw = find_subwake(d, &m, &a("3/7"), 10).unwrap();
        assert_eq!(sw.angle, InternalAngle::new(1, 2));
        assert!(find_subwake(d, &m, &a("1/1000"), 5).is_none());
    }
}
