//! Landing groups of rational parameter rays and their wake forest.
//!
//! Periodic rays land in groups of `d` at roots and co-roots of hyperbolic
//! components; preperiodic rays land in groups at Misiurewicz points.

mod bifurcation;
mod build;
mod forest;
mod io;

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;

use crate::angle::{Angle, Degree};
use crate::error::{Error, Result};

pub use bifurcation::{bifurcation_angles, bifurcation_leaf, is_primitive, Subwake};
pub use build::{add_preperiodic, build, build_periodic, check_node_classes};
pub use forest::{Containment, ForestEntry, WakeForest};
pub use io::{load_or_build, read_lamination, write_lamination};

/// Internal angle `p/q` of a subwake.
pub type InternalAngle = Ratio<u64>;

/// A pair of periodic rays landing together.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Leaf {
    pub lower: Angle,
    pub upper: Angle,
    pub period: u32,
}

impl Leaf {
    pub fn new(lower: Angle, upper: Angle, period: u32) -> Leaf {
        debug_assert!(lower < upper);
        Leaf { lower, upper, period }
    }

    /// `lower < θ < upper`
    pub fn strictly_contains(&self, theta: &Angle) -> bool {
        self.lower < *theta && *theta < self.upper
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.lower, self.upper)
    }
}

/// Where a satellite component sits on its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Attachment {
    /// Arc of the parent between its sorted angles `sector` and `sector + 1`.
    pub sector: u32,
    pub angle: InternalAngle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentNode {
    pub period: u32,
    pub root: Leaf,
    pub co_roots: Vec<Angle>,
    /// Innermost component whose wake contains this one.
    pub parent: Option<usize>,
    /// Set for satellites of `parent`.
    pub attachment: Option<Attachment>,
}

impl ComponentNode {
    /// Root, co-roots and upper root angle, ascending.
    pub fn angles(&self) -> Vec<Angle> {
        let mut v = Vec::with_capacity(self.co_roots.len() + 2);
        v.push(self.root.lower.clone());
        v.extend(self.co_roots.iter().cloned());
        v.push(self.root.upper.clone());
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisiurewiczNode {
    pub preperiod: u32,
    pub period: u32,
    /// Ascending.
    pub angles: Vec<Angle>,
    /// Index of the gap containing angle 0. Gap `i` runs from `angles[i]` to
    /// `angles[i + 1]`; the last gap wraps through 0, so this is always
    /// `angles.len() - 1`.
    pub zero_gap: usize,
}

impl MisiurewiczNode {
    /// Index of the gap containing θ, where `angles[i]` counts as the start of
    /// gap `i`.
    pub fn gap_of(&self, theta: &Angle) -> usize {
        let k = self.angles.partition_point(|a| a <= theta);
        if k == 0 {
            self.angles.len() - 1
        } else {
            k - 1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeId {
    Component(usize),
    Misiurewicz(usize),
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Component(0) => write!(f, "main"),
            NodeId::Component(k) => write!(f, "c{k}"),
            NodeId::Misiurewicz(k) => write!(f, "m{k}"),
        }
    }
}

impl std::str::FromStr for NodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<NodeId> {
        let bad = || Error::Parse(format!("bad node id {s:?}"));
        if s == "main" {
            return Ok(NodeId::Component(0));
        }
        let (kind, k) = s.split_at(1.min(s.len()));
        let k: usize = k.parse().map_err(|_| bad())?;
        match kind {
            "c" if k > 0 => Ok(NodeId::Component(k)),
            "m" => Ok(NodeId::Misiurewicz(k)),
            _ => Err(bad()),
        }
    }
}

/// A set of rays landing at one point: a root pair, one co-root, or a
/// Misiurewicz group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LandingGroup {
    Root(usize),
    CoRoot(usize, usize),
    Misiurewicz(usize),
}

/// All landing groups up to a period bound and a preperiod bound.
#[derive(Clone, Debug)]
pub struct Lamination {
    degree: Degree,
    max_period: u32,
    max_preperiod: u32,
    components: Vec<ComponentNode>,
    misiurewicz: Vec<MisiurewiczNode>,
    forest: WakeForest,
    groups: HashMap<Angle, LandingGroup>,
    satellites: Vec<Vec<usize>>,
    boundary: Vec<Vec<Angle>>,
}

impl Lamination {
    /// Checks planarity and derives parents, attachments and the forest.
    /// Components must be sorted by (period, lower) with main first.
    pub(crate) fn assemble(
        degree: Degree,
        max_period: u32,
        max_preperiod: u32,
        mut components: Vec<ComponentNode>,
        misiurewicz: Vec<MisiurewiczNode>,
    ) -> Result<Lamination> {
        let mut groups = HashMap::new();
        let mut claim = |theta: &Angle, g: LandingGroup| {
            if groups.insert(theta.clone(), g).is_some() {
                return Err(Error::InternalConsistency(format!("angle {theta} claimed twice")));
            }
            Ok(())
        };
        for (i, c) in components.iter().enumerate() {
            claim(&c.root.lower, LandingGroup::Root(i))?;
            claim(&c.root.upper, LandingGroup::Root(i))?;
            for (k, a) in c.co_roots.iter().enumerate() {
                claim(a, LandingGroup::CoRoot(i, k))?;
            }
        }
        for (i, m) in misiurewicz.iter().enumerate() {
            for a in &m.angles {
                claim(a, LandingGroup::Misiurewicz(i))?;
            }
        }

        let forest = Self::forest_of(&components, &misiurewicz)?;

        // Every child must sit in one arc of its parent's angle set.
        for e in forest.entries() {
            let Some(p) = e.parent else { continue };
            let pa = node_angles_of(&components, &misiurewicz, forest.entry(p).node);
            let slot = |x: &Angle| pa.partition_point(|a| a < x);
            if slot(&e.lo) != slot(&e.hi) || pa.binary_search(&e.lo).is_ok() {
                return Err(Error::InternalConsistency(format!("{} links with {}", e.node, forest.entry(p).node)));
            }
        }

        for (i, comp) in components.iter_mut().enumerate() {
            let idx = forest.index_of(NodeId::Component(i)).expect("indexed");
            let mut p = forest.entry(idx).parent;
            comp.parent = None;
            while let Some(j) = p {
                if let NodeId::Component(c) = forest.entry(j).node {
                    comp.parent = Some(c);
                    break;
                }
                p = forest.entry(j).parent;
            }
        }
        for i in 1..components.len() {
            let att =
                components[i].parent.and_then(|p| bifurcation::attachment(degree, &components[p], &components[i]));
            components[i].attachment = att;
        }

        let mut satellites = vec![Vec::new(); components.len()];
        for (i, c) in components.iter().enumerate() {
            if let (Some(p), Some(_)) = (c.parent, c.attachment) {
                satellites[p].push(i);
            }
        }
        let boundary = satellites
            .iter()
            .enumerate()
            .map(|(i, sats)| {
                let mut b = components[i].angles();
                for &s in sats {
                    b.push(components[s].root.lower.clone());
                    b.push(components[s].root.upper.clone());
                }
                b.sort();
                b
            })
            .collect();

        Ok(Lamination {
            degree,
            max_period,
            max_preperiod,
            components,
            misiurewicz,
            forest,
            groups,
            satellites,
            boundary,
        })
    }

    pub(crate) fn forest_of(components: &[ComponentNode], misiurewicz: &[MisiurewiczNode]) -> Result<WakeForest> {
        let mut intervals = Vec::with_capacity(components.len() + misiurewicz.len());
        for (i, c) in components.iter().enumerate() {
            intervals.push((NodeId::Component(i), c.root.lower.clone(), c.root.upper.clone()));
        }
        for (i, m) in misiurewicz.iter().enumerate() {
            let lo = m.angles[0].clone();
            let hi = m.angles[m.angles.len() - 1].clone();
            intervals.push((NodeId::Misiurewicz(i), lo, hi));
        }
        WakeForest::build(intervals).map_err(|(a, b)| Error::InternalConsistency(format!("wakes of {a} and {b} cross")))
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn max_period(&self) -> u32 {
        self.max_period
    }

    pub fn max_preperiod(&self) -> u32 {
        self.max_preperiod
    }

    pub fn components(&self) -> &[ComponentNode] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &ComponentNode {
        &self.components[i]
    }

    pub fn misiurewicz_nodes(&self) -> &[MisiurewiczNode] {
        &self.misiurewicz
    }

    pub fn misiurewicz(&self, i: usize) -> &MisiurewiczNode {
        &self.misiurewicz[i]
    }

    pub fn forest(&self) -> &WakeForest {
        &self.forest
    }

    /// Satellite components attached to component `i`.
    pub fn satellites(&self, i: usize) -> &[usize] {
        &self.satellites[i]
    }

    /// Rays landing on the boundary of component `i` within the bound: its own
    /// angles and the root pairs of its satellites, ascending.
    pub fn boundary_rays(&self, i: usize) -> &[Angle] {
        &self.boundary[i]
    }

    pub fn group_of(&self, theta: &Angle) -> Option<LandingGroup> {
        self.groups.get(theta).copied()
    }

    pub fn node_of(&self, theta: &Angle) -> Option<NodeId> {
        self.group_of(theta).map(|g| match g {
            LandingGroup::Root(c) | LandingGroup::CoRoot(c, _) => NodeId::Component(c),
            LandingGroup::Misiurewicz(m) => NodeId::Misiurewicz(m),
        })
    }

    pub fn group_angles(&self, g: LandingGroup) -> Vec<Angle> {
        match g {
            LandingGroup::Root(c) => {
                vec![self.components[c].root.lower.clone(), self.components[c].root.upper.clone()]
            }
            LandingGroup::CoRoot(c, k) => vec![self.components[c].co_roots[k].clone()],
            LandingGroup::Misiurewicz(m) => self.misiurewicz[m].angles.clone(),
        }
    }

    pub fn node_angles(&self, node: NodeId) -> Vec<Angle> {
        node_angles_of(&self.components, &self.misiurewicz, node)
    }

    /// The open wake `(lo, hi)` of a node; `None` for singleton groups.
    pub fn wake(&self, node: NodeId) -> Option<(Angle, Angle)> {
        let e = self.forest.entry(self.forest.index_of(node)?);
        (e.lo < e.hi).then(|| (e.lo.clone(), e.hi.clone()))
    }

    /// Nodes whose interval contains θ, outermost first.
    pub fn chain(&self, theta: &Angle, mode: Containment) -> Vec<NodeId> {
        self.forest.chain(theta, mode).into_iter().map(|i| self.forest.entry(i).node).collect()
    }

    /// Components whose interval contains θ, outermost first.
    pub fn component_chain(&self, theta: &Angle, mode: Containment) -> Vec<usize> {
        self.chain(theta, mode)
            .into_iter()
            .filter_map(|n| match n {
                NodeId::Component(c) => Some(c),
                NodeId::Misiurewicz(_) => None,
            })
            .collect()
    }

    /// The subwake of component `i` containing θ, searched up to `max_q`.
    pub fn subwake(&self, i: usize, theta: &Angle, max_q: u64) -> Option<Subwake> {
        bifurcation::find_subwake(self.degree, &self.components[i], theta, max_q)
    }

    /// Number of angles listed in the lamination.
    pub fn angle_count(&self) -> usize {
        self.groups.len()
    }
}

fn node_angles_of(components: &[ComponentNode], misiurewicz: &[MisiurewiczNode], node: NodeId) -> Vec<Angle> {
    match node {
        NodeId::Component(c) => components[c].angles(),
        NodeId::Misiurewicz(m) => misiurewicz[m].angles.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_ids_round_trip() {
        for id in [NodeId::Component(0), NodeId::Component(7), NodeId::Misiurewicz(0), NodeId::Misiurewicz(12)] {
            assert_eq!(id.to_string().parse::<NodeId>().unwrap(), id);
        }
        assert!("c0".parse::<NodeId>().is_err());
        assert!("x1".parse::<NodeId>().is_err());
    }

    #[test]
    fn gap_convention() {
        let a = |s: &str| s.parse::<Angle>().unwrap();
        let m =
            MisiurewiczNode { preperiod: 3, period: 1, angles: vec![a("9/56"), a("11/56"), a("15/56")], zero_gap: 2 };
        assert_eq!(m.gap_of(&a("9/56")), 0);
        assert_eq!(m.gap_of(&a("10/56")), 0);
        assert_eq!(m.gap_of(&a("11/56")), 1);
        assert_eq!(m.gap_of(&a("1/2")), 2);
        assert_eq!(m.gap_of(&a("1/56")), 2);
    }
}
