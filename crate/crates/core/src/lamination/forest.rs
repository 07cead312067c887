//! Containment forest on wake intervals.

use std::collections::HashMap;

use super::NodeId;
use crate::angle::Angle;

/// How a point is tested against a closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    /// `lo < θ < hi`
    Open,
    /// `lo <= θ <= hi`
    Closed,
    /// The point just below θ: `lo < θ <= hi`.
    Left,
    /// The point just above θ: `lo <= θ < hi`.
    Right,
}

impl Containment {
    pub fn holds(self, lo: &Angle, theta: &Angle, hi: &Angle) -> bool {
        match self {
            Containment::Open => lo < theta && theta < hi,
            Containment::Closed => lo <= theta && theta <= hi,
            Containment::Left => lo < theta && theta <= hi,
            Containment::Right => lo <= theta && theta < hi,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ForestEntry {
    pub node: NodeId,
    pub lo: Angle,
    pub hi: Angle,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Intervals of all nodes, nested by containment. Children are sorted by
/// lower endpoint and pairwise disjoint.
#[derive(Clone, Debug, Default)]
pub struct WakeForest {
    entries: Vec<ForestEntry>,
    roots: Vec<usize>,
    index: HashMap<NodeId, usize>,
}

impl WakeForest {
    /// Nests the intervals. Fails with the first pair found to cross.
    pub fn build(intervals: Vec<(NodeId, Angle, Angle)>) -> Result<WakeForest, (NodeId, NodeId)> {
        let mut order: Vec<usize> = (0..intervals.len()).collect();
        order.sort_by(|&a, &b| {
            let (_, alo, ahi) = &intervals[a];
            let (_, blo, bhi) = &intervals[b];
            alo.cmp(blo).then_with(|| bhi.cmp(ahi))
        });
        let mut entries: Vec<ForestEntry> = Vec::with_capacity(intervals.len());
        let mut roots = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for i in order {
            let (node, lo, hi) = intervals[i].clone();
            while let Some(&top) = stack.last() {
                if entries[top].hi < lo {
                    stack.pop();
                } else {
                    break;
                }
            }
            let id = entries.len();
            let parent = stack.last().copied();
            if let Some(p) = parent {
                if hi > entries[p].hi {
                    return Err((entries[p].node, node));
                }
                entries[p].children.push(id);
            } else {
                roots.push(id);
            }
            entries.push(ForestEntry { node, lo, hi, parent, children: Vec::new() });
            stack.push(id);
        }
        let index = entries.iter().enumerate().map(|(i, e)| (e.node, i)).collect();
        Ok(WakeForest { entries, roots, index })
    }

    pub fn entries(&self) -> &[ForestEntry] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &ForestEntry {
        &self.entries[i]
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn index_of(&self, node: NodeId) -> Option<usize> {
        self.index.get(&node).copied()
    }

    /// Entries whose interval contains θ, outermost first.
    pub fn chain(&self, theta: &Angle, mode: Containment) -> Vec<usize> {
        let mut out = Vec::new();
        let mut level = &self.roots;
        loop {
            let k = level.partition_point(|&c| self.entries[c].lo <= *theta);
            if k == 0 {
                break;
            }
            let c = level[k - 1];
            let e = &self.entries[c];
            if !mode.holds(&e.lo, theta, &e.hi) {
                break;
            }
            out.push(c);
            level = &e.children;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    #[test]
    fn nests_and_walks() {
        let f = WakeForest::build(vec![
            (NodeId::Component(0), Angle::zero(), Angle::one()),
            (NodeId::Component(2), a("1/7"), a("2/7")),
            (NodeId::Component(1), a("1/3"), a("2/3")),
            (NodeId::Component(3), a("3/7"), a("4/7")),
            (NodeId::Misiurewicz(0), a("1/2"), a("1/2")),
        ])
        .unwrap();
        assert_eq!(f.roots().len(), 1);
        let nodes = |c: Vec<usize>| c.into_iter().map(|i| f.entry(i).node).collect::<Vec<_>>();
        assert_eq!(
            nodes(f.chain(&a("1/2"), Containment::Closed)),
            [NodeId::Component(0), NodeId::Component(1), NodeId::Component(3), NodeId::Misiurewicz(0)]
        );
        assert_eq!(nodes(f.chain(&a("3/7"), Containment::Open)), [NodeId::Component(0), NodeId::Component(1)]);
        assert_eq!(nodes(f.chain(&a("3/7"), Containment::Right)).len(), 3);
        assert_eq!(nodes(f.chain(&a("3/7"), Containment::Left)).len(), 2);
    }

    #[test]
    fn rejects_crossing() {
        let r = WakeForest::build(vec![
            (NodeId::Component(1), a("1/3"), a("2/3")),
            (NodeId::Component(2), a("1/2"), a("5/6")),
        ]);
        assert!(r.is_err());
    }
}
