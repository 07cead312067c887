use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{ComponentNode, Containment, Lamination, Leaf, MisiurewiczNode, NodeId};
use crate::angle::{classify, periodic_angles, preperiodic_angles, Angle, Degree};
use crate::error::{Error, Result};
use crate::symbolic::{itinerary, kneading_sequence, KneadingSequence};

fn main_component(d: Degree) -> ComponentNode {
    let dd = d.get() as u64;
    ComponentNode {
        period: 1,
        root: Leaf::new(Angle::zero(), Angle::one(), 1),
        co_roots: (1..dd - 1).map(|j| Angle::new(j, dd - 1).expect("j < d-1")).collect(),
        parent: None,
        attachment: None,
    }
}

/// Root pairs and co-roots of all components of period at most `max_period`.
///
/// Each period is processed after all smaller ones: its angles are sorted
/// into the gaps of the lamination built so far, and each gap is cut into
/// runs of `d` consecutive angles.
pub fn build_periodic(d: Degree, max_period: u32) -> Result<Lamination> {
    let components = periodic_components(d, max_period)?;
    Lamination::assemble(d, max_period, 0, components, Vec::new())
}

/// Periodic build followed by the preperiodic groups.
pub fn build(d: Degree, max_period: u32, max_preperiod: u32) -> Result<Lamination> {
    let lam = build_periodic(d, max_period)?;
    if max_preperiod == 0 {
        return Ok(lam);
    }
    add_preperiodic(lam, max_preperiod, max_period)
}

fn periodic_components(d: Degree, max_period: u32) -> Result<Vec<ComponentNode>> {
    if max_period == 0 {
        return Err(Error::InternalConsistency("max period must be at least 1".into()));
    }
    let mut components = vec![main_component(d)];
    let dd = d.get() as usize;
    for n in 2..=max_period {
        let forest = Lamination::forest_of(&components, &[])?;
        let angles = periodic_angles(d, n);
        // Gap key: innermost enclosing component and the arc of it.
        let keys: Vec<(usize, usize)> = angles
            .par_iter()
            .map(|theta| {
                let chain = forest.chain(theta, Containment::Open);
                let NodeId::Component(c) = forest.entry(*chain.last().expect("main contains all")).node else {
                    unreachable!("only components at this stage")
                };
                let arcs = components[c].angles();
                (c, arcs.partition_point(|a| a < theta) - 1)
            })
            .collect();
        let mut gaps: BTreeMap<(usize, usize), Vec<Angle>> = BTreeMap::new();
        for (theta, key) in angles.into_iter().zip(keys) {
            gaps.entry(key).or_default().push(theta);
        }
        let mut fresh = Vec::new();
        for ((c, arc), members) in gaps {
            if members.len() % dd != 0 {
                return Err(Error::InternalConsistency(format!(
                    "{} period-{n} angles in arc {arc} of component {c}",
                    members.len()
                )));
            }
            for group in members.chunks(dd) {
                if dd > 2 {
                    let k0 = kneading_sequence(&group[0], d)?;
                    for x in &group[1..] {
                        if kneading_sequence(x, d)? != k0 {
                            return Err(Error::InternalConsistency(format!(
                                "{} and {x} grouped with different kneading",
                                group[0]
                            )));
                        }
                    }
                }
                fresh.push(ComponentNode {
                    period: n,
                    root: Leaf::new(group[0].clone(), group[dd - 1].clone(), n),
                    co_roots: group[1..dd - 1].to_vec(),
                    parent: None,
                    attachment: None,
                });
            }
        }
        fresh.sort_by(|a, b| a.root.lower.cmp(&b.root.lower));
        components.extend(fresh);
    }
    Ok(components)
}

/// Groups preperiodic angles with preperiod at most `max_preperiod` and
/// period at most `max_period` by landing point.
///
/// Two preperiodic angles land together exactly when they have the same
/// itinerary against the partition of either one. Angles are bucketed by
/// kneading sequence first, then split by that test.
pub fn add_preperiodic(lam: Lamination, max_preperiod: u32, max_period: u32) -> Result<Lamination> {
    let d = lam.degree();
    let mut nodes: Vec<MisiurewiczNode> = Vec::new();
    for l in 1..=max_preperiod {
        for n in 1..=max_period {
            let angles = preperiodic_angles(d, l, n);
            let len = (l + n) as usize;
            let kneads: Vec<KneadingSequence> =
                angles.par_iter().map(|a| kneading_sequence(a, d)).collect::<Result<_>>()?;
            let mut buckets: HashMap<&KneadingSequence, Vec<usize>> = HashMap::new();
            for (i, k) in kneads.iter().enumerate() {
                buckets.entry(k).or_default().push(i);
            }
            let mut buckets: Vec<Vec<usize>> = buckets.into_values().collect();
            buckets.sort();
            let groups: Vec<Vec<Vec<usize>>> = buckets
                .par_iter()
                .map(|bucket| {
                    let mut left = bucket.clone();
                    let mut out = Vec::new();
                    while let Some(&first) = left.first() {
                        let theta = &angles[first];
                        let target = itinerary(theta, theta, d, len);
                        let (same, rest): (Vec<usize>, Vec<usize>) =
                            left.iter().partition(|&&j| j == first || itinerary(theta, &angles[j], d, len) == target);
                        out.push(same);
                        left = rest;
                    }
                    out
                })
                .collect();
            for g in groups.into_iter().flatten() {
                let members: Vec<Angle> = g.iter().map(|&i| angles[i].clone()).collect();
                let k = members.len();
                nodes.push(MisiurewiczNode { preperiod: l, period: n, angles: members, zero_gap: k - 1 });
            }
        }
    }
    nodes.sort_by(|a, b| (a.preperiod, a.period, &a.angles[0]).cmp(&(b.preperiod, b.period, &b.angles[0])));
    let components = lam.components.clone();
    Lamination::assemble(d, lam.max_period(), max_preperiod, components, nodes).map_err(|e| match e {
        Error::InternalConsistency(msg) => Error::BoundExceeded(format!("preperiodic grouping not planar: {msg}")),
        other => other,
    })
}

/// Exact period and preperiod of every angle in a node, checked.
pub fn check_node_classes(lam: &Lamination) -> Result<()> {
    let d = lam.degree();
    for c in lam.components() {
        for a in c.angles() {
            if c.period > 1 && classify(&a, d).period != c.period {
                return Err(Error::InternalConsistency(format!("{a} is not of period {}", c.period)));
            }
        }
    }
    for m in lam.misiurewicz_nodes() {
        for a in &m.angles {
            let cl = classify(a, d);
            if (cl.preperiod, cl.period) != (m.preperiod, m.period) {
                return Err(Error::InternalConsistency(format!("{a} misfiled")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn leaves(lam: &Lamination) -> Vec<(String, String)> {
        lam.components().iter().map(|c| (c.root.lower.to_string(), c.root.upper.to_string())).collect()
    }

    #[test]
    fn quadratic_period_three() {
        let lam = build_periodic(Degree::QUADRATIC, 3).unwrap();
        let got = leaves(&lam);
        let want = [("0/1", "1/1"), ("1/3", "2/3"), ("1/7", "2/7"), ("3/7", "4/7"), ("5/7", "6/7")];
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert_eq!((g.0.as_str(), g.1.as_str()), w);
        }
        check_node_classes(&lam).unwrap();
    }

    #[test]
    fn quadratic_period_four_adds_six() {
        let lam = build_periodic(Degree::QUADRATIC, 4).unwrap();
        assert_eq!(lam.components().iter().filter(|c| c.period == 4).count(), 6);
    }

    #[test]
    fn cubic_main() {
        let lam = build_periodic(Degree::new(3).unwrap(), 1).unwrap();
        assert_eq!(lam.components().len(), 1);
        assert_eq!(lam.component(0).co_roots, vec![a("1/2")]);
        let lam = build_periodic(Degree::new(3).unwrap(), 2).unwrap();
        let c = &lam.components()[1];
        assert_eq!((c.root.lower.clone(), c.co_roots[0].clone(), c.root.upper.clone()), (a("1/8"), a("1/4"), a("3/8")));
    }

    #[test]
    fn misiurewicz_examples() {
        let lam = build(Degree::QUADRATIC, 3, 3).unwrap();
        let find = |x: &str| {
            let NodeId::Misiurewicz(m) = lam.node_of(&a(x)).unwrap() else { panic!("not misiurewicz") };
            lam.misiurewicz(m).angles.clone()
        };
        assert_eq!(find("1/2"), vec![a("1/2")]);
        assert_eq!(find("9/56"), vec![a("9/56"), a("11/56"), a("15/56")]);
        assert_eq!(find("1/4"), vec![a("1/4")]);
        assert_eq!(find("3/4"), vec![a("3/4")]);
        check_node_classes(&lam).unwrap();
    }

    #[test]
    fn satellite_flags() {
        let lam = build_periodic(Degree::QUADRATIC, 4).unwrap();
        let idx = |lo: &str| lam.components().iter().position(|c| c.root.lower == a(lo)).unwrap();
        assert!(!super::super::is_primitive(&lam, idx("1/3")));
        assert!(super::super::is_primitive(&lam, idx("3/7")));
        assert!(super::super::is_primitive(&lam, 0));
        assert!(!super::super::is_primitive(&lam, idx("2/5")));
        assert_eq!(lam.component(idx("2/5")).parent, Some(idx("1/3")));
    }
}
