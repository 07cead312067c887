//! Wakes, branch points, separation and fibers, all at the resolution of a
//! finite lamination. Anything the lamination cannot settle comes back as
//! undecided.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::angle::{classify, Angle, AngleClass};
use crate::error::{Error, Result};
use crate::lamination::{is_primitive, Containment, Lamination, LandingGroup, Leaf, NodeId, Subwake};
use crate::symbolic::itinerary;

/// Which of the two query angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Input {
    First,
    Second,
}

fn check_interior(theta: &Angle) -> Result<()> {
    if theta.is_zero() || theta.is_one() {
        return Err(Error::InvalidAngle(format!("{theta} is the main root; pick an angle in (0, 1)")));
    }
    Ok(())
}

/// Largest internal-angle denominator worth trying for θ. A ray in a `p/q`
/// subwake cannot have a shorter orbit than `q`.
fn subwake_cap(lam: &Lamination, theta: &Angle) -> u64 {
    let c = classify(theta, lam.degree());
    (c.preperiod + c.period + 1) as u64
}

/// Whether θ lies strictly inside the wake of `node`. Angles of the node
/// itself are not inside; singleton groups have an empty wake.
pub fn in_wake(lam: &Lamination, node: NodeId, theta: &Angle) -> bool {
    match lam.wake(node) {
        Some((lo, hi)) => lo < *theta && *theta < hi && lam.node_of(theta) != Some(node),
        None => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchResult {
    /// The wake of the node where one input lands contains the other input.
    InWake {
        node: NodeId,
        contains: Input,
    },
    ComponentBranch {
        node: usize,
        first: Subwake,
        second: Subwake,
    },
    MisiurewiczBranch {
        node: usize,
        first_gap: usize,
        second_gap: usize,
    },
    Undecided,
}

impl fmt::Display for BranchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchResult::InWake { node, .. } => write!(f, "inwake {node}"),
            BranchResult::ComponentBranch { node, first, second } => {
                write!(f, "branch comp {} {first} {second}", NodeId::Component(*node))
            }
            BranchResult::MisiurewiczBranch { node, first_gap, second_gap } => {
                write!(f, "branch misiu {} {first_gap} {second_gap}", NodeId::Misiurewicz(*node))
            }
            BranchResult::Undecided => write!(f, "undecided"),
        }
    }
}

/// Where the arcs from θ₁ and θ₂ towards the main component meet.
///
/// A periodic angle stands for the center of the component it lands on, so
/// two angles of one component give `InWake` of that component.
pub fn branch_point(lam: &Lamination, theta1: &Angle, theta2: &Angle) -> Result<BranchResult> {
    check_interior(theta1)?;
    check_interior(theta2)?;
    if theta1 == theta2 {
        return Err(Error::InvalidAngle(format!("both angles are {theta1}")));
    }
    let (n1, n2) = (lam.node_of(theta1), lam.node_of(theta2));
    if let (Some(a), Some(b)) = (n1, n2) {
        if a == b {
            return Ok(match a {
                NodeId::Component(_) => BranchResult::InWake { node: a, contains: Input::Second },
                NodeId::Misiurewicz(m) => {
                    let node = lam.misiurewicz(m);
                    BranchResult::MisiurewiczBranch {
                        node: m,
                        first_gap: node.gap_of(theta1),
                        second_gap: node.gap_of(theta2),
                    }
                }
            });
        }
    }
    if let Some(a) = n1 {
        if in_wake(lam, a, theta2) {
            return Ok(BranchResult::InWake { node: a, contains: Input::Second });
        }
    }
    if let Some(b) = n2 {
        if in_wake(lam, b, theta1) {
            return Ok(BranchResult::InWake { node: b, contains: Input::First });
        }
    }
    let c1 = lam.chain(theta1, Containment::Open);
    let c2 = lam.chain(theta2, Containment::Open);
    let deepest = c1.iter().zip(&c2).take_while(|(a, b)| a == b).last().map(|(a, _)| *a);
    let Some(deepest) = deepest else {
        return Ok(BranchResult::Undecided);
    };
    Ok(match deepest {
        NodeId::Component(c) => {
            let s1 = lam.subwake(c, theta1, subwake_cap(lam, theta1));
            let s2 = lam.subwake(c, theta2, subwake_cap(lam, theta2));
            match (s1, s2) {
                (Some(first), Some(second)) if first != second => {
                    BranchResult::ComponentBranch { node: c, first, second }
                }
                _ => BranchResult::Undecided,
            }
        }
        NodeId::Misiurewicz(m) => {
            let node = lam.misiurewicz(m);
            let (g1, g2) = (node.gap_of(theta1), node.gap_of(theta2));
            if g1 != g2 {
                BranchResult::MisiurewiczBranch { node: m, first_gap: g1, second_gap: g2 }
            } else {
                BranchResult::Undecided
            }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// A periodic root pair.
    RayPair(Leaf),
    /// Two rays landing at distinct boundary points of a component, joined
    /// through its interior.
    ComponentCrossing { node: usize, lower: Angle, upper: Angle },
    /// Two rays of one Misiurewicz group. Only produced when preperiodic
    /// witnesses are allowed.
    PreperiodicPair { node: usize, lower: Angle, upper: Angle },
}

/// A separation line given by two circle points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationWitness {
    pub kind: WitnessKind,
    /// The input lying between the two witness angles.
    pub inside: Input,
}

impl SeparationWitness {
    pub fn chord(&self) -> (&Angle, &Angle) {
        match &self.kind {
            WitnessKind::RayPair(l) => (&l.lower, &l.upper),
            WitnessKind::ComponentCrossing { lower, upper, .. } | WitnessKind::PreperiodicPair { lower, upper, .. } => {
                (lower, upper)
            }
        }
    }
}

impl fmt::Display for SeparationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WitnessKind::RayPair(l) => write!(f, "pair {} {}", l.lower, l.upper),
            WitnessKind::ComponentCrossing { node, lower, upper } => {
                write!(f, "comp {} via {lower} {upper}", NodeId::Component(*node))
            }
            WitnessKind::PreperiodicPair { node, lower, upper } => {
                write!(f, "misiu {} via {lower} {upper}", NodeId::Misiurewicz(*node))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separation {
    Witness(SeparationWitness),
    SameClass,
    Undecided,
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Separation::Witness(w) => write!(f, "{w}"),
            Separation::SameClass => write!(f, "same-class"),
            Separation::Undecided => write!(f, "undecided"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessPolicy {
    PeriodicOnly,
    /// Also accept pairs of rays from one Misiurewicz group.
    AllowPreperiodic,
}

/// Finds a separation line between the landing points of θ₁ and θ₂, using
/// periodic rays only.
///
/// Ray-pair witnesses are preferred over component crossings. Among ray
/// pairs the one of least (period, lower angle) wins; among crossings the
/// component of least period, then the least (lower, upper) chord.
pub fn separate(lam: &Lamination, theta1: &Angle, theta2: &Angle) -> Result<Separation> {
    separate_with(lam, theta1, theta2, WitnessPolicy::PeriodicOnly)
}

pub fn separate_with(lam: &Lamination, theta1: &Angle, theta2: &Angle, policy: WitnessPolicy) -> Result<Separation> {
    check_interior(theta1)?;
    check_interior(theta2)?;
    if theta1 == theta2 {
        return Ok(Separation::SameClass);
    }
    let (g1, g2) = (lam.group_of(theta1), lam.group_of(theta2));
    if g1.is_some() && g1 == g2 {
        return Ok(Separation::SameClass);
    }
    if g1.is_none() && g2.is_none() && same_preperiodic_landing(lam, theta1, theta2) {
        return Ok(Separation::SameClass);
    }

    let inside_of = |lo: &Angle, hi: &Angle| {
        let i1 = lo < theta1 && theta1 < hi;
        let i2 = lo < theta2 && theta2 < hi;
        match (i1, i2) {
            (true, false) => Some(Input::First),
            (false, true) => Some(Input::Second),
            _ => None,
        }
    };

    let o1 = lam.component_chain(theta1, Containment::Open);
    let o2 = lam.component_chain(theta2, Containment::Open);
    let s1: BTreeSet<usize> = o1.iter().copied().collect();
    let s2: BTreeSet<usize> = o2.iter().copied().collect();
    let best_pair = s1
        .symmetric_difference(&s2)
        .map(|&c| lam.component(c))
        .filter(|c| c.period > 1)
        .filter(|c| {
            let ends = [&c.root.lower, &c.root.upper];
            !ends.contains(&theta1) && !ends.contains(&theta2)
        })
        .min_by(|a, b| (a.period, &a.root.lower).cmp(&(b.period, &b.root.lower)));
    if let Some(c) = best_pair {
        let inside = inside_of(&c.root.lower, &c.root.upper).expect("symmetric difference separates");
        return Ok(Separation::Witness(SeparationWitness { kind: WitnessKind::RayPair(c.root.clone()), inside }));
    }

    let k1 = lam.component_chain(theta1, Containment::Closed);
    let k2 = lam.component_chain(theta2, Containment::Closed);
    let mut common: Vec<usize> = k1.iter().zip(&k2).take_while(|(a, b)| a == b).map(|(a, _)| *a).collect();
    common.sort_by_key(|&c| (lam.component(c).period, c));
    for c in common {
        if let Some((lower, upper, inside)) = crossing_chord(lam, c, theta1, theta2, g1, g2) {
            return Ok(Separation::Witness(SeparationWitness {
                kind: WitnessKind::ComponentCrossing { node: c, lower, upper },
                inside,
            }));
        }
    }

    if policy == WitnessPolicy::AllowPreperiodic {
        if let Some(w) = preperiodic_witness(lam, theta1, theta2) {
            return Ok(Separation::Witness(w));
        }
    }
    Ok(Separation::Undecided)
}

/// Chord between boundary rays of component `c` with exactly one input
/// strictly inside, avoiding the inputs' own landing points. Ordered by the
/// larger endpoint period, then by endpoints.
fn crossing_chord(
    lam: &Lamination,
    c: usize,
    theta1: &Angle,
    theta2: &Angle,
    g1: Option<LandingGroup>,
    g2: Option<LandingGroup>,
) -> Option<(Angle, Angle, Input)> {
    let (lo, hi) = if theta1 < theta2 { (theta1, theta2) } else { (theta2, theta1) };
    let usable: Vec<(&Angle, LandingGroup)> = lam
        .boundary_rays(c)
        .iter()
        .filter_map(|x| {
            let g = lam.group_of(x).expect("boundary rays are listed");
            (Some(g) != g1 && Some(g) != g2 && x != theta1 && x != theta2).then_some((x, g))
        })
        .collect();
    let between = |x: &Angle| lo < x && x < hi;
    let inner: BTreeSet<LandingGroup> = usable.iter().filter(|(x, _)| between(x)).map(|(_, g)| *g).collect();
    let outer: BTreeSet<LandingGroup> = usable.iter().filter(|(x, _)| !between(x)).map(|(_, g)| *g).collect();
    if inner.is_empty() || outer.is_empty() || (inner.len() == 1 && inner == outer) {
        return None;
    }
    let d = lam.degree();
    let mut best: Option<(u32, &Angle, &Angle)> = None;
    for (i, (x, gx)) in usable.iter().enumerate() {
        for (y, gy) in &usable[i + 1..] {
            if gx == gy || between(x) == between(y) {
                continue;
            }
            let p = classify(x, d).period.max(classify(y, d).period);
            if best.is_none_or(|b| (p, *x, *y) < b) {
                best = Some((p, x, y));
            }
        }
    }
    best.map(|(_, x, y)| {
        let inside = if x < theta1 && theta1 < y { Input::First } else { Input::Second };
        (x.clone(), y.clone(), inside)
    })
}

fn preperiodic_witness(lam: &Lamination, theta1: &Angle, theta2: &Angle) -> Option<SeparationWitness> {
    let c1 = lam.chain(theta1, Containment::Open);
    let c2 = lam.chain(theta2, Containment::Open);
    let mut nodes: BTreeSet<usize> = BTreeSet::new();
    for n in c1.iter().chain(&c2) {
        if let NodeId::Misiurewicz(m) = n {
            nodes.insert(*m);
        }
    }
    let mut best: Option<(u32, u32, Angle, SeparationWitness)> = None;
    for m in nodes {
        let node = lam.misiurewicz(m);
        if node.angles.contains(theta1) || node.angles.contains(theta2) {
            continue;
        }
        let (lo, hi) = (&node.angles[0], &node.angles[node.angles.len() - 1]);
        let in1 = lo < theta1 && theta1 < hi;
        let in2 = lo < theta2 && theta2 < hi;
        let (gap_owner, inside) = match (in1, in2) {
            (true, true) if node.gap_of(theta1) == node.gap_of(theta2) => continue,
            (true, _) => (theta1, Input::First),
            (false, true) => (theta2, Input::Second),
            (false, false) => continue,
        };
        let g = node.gap_of(gap_owner);
        let (lower, upper) = (node.angles[g].clone(), node.angles[g + 1].clone());
        let w =
            SeparationWitness { kind: WitnessKind::PreperiodicPair { node: m, lower: lower.clone(), upper }, inside };
        let key = (node.preperiod, node.period, lower);
        if best.as_ref().is_none_or(|b| (b.0, b.1, &b.2) > (key.0, key.1, &key.2)) {
            best = Some((key.0, key.1, key.2, w));
        }
    }
    best.map(|b| b.3)
}

/// Exact landing test for two preperiodic angles with the same orbit type.
fn same_preperiodic_landing(lam: &Lamination, theta1: &Angle, theta2: &Angle) -> bool {
    let d = lam.degree();
    let (a, b) = (classify(theta1, d), classify(theta2, d));
    if a != b || a.preperiod == 0 {
        return false;
    }
    let len = (a.preperiod + a.period) as usize;
    itinerary(theta1, theta2, d, len) == itinerary(theta1, theta1, d, len)
}

/// Whether θ₁ and θ₂ belong to one combinatorial class: `Some(true)` when
/// they land together, `Some(false)` when a witness separates them.
pub fn same_comb_class(lam: &Lamination, theta1: &Angle, theta2: &Angle) -> Result<Option<bool>> {
    Ok(match separate(lam, theta1, theta2)? {
        Separation::SameClass => Some(true),
        Separation::Witness(_) => Some(false),
        Separation::Undecided => None,
    })
}

/// Two rays landing together, periodic or preperiodic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayPair {
    pub lower: Angle,
    pub upper: Angle,
    pub class: AngleClass,
    pub node: Option<NodeId>,
}

impl fmt::Display for RayPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.lower, self.upper)
    }
}

/// Ray pairs of the lamination whose wake strictly contains θ, outermost
/// first. For a Misiurewicz group the pair bounding θ's gap is reported.
pub fn characteristic_ray_pairs(lam: &Lamination, theta: &Angle) -> Result<Vec<RayPair>> {
    check_interior(theta)?;
    let mut out = Vec::new();
    for node in lam.chain(theta, Containment::Open) {
        match node {
            NodeId::Component(0) => {}
            NodeId::Component(c) => {
                let c0 = lam.component(c);
                out.push(RayPair {
                    lower: c0.root.lower.clone(),
                    upper: c0.root.upper.clone(),
                    class: AngleClass { preperiod: 0, period: c0.period },
                    node: Some(node),
                });
            }
            NodeId::Misiurewicz(m) => {
                let mn = lam.misiurewicz(m);
                if mn.angles.contains(theta) {
                    continue;
                }
                let g = mn.gap_of(theta);
                out.push(RayPair {
                    lower: mn.angles[g].clone(),
                    upper: mn.angles[g + 1].clone(),
                    class: AngleClass { preperiod: mn.preperiod, period: mn.period },
                    node: Some(node),
                });
            }
        }
    }
    Ok(out)
}

/// Largest period accepted for approximating pairs.
pub const APPROX_PERIOD_CAP: u32 = 15;

/// Ray pairs `(θ_m, θ′_m)` accumulating on a primitive root `(θ, θ′)` of
/// period `k` from outside, with `θ − θ_m = d^{−mk}(θ − θ₀)` for an
/// enclosing leaf `(θ₀, θ′₀)`.
///
/// Each pair is certified to land together and to be unlinked with the
/// lamination.
pub fn approximating_pairs(lam: &Lamination, root: &Leaf, count: usize) -> Result<Vec<RayPair>> {
    approximating_pairs_capped(lam, root, count, APPROX_PERIOD_CAP)
}

pub fn approximating_pairs_capped(
    lam: &Lamination,
    root: &Leaf,
    count: usize,
    period_cap: u32,
) -> Result<Vec<RayPair>> {
    let d = lam.degree();
    let c = match lam.group_of(&root.lower) {
        Some(LandingGroup::Root(c)) if lam.component(c).root == *root => c,
        _ => return Err(Error::InvalidAngle(format!("{root} is not a root leaf of the lamination"))),
    };
    if c == 0 || !is_primitive(lam, c) {
        return Err(Error::NotPrimitive(root.to_string()));
    }
    let k = root.period;
    let (theta, theta_p) = (&root.lower, &root.upper);
    let mut orbit = Vec::new();
    let (mut x, mut y) = (theta.clone(), theta_p.clone());
    for _ in 0..k {
        orbit.push(x.clone());
        orbit.push(y.clone());
        x = x.map(d);
        y = y.map(d);
    }
    let scale = BigRational::from_integer(BigInt::from(d.get()).pow(k));
    let enclosing = lam.component_chain(theta, Containment::Open);
    'leaf: for &e in enclosing.iter().rev() {
        let (t0, t0p) = (&lam.component(e).root.lower, &lam.component(e).root.upper);
        if orbit.iter().any(|o| (t0 <= o && o < theta) || (theta_p < o && o <= t0p)) {
            continue;
        }
        let (r, rp) = (theta.to_ratio(), theta_p.to_ratio());
        let mut gap = &r - t0.to_ratio();
        let mut gap_p = t0p.to_ratio() - &rp;
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            gap /= &scale;
            gap_p /= &scale;
            let lo = Angle::frac(&(&r - &gap));
            let hi = Angle::frac(&(&rp + &gap_p));
            let class = classify(&lo, d);
            if class.period > period_cap || classify(&hi, d) != class {
                continue 'leaf;
            }
            let len = (class.preperiod + class.period) as usize;
            if itinerary(&lo, &hi, d, len) != itinerary(&lo, &lo, d, len) || links(lam, &lo, &hi) {
                continue 'leaf;
            }
            out.push(RayPair { lower: lo, upper: hi, class, node: None });
        }
        return Ok(out);
    }
    Err(Error::BoundExceeded(format!("no certified approximating pairs for {root}")))
}

/// Whether the chord `(lo, hi)` crosses some landing group.
fn links(lam: &Lamination, lo: &Angle, hi: &Angle) -> bool {
    let crosses = |angles: &[Angle]| {
        let inside = angles.iter().filter(|a| lo < *a && *a < hi).count();
        let on = angles.iter().filter(|a| *a == lo || *a == hi).count();
        inside > 0 && inside + on < angles.len()
    };
    lam.components().iter().any(|c| crosses(&c.angles())) || lam.misiurewicz_nodes().iter().any(|m| crosses(&m.angles))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapWitness {
    pub index: usize,
    /// Gap endpoints in counterclockwise order; the zero gap wraps through 0.
    pub from: Angle,
    pub to: Angle,
    pub zero: bool,
    /// For a non-zero gap the root pair of least (period, lower) inside it;
    /// for the zero gap the innermost root pair enclosing the node, if any.
    pub witness: Option<Leaf>,
}

pub fn misiurewicz_subwakes(lam: &Lamination, node: usize) -> Result<Vec<GapWitness>> {
    let m = lam.misiurewicz(node);
    let k = m.angles.len();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let (from, to) = (m.angles[i].clone(), m.angles[(i + 1) % k].clone());
        if i == m.zero_gap {
            let witness = lam
                .component_chain(&m.angles[0], Containment::Open)
                .into_iter()
                .rfind(|&c| c != 0 && lam.component(c).root.upper > m.angles[k - 1])
                .map(|c| lam.component(c).root.clone());
            out.push(GapWitness { index: i, from, to, zero: true, witness });
            continue;
        }
        let witness = lam
            .components()
            .iter()
            .filter(|c| from < c.root.lower && c.root.upper < to)
            .min_by(|a, b| (a.period, &a.root.lower).cmp(&(b.period, &b.root.lower)))
            .map(|c| c.root.clone())
            .ok_or_else(|| {
                Error::BoundExceeded(format!("no root pair of period ≤ {} inside gap ({from}, {to})", lam.max_period()))
            })?;
        out.push(GapWitness { index: i, from, to, zero: false, witness: Some(witness) });
    }
    Ok(out)
}

/// Classes of the not-yet-separated relation on a finite set of angles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPartition {
    /// Each class ascending; classes ordered by their least angle.
    pub classes: Vec<Vec<Angle>>,
    /// Pairs with no witness and no common landing point, ascending.
    pub undecided: Vec<(Angle, Angle)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum FiberKey {
    Slot(usize, usize),
    Group(LandingGroup),
}

/// Buckets of an angle: innermost component and position among its boundary
/// rays, plus its landing group. Angles sharing no bucket are separated by a
/// root pair or a chord through a component.
fn fiber_keys(lam: &Lamination, theta: &Angle) -> Vec<FiberKey> {
    let key = |mode: Containment| {
        let c = *lam.component_chain(theta, mode).last().expect("main contains every angle");
        let b = lam.boundary_rays(c);
        let slot = match mode {
            Containment::Right => b.partition_point(|x| x <= theta),
            _ => b.partition_point(|x| x < theta),
        };
        FiberKey::Slot(c, slot)
    };
    match lam.group_of(theta) {
        Some(g @ (LandingGroup::Root(_) | LandingGroup::CoRoot(..))) => {
            vec![key(Containment::Left), key(Containment::Right), FiberKey::Group(g)]
        }
        Some(g) => vec![key(Containment::Open), FiberKey::Group(g)],
        None => vec![key(Containment::Open)],
    }
}

pub fn fiber_partition(lam: &Lamination, angles: &[Angle]) -> Result<FiberPartition> {
    let mut set: Vec<Angle> = angles.to_vec();
    set.sort();
    set.dedup();
    for a in &set {
        check_interior(a)?;
    }
    let mut buckets: BTreeMap<FiberKey, Vec<usize>> = BTreeMap::new();
    for (i, a) in set.iter().enumerate() {
        for k in fiber_keys(lam, a) {
            buckets.entry(k).or_default().push(i);
        }
    }
    let results: Vec<Result<Vec<(usize, usize, bool)>>> = buckets
        .values()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|members| {
            let mut out = Vec::new();
            for (x, &i) in members.iter().enumerate() {
                for &j in &members[x + 1..] {
                    match separate(lam, &set[i], &set[j])? {
                        Separation::SameClass => out.push((i, j, true)),
                        Separation::Undecided => out.push((i, j, false)),
                        Separation::Witness(_) => {}
                    }
                }
            }
            Ok(out)
        })
        .collect();

    let mut parent: Vec<usize> = (0..set.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut undecided = BTreeSet::new();
    for r in results {
        for (i, j, same) in r? {
            if same {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            } else {
                undecided.insert((i.min(j), i.max(j)));
            }
        }
    }
    let mut classes: HashMap<usize, Vec<Angle>> = HashMap::new();
    for (i, a) in set.iter().enumerate() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(a.clone());
    }
    let mut classes: Vec<Vec<Angle>> = classes.into_values().collect();
    classes.sort();
    let undecided = undecided.into_iter().map(|(i, j)| (set[i].clone(), set[j].clone())).collect();
    Ok(FiberPartition { classes, undecided })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Degree;
    use crate::lamination::build;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn lam() -> Lamination {
        build(Degree::QUADRATIC, 6, 3).unwrap()
    }

    fn comp(lam: &Lamination, lo: &str) -> NodeId {
        NodeId::Component(lam.components().iter().position(|c| c.root.lower == a(lo)).unwrap())
    }

    #[test]
    fn wake_examples() {
        let l = lam();
        assert!(in_wake(&l, comp(&l, "1/3"), &a("3/7")));
        assert!(in_wake(&l, comp(&l, "1/7"), &a("9/56")));
        assert!(!in_wake(&l, comp(&l, "1/7"), &a("3/7")));
    }

    #[test]
    fn branch_examples() {
        let l = lam();
        assert_eq!(branch_point(&l, &a("1/7"), &a("3/7")).unwrap().to_string(), "branch comp main 1/3 1/2");
        let r = branch_point(&l, &a("1/3"), &a("3/7")).unwrap();
        assert_eq!(r, BranchResult::InWake { node: comp(&l, "1/3"), contains: Input::Second });
        let r = branch_point(&l, &a("9/56"), &a("11/56")).unwrap();
        assert!(matches!(r, BranchResult::MisiurewiczBranch { first_gap: 0, second_gap: 1, .. }), "{r}");
        assert!(branch_point(&l, &Angle::zero(), &a("1/3")).is_err());
    }

    #[test]
    fn separation_examples() {
        let l = lam();
        assert_eq!(separate(&l, &a("1/7"), &a("2/7")).unwrap(), Separation::SameClass);
        assert_eq!(separate(&l, &a("9/56"), &a("3/7")).unwrap().to_string(), "pair 1/3 2/3");
        assert_eq!(separate(&l, &a("1/7"), &a("5/7")).unwrap().to_string(), "comp main via 0/1 1/3");
        assert_eq!(same_comb_class(&l, &a("1/7"), &a("3/7")).unwrap(), Some(false));
        assert_eq!(same_comb_class(&l, &a("1/3"), &a("2/3")).unwrap(), Some(true));
    }

    #[test]
    fn characteristic_examples() {
        let l = lam();
        let pairs = |x: &str| -> Vec<String> {
            characteristic_ray_pairs(&l, &a(x)).unwrap().iter().map(|p| p.to_string()).collect()
        };
        assert!(pairs("9/56").contains(&"1/7 2/7".to_string()));
        let p = pairs("25/56");
        assert!(p.contains(&"1/3 2/3".to_string()) && p.contains(&"3/7 4/7".to_string()));
        assert_eq!(p[0], "1/3 2/3");
        assert!(pairs("1/5").contains(&"1/7 2/7".to_string()));
    }

    #[test]
    fn approximation_examples() {
        let l = lam();
        let root = l.component(comp_index(&l, "3/7")).root.clone();
        let pairs = approximating_pairs(&l, &root, 3).unwrap();
        assert_eq!(pairs.len(), 3);
        assert!(pairs[0].lower > a("13/31") && pairs[0].upper < a("18/31"));
        for w in pairs.windows(2) {
            assert!(w[0].lower < w[1].lower && w[1].upper < w[0].upper);
            let r = (root.lower.to_ratio() - w[1].lower.to_ratio()) / (root.lower.to_ratio() - w[0].lower.to_ratio());
            assert_eq!(r.to_string(), "1/8");
        }
        assert!(pairs[2].lower < root.lower && root.upper < pairs[2].upper);
        let sat = l.component(comp_index(&l, "1/3")).root.clone();
        assert!(matches!(approximating_pairs(&l, &sat, 2), Err(Error::NotPrimitive(_))));
    }

    fn comp_index(lam: &Lamination, lo: &str) -> usize {
        match comp(lam, lo) {
            NodeId::Component(c) => c,
            _ => unreachable!(),
        }
    }

    #[test]
    fn misiurewicz_examples() {
        let l = build(Degree::QUADRATIC, 10, 3).unwrap();
        let m = |x: &str| match l.node_of(&a(x)).unwrap() {
            NodeId::Misiurewicz(m) => m,
            _ => unreachable!(),
        };
        let gaps = misiurewicz_subwakes(&l, m("1/2")).unwrap();
        assert_eq!(gaps.len(), 1);
        assert!(gaps[0].zero);
        let gaps = misiurewicz_subwakes(&l, m("9/56")).unwrap();
        assert_eq!(gaps.len(), 3);
        assert_eq!(gaps.iter().filter(|g| g.zero).count(), 1);
        assert!(gaps[2].zero && gaps[2].from == a("15/56") && gaps[2].to == a("9/56"));
        for g in gaps.iter().filter(|g| !g.zero) {
            assert!(g.witness.as_ref().unwrap().period <= 10);
        }
    }

    #[test]
    fn fiber_examples() {
        let l = lam();
        let p = fiber_partition(&l, &[a("1/7"), a("2/7"), a("3/7")]).unwrap();
        assert_eq!(p.classes, vec![vec![a("1/7"), a("2/7")], vec![a("3/7")]]);
        let p = fiber_partition(&l, &[a("9/56"), a("11/56"), a("15/56")]).unwrap();
        assert_eq!(p.classes.len(), 1);
        let p = fiber_partition(&l, &[a("1/3"), a("2/3"), a("1/2")]).unwrap();
        assert_eq!(p.classes, vec![vec![a("1/3"), a("2/3")], vec![a("1/2")]]);
        assert!(p.undecided.is_empty());
    }
}
