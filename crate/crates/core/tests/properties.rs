use std::sync::OnceLock;

use multibrot::lamination::{build, read_lamination, write_lamination, Containment};
use multibrot::numerics::{trace_parameter_ray_with, TraceOptions};
use multibrot::queries::{fiber_partition, separate, Input, Separation};
use multibrot::render::{lamination_svg, RenderOptions, Viewport};
use multibrot::symbolic::{itinerary, kneading_sequence};
use multibrot::{classify, Angle, Degree, Lamination};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn quadratic() -> &'static Lamination {
    static LAM: OnceLock<Lamination> = OnceLock::new();
    LAM.get_or_init(|| build(Degree::QUADRATIC, 8, 3).unwrap())
}

fn cubic() -> &'static Lamination {
    static LAM: OnceLock<Lamination> = OnceLock::new();
    LAM.get_or_init(|| build(Degree::new(3).unwrap(), 5, 2).unwrap())
}

/// Interior rational angle with a modest denominator.
fn angle() -> impl Strategy<Value = Angle> {
    (2u64..2000).prop_flat_map(|q| (1..q, Just(q))).prop_map(|(p, q)| Angle::new(p, q).unwrap())
}

fn degree() -> impl Strategy<Value = Degree> {
    (2u32..6).prop_map(|d| Degree::new(d).unwrap())
}

fn iterate(x: &Angle, d: Degree, k: u32) -> Angle {
    (0..k).fold(x.clone(), |y, _| y.map(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn map_is_multiplication_mod_one(x in angle(), d in degree()) {
        let r = x.to_ratio() * BigRational::from_integer(BigInt::from(d.get()));
        let frac = &r - r.floor();
        prop_assert_eq!(x.map(d).to_ratio(), frac);
    }

    #[test]
    fn display_round_trips(x in angle()) {
        let back: Angle = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn preimages_map_back(x in angle(), d in degree()) {
        let pre = x.preimages(d);
        prop_assert_eq!(pre.len(), d.get() as usize);
        prop_assert!(pre.windows(2).all(|w| w[0] < w[1]));
        for p in pre {
            prop_assert_eq!(p.map(d), x.clone());
        }
    }

    #[test]
    fn classify_is_exact(x in angle(), d in degree()) {
        let c = classify(&x, d);
        let head = iterate(&x, d, c.preperiod);
        prop_assert_eq!(iterate(&head, d, c.period), head.clone());
        for m in 1..c.period {
            prop_assert_ne!(iterate(&head, d, m), head.clone());
        }
        if c.preperiod > 0 {
            let before = iterate(&x, d, c.preperiod - 1);
            prop_assert_ne!(iterate(&before, d, c.period), before);
        }
    }

    #[test]
    fn conjugate_is_involution(x in angle()) {
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        prop_assert_eq!(x.conjugate().to_ratio(), BigRational::one() - x.to_ratio());
        prop_assert_eq!(classify(&x.conjugate(), Degree::QUADRATIC), classify(&x, Degree::QUADRATIC));
    }

    #[test]
    fn quadratic_kneading_is_conjugation_invariant(x in angle()) {
        let d = Degree::QUADRATIC;
        prop_assert_eq!(kneading_sequence(&x, d).unwrap(), kneading_sequence(&x.conjugate(), d).unwrap());
    }

    #[test]
    fn own_itinerary_has_no_star_off_period(x in angle(), d in degree()) {
        let c = classify(&x, d);
        let it = itinerary(&x, &x, d, (c.preperiod + c.period) as usize);
        let stars: Vec<usize> = it.iter().enumerate().filter(|(_, s)| s.to_string() == "★").map(|(i, _)| i + 1).collect();
        if c.preperiod == 0 {
            prop_assert_eq!(stars, vec![c.period as usize]);
        } else {
            prop_assert!(stars.is_empty());
        }
    }

    #[test]
    fn landing_groups_are_conjugation_symmetric(i in any::<prop::sample::Index>()) {
        let lam = quadratic();
        let all: Vec<Angle> = lam.components().iter().flat_map(|c| c.angles())
            .chain(lam.misiurewicz_nodes().iter().flat_map(|m| m.angles.clone()))
            .collect();
        let x = i.get(&all);
        let g = lam.group_of(x).unwrap();
        let mut mirrored: Vec<Angle> = lam.group_angles(g).iter().map(Angle::conjugate).collect();
        mirrored.sort();
        let h = lam.group_of(&x.conjugate()).unwrap();
        let mut other = lam.group_angles(h);
        other.sort();
        // The main root maps to itself with 0 and 1 swapped.
        if !x.is_zero() && !x.is_one() {
            prop_assert_eq!(mirrored, other);
        }
    }

    #[test]
    fn cubic_groups_unlinked(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let lam = cubic();
        let groups: Vec<Vec<Angle>> = lam.components().iter().map(|c| c.angles())
            .chain(lam.misiurewicz_nodes().iter().map(|m| m.angles.clone()))
            .collect();
        let (g, h) = (i.get(&groups), j.get(&groups));
        if g != h {
            // All of h lies in one complementary arc of g; arcs before the
            // first and after the last angle are the same arc.
            let gap = |x: &Angle| g.partition_point(|a| a <= x) % g.len();
            let same = h.iter().all(|x| gap(x) == gap(&h[0]));
            prop_assert!(same, "{:?} links {:?}", g, h);
        }
    }

    #[test]
    fn separation_witness_separates(x in angle(), y in angle()) {
        let lam = quadratic();
        let s1 = separate(lam, &x, &y).unwrap();
        let s2 = separate(lam, &y, &x).unwrap();
        prop_assert_eq!(std::mem::discriminant(&s1), std::mem::discriminant(&s2));
        if let Separation::Witness(w) = s1 {
            let (lo, hi) = w.chord();
            let inside = |t: &Angle| lo < t && t < hi;
            prop_assert!(inside(&x) != inside(&y), "{} does not separate {} {}", w, x, y);
            let expected = if inside(&x) { Input::First } else { Input::Second };
            prop_assert_eq!(w.inside, expected);
        }
    }

    #[test]
    fn chains_are_nested(x in angle()) {
        let lam = quadratic();
        let chain = lam.chain(&x, Containment::Open);
        let wakes: Vec<(Angle, Angle)> = chain.iter().filter_map(|n| lam.wake(*n)).collect();
        for w in wakes.windows(2) {
            prop_assert!(w[0].0 <= w[1].0 && w[1].1 <= w[0].1);
        }
        for (lo, hi) in &wakes {
            prop_assert!(*lo < x && x < *hi || (lo.is_zero() && hi.is_one()));
        }
    }

    #[test]
    fn fiber_partition_ignores_order(mut xs in prop::collection::vec(angle(), 1..24)) {
        let lam = quadratic();
        let p = fiber_partition(lam, &xs).unwrap();
        xs.reverse();
        let dup: Vec<Angle> = xs.iter().chain(&xs).cloned().collect();
        prop_assert_eq!(fiber_partition(lam, &dup).unwrap(), p);
    }

    #[test]
    fn viewport_round_trips(x in -3.0f64..0.0, w in 0.1f64..4.0, y in -3.0f64..0.0, h in 0.1f64..4.0) {
        let v = Viewport::new(x, x + w, y, y + h).unwrap();
        let back: Viewport = v.to_string().parse().unwrap();
        prop_assert_eq!(back.to_string(), v.to_string());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn potentials_decrease(x in angle(), d in 2u32..4) {
        let d = Degree::new(d).unwrap();
        let opts = TraceOptions { polish: false, ..TraceOptions::default() };
        let ray = match trace_parameter_ray_with(d, &x, 4096, 1e-8, &opts) {
            Ok(r) => r,
            Err(multibrot::Error::TraceStalled { partial, .. }) => *partial,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert_eq!(ray.potentials.len(), ray.points.len());
        prop_assert!(ray.potentials.windows(2).all(|w| w[1] < w[0]));
        prop_assert!(ray.points.iter().all(|c| c.re.is_finite() && c.im.is_finite()));
    }

    #[test]
    fn lamination_files_round_trip(d in 2u32..5, n in 1u32..5, l in 0u32..3) {
        let lam = build(Degree::new(d).unwrap(), n, l).unwrap();
        let text = write_lamination(&lam);
        let back = read_lamination(&text).unwrap();
        prop_assert_eq!(write_lamination(&back), text);
    }

    #[test]
    fn svg_is_stable(d in 2u32..5, n in 1u32..6, straight in any::<bool>()) {
        let d = Degree::new(d).unwrap();
        let mut opts = RenderOptions::new(d);
        opts.straight = straight;
        let a = lamination_svg(&build(d, n, 2).unwrap(), &opts);
        let b = lamination_svg(&build(d, n, 2).unwrap(), &opts);
        prop_assert_eq!(&a, &b);
        prop_assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn zero_and_one_stay_apart() {
    let (z, o) = (Angle::zero(), Angle::one());
    assert_ne!(z, o);
    assert!(z.to_ratio().is_zero() && o.to_ratio().is_one());
    assert_eq!(o.map(Degree::QUADRATIC), o);
}
