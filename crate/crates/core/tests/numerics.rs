use multibrot::lamination::build_periodic;
use multibrot::numerics::{
    trace_parameter_ray, trace_parameter_ray_with, validate_leaf, validate_leaf_with, TraceOptions, Verdict,
    DEFAULT_DEPTH, DEFAULT_T_MIN,
};
use multibrot::{Angle, Degree};
use num_complex::Complex64;

fn a(s: &str) -> Angle {
    s.parse().unwrap()
}

fn land(d: Degree, s: &str) -> Complex64 {
    trace_parameter_ray(d, &a(s), DEFAULT_DEPTH, DEFAULT_T_MIN).unwrap().landing
}

#[test]
fn root_leaves_land_together() {
    let d = Degree::QUADRATIC;
    let lam = build_periodic(d, 5).unwrap();
    let opts = TraceOptions::default();
    for c in &lam.components()[1..] {
        let pair = [c.root.lower.clone(), c.root.upper.clone()];
        let r = validate_leaf_with(&pair, d, 1e-2, DEFAULT_DEPTH, 1e-30, &opts);
        assert_eq!(r.verdict, Verdict::Valid, "{}: spread {} residuals {:?}", c.root, r.spread, r.residuals);
    }
}

#[test]
fn quarter_rays_land_apart() {
    let r = validate_leaf(&[a("1/4"), a("3/4")], Degree::QUADRATIC, 1e-2);
    assert_eq!(r.verdict, Verdict::Invalid);
    assert!(r.spread > 2.0, "spread {}", r.spread);
}

#[test]
fn misiurewicz_triple_lands_together() {
    let r = validate_leaf(&[a("9/56"), a("11/56"), a("15/56")], Degree::QUADRATIC, 1e-2);
    assert_eq!(r.verdict, Verdict::Valid, "spread {}", r.spread);
    // Preperiod 3, period 3: z_7 = z_4 with z_1 = c.
    let c = r.center;
    let orbit: Vec<Complex64> = std::iter::successors(Some(c), |z| Some(z * z + c)).take(7).collect();
    assert!((orbit[6] - orbit[3]).norm() < 1e-6, "{c}");
}

#[test]
fn conjugate_rays_land_at_conjugates() {
    let d = Degree::QUADRATIC;
    for (x, y) in [("1/7", "6/7"), ("1/5", "4/5"), ("1/6", "5/6")] {
        let (p, q) = (land(d, x), land(d, y));
        assert!((p - q.conj()).norm() < 1e-6, "{x} {p} vs {y} {q}");
    }
}

#[test]
fn cubic_rotation_symmetry() {
    // c ↦ −c maps the cubic parameter plane to itself and shifts angles by 1/2.
    let d = Degree::new(3).unwrap();
    for (x, y) in [("1/8", "5/8"), ("3/8", "7/8"), ("1/4", "3/4"), ("1/26", "7/13")] {
        let (p, q) = (land(d, x), land(d, y));
        assert!((p + q).norm() < 1e-4, "{x} {p} vs {y} {q}");
    }
}

#[test]
fn cubic_root_and_co_root() {
    // The root pair lands at the root; the co-root lands at another boundary
    // point of the same component, here further up the imaginary axis.
    let d = Degree::new(3).unwrap();
    let lam = build_periodic(d, 2).unwrap();
    let c = &lam.components()[1];
    let r = validate_leaf(&[c.root.lower.clone(), c.root.upper.clone()], d, 1e-2);
    assert_eq!(r.verdict, Verdict::Valid, "{:?}", r.landings);
    // z³ + c with a parabolic 2-cycle of multiplier −1 from the main component.
    assert!((r.center - Complex64::new(0.0, 2.0 / 27f64.sqrt() * 2.0)).norm() < 1e-4, "{}", r.center);
    let co = land(d, &c.co_roots[0].to_string());
    assert!(co.re.abs() < 1e-9 && co.im > r.center.im + 0.1, "{co}");
}

#[test]
fn unpolished_trace_is_close() {
    let opts = TraceOptions { polish: false, ..TraceOptions::default() };
    let ray = trace_parameter_ray_with(Degree::QUADRATIC, &a("1/2"), DEFAULT_DEPTH, DEFAULT_T_MIN, &opts).unwrap();
    assert!(!ray.polished);
    assert!((ray.landing - Complex64::new(-2.0, 0.0)).norm() < 1e-3);
}
