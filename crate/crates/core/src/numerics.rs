//! Escape-time iteration and Newton continuation of parameter rays.
//!
//! A point `c` on the parameter ray at angle θ and potential `t` solves
//! `z_k(c) = exp(d^{k−1}·t + 2πi·d^{k−1}·θ)` where `z_1 = c` and
//! `z_{j+1} = z_j^d + c`, for any `k` with `d^{k−1}·t` large. The fractional
//! part of `d^{k−1}·θ` is taken exactly.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::angle::{classify, Angle, Degree};
use crate::error::{Error, Result};

pub type ComplexPoint = Complex64;

/// Outcome of iterating the critical orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Escape {
    /// First index `k` with `|z_k| > R`, counting `z_0 = 0`.
    Escaped(u32),
    Bounded,
}

/// `max(2^{1/(d−1)}, |c|) + 1`: beyond this radius the orbit escapes monotonically.
pub fn default_escape_radius(c: ComplexPoint, d: Degree) -> f64 {
    2f64.powf(1.0 / (d.get() - 1) as f64).max(c.norm()) + 1.0
}

pub fn escape_iterations(c: ComplexPoint, d: Degree, max_iter: u32, escape_radius: f64) -> Escape {
    let r2 = escape_radius * escape_radius;
    let mut z = Complex64::new(0.0, 0.0);
    for k in 1..=max_iter {
        z = z.powu(d.get()) + c;
        if z.norm_sqr() > r2 {
            return Escape::Escaped(k);
        }
    }
    Escape::Bounded
}

/// Continuation parameters. The defaults trace to potential `1e-250`, deep
/// enough for rays landing at parabolic parameters.
#[derive(Clone, Debug)]
pub struct TraceOptions {
    /// `|c|` at the starting potential.
    pub start_radius: f64,
    /// Accepted points per unit of `log_d` potential.
    pub sharpness: u32,
    pub newton_tol: f64,
    pub max_newton: u32,
    /// How often a failed step may be halved before giving up.
    pub retry_cap: u32,
    /// Number of final points whose diameter is reported as residual.
    pub tail: usize,
    /// Refine the landing estimate on the exact landing equations.
    pub polish: bool,
}

impl Default for TraceOptions {
    fn default() -> TraceOptions {
        TraceOptions {
            start_radius: 65536.0,
            sharpness: 8,
            newton_tol: 1e-12,
            max_newton: 64,
            retry_cap: 40,
            tail: 8,
            polish: true,
        }
    }
}

pub const DEFAULT_T_MIN: f64 = 1e-250;
pub const DEFAULT_DEPTH: u32 = 4096;

#[derive(Clone, Debug)]
pub struct TracedRay {
    pub angle: Angle,
    pub degree: Degree,
    /// Strictly decreasing.
    pub potentials: Vec<f64>,
    pub points: Vec<ComplexPoint>,
    /// Last point, or its polished refinement when `polished` is set.
    pub landing: ComplexPoint,
    /// Diameter of the final `tail` points.
    pub residual: f64,
    pub polished: bool,
}

impl TracedRay {
    /// One `t=… c=… …` line per point and a final `land=… resid=…` line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (t, c) in self.potentials.iter().zip(&self.points) {
            s.push_str(&format!("t={t:e} c={:.12} {:.12}\n", c.re, c.im));
        }
        s.push_str(&format!("land={:.12} {:.12} resid={:e}\n", self.landing.re, self.landing.im, self.residual));
        s
    }

    fn finish(angle: Angle, degree: Degree, potentials: Vec<f64>, points: Vec<ComplexPoint>, tail: usize) -> TracedRay {
        let last = &points[points.len().saturating_sub(tail.max(1))..];
        let residual = last.iter().flat_map(|a| last.iter().map(move |b| (a - b).norm())).fold(0.0, f64::max);
        let landing = *points.last().expect("at least the starting point");
        TracedRay { angle, degree, potentials, points, landing, residual, polished: false }
    }
}

/// Exact fractional parts of `d^j·θ`, extended on demand.
struct AngleOrbit {
    d: Degree,
    turns: Vec<f64>,
    current: Angle,
}

impl AngleOrbit {
    fn new(theta: &Angle, d: Degree) -> AngleOrbit {
        AngleOrbit { d, turns: vec![theta.to_f64()], current: theta.clone() }
    }

    fn turn(&mut self, j: usize) -> f64 {
        while self.turns.len() <= j {
            self.current = self.current.map(self.d);
            self.turns.push(self.current.to_f64());
        }
        self.turns[j]
    }
}

/// Smallest `k` with `d^{k−1}·t >= ln R`.
fn depth_for(t: f64, d: f64, log_r: f64) -> u32 {
    if t >= log_r {
        return 1;
    }
    ((log_r / t).ln() / d.ln()).ceil() as u32 + 1
}

fn newton(c0: ComplexPoint, target: ComplexPoint, k: u32, d: u32, opts: &TraceOptions) -> Option<ComplexPoint> {
    const SCALE: f64 = 1e100;
    let mut c = c0;
    for _ in 0..opts.max_newton {
        let mut z = c;
        // dz = dz_m · SCALE^e, rescaled to avoid overflow deep in the ray.
        let mut dz = Complex64::new(1.0, 0.0);
        let mut e = 0i32;
        let mut unit = 1.0;
        for _ in 1..k {
            dz = z.powu(d - 1) * dz * d as f64 + unit;
            z = z.powu(d) + c;
            if dz.norm() > SCALE {
                dz /= SCALE;
                unit /= SCALE;
                e += 1;
            }
        }
        // Newton on log z_k keeps the iteration well behaved far from the root.
        let mut step = (z / target).ln() * z / dz;
        for _ in 0..e {
            step /= SCALE;
        }
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        // Far out z_k ≈ c^{d^{k−1}}, so the step is taken in log c; the
        // additive step would overshoot through the origin.
        if c.norm() > 2.0 {
            c *= (-step / c).exp();
        } else {
            c -= step;
        }
        if step.norm() <= opts.newton_tol * (1.0 + c.norm()) {
            return Some(c);
        }
    }
    None
}

/// Whether the last `tail` points agree to within a few ulps.
fn converged(points: &[ComplexPoint], tail: usize) -> bool {
    if tail < 2 || points.len() < tail {
        return false;
    }
    let last = &points[points.len() - tail..];
    let scale = 1.0 + last[0].norm();
    last.iter().all(|p| (p - last[0]).norm() <= 64.0 * f64::EPSILON * scale)
}

/// Traces the parameter ray at θ from the starting potential down to `t_min`,
/// using equations of depth at most `depth`.
pub fn trace_parameter_ray(d: Degree, theta: &Angle, depth: u32, t_min: f64) -> Result<TracedRay> {
    trace_parameter_ray_with(d, theta, depth, t_min, &TraceOptions::default())
}

pub fn trace_parameter_ray_with(
    d: Degree,
    theta: &Angle,
    depth: u32,
    t_min: f64,
    opts: &TraceOptions,
) -> Result<TracedRay> {
    assert!(depth >= 1 && t_min > 0.0, "depth and t_min must be positive");
    let df = d.get() as f64;
    let log_r = opts.start_radius.ln();
    let t_floor = t_min.max(log_r * df.powi(1 - depth as i32).max(f64::MIN_POSITIVE));
    let mut orbit = AngleOrbit::new(theta, d);

    let mut t = log_r;
    let mut c = Complex64::from_polar(t.exp(), TAU * orbit.turn(0));
    let mut potentials = vec![t];
    let mut points = vec![c];
    let mut factor = df.powf(-1.0 / opts.sharpness as f64);
    'outer: while t > t_floor {
        let mut retries = 0;
        loop {
            let t_next = (t * factor).max(t_floor);
            let k = depth_for(t_next, df, log_r).min(depth);
            let modulus = ((k - 1) as f64 * df.ln() + t_next.ln()).exp().exp();
            let target = Complex64::from_polar(modulus, TAU * orbit.turn(k as usize - 1));
            if let Some(next) = newton(c, target, k, d.get(), opts) {
                t = t_next;
                c = next;
                potentials.push(t);
                points.push(c);
                break;
            }
            retries += 1;
            if retries > opts.retry_cap {
                if converged(&points, opts.tail) {
                    // Deeper equations are beyond double precision here.
                    break 'outer;
                }
                let partial = TracedRay::finish(theta.clone(), d, potentials, points, opts.tail);
                return Err(Error::TraceStalled { potential: t, partial: Box::new(partial) });
            }
            factor = factor.sqrt();
        }
    }
    let mut ray = TracedRay::finish(theta.clone(), d, potentials, points, opts.tail);
    if opts.polish {
        if let Some(c) = polish(&ray) {
            ray.landing = c;
            ray.polished = true;
        }
    }
    Ok(ray)
}

/// Below this end potential the trace is close enough to seed a polish.
const POLISH_MAX_T: f64 = 1e-6;

/// Newton refinement of the landing point on its exact equations: a
/// Misiurewicz relation for preperiodic angles, a parabolic cycle for
/// periodic ones. A refinement is accepted only within three times the
/// distance the trace moved while the potential went from `√t` to `t`.
fn polish(ray: &TracedRay) -> Option<ComplexPoint> {
    let t_end = *ray.potentials.last()?;
    if t_end > POLISH_MAX_T {
        return None;
    }
    let raw = ray.landing;
    let mid = ray.potentials.partition_point(|&t| t > t_end.sqrt()).min(ray.points.len() - 1);
    let guard = 3.0 * (raw - ray.points[mid]).norm() + 1e-12;
    let d = ray.degree;
    let class = classify(&ray.angle, d);
    let candidates: Vec<ComplexPoint> = if class.preperiod > 0 {
        misiurewicz_point(raw, class.preperiod, class.period, d.get()).into_iter().collect()
    } else {
        parabolic_candidates(&ray.angle, class.period, d)
            .into_iter()
            .filter_map(|(m, mu)| parabolic_point(raw, m, mu, d.get()))
            .collect()
    };
    candidates
        .into_iter()
        .filter(|c| (c - raw).norm() <= guard)
        .min_by(|a, b| (a - raw).norm().total_cmp(&(b - raw).norm()))
}

/// Solves `z_{l+n+1}(c) = z_{l+1}(c)` with `z_1 = c`.
fn misiurewicz_point(c0: ComplexPoint, l: u32, n: u32, d: u32) -> Option<ComplexPoint> {
    let mut c = c0;
    for _ in 0..64 {
        let (mut z, mut dz) = (c, Complex64::new(1.0, 0.0));
        let (mut zl, mut dzl) = (z, dz);
        for j in 1..=l + n {
            if j == l + 1 {
                (zl, dzl) = (z, dz);
            }
            dz = z.powu(d - 1) * dz * d as f64 + 1.0;
            z = z.powu(d) + c;
        }
        if l == 0 {
            (zl, dzl) = (c, Complex64::new(1.0, 0.0));
        }
        let step = (z - zl) / (dz - dzl);
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        c -= step;
        if step.norm() <= 1e-15 * (1.0 + c.norm()) {
            return Some(c);
        }
    }
    None
}

/// Candidate `(m, μ)`: a cycle of period `m` dividing `n` with multiplier
/// `μ = e^{2πi p/q}`, `q = n/m`, where multiplication by `d^m` rotates the
/// orbit of θ by `p/q`. `q = 1` is the primitive case.
fn parabolic_candidates(theta: &Angle, n: u32, d: Degree) -> Vec<(u32, ComplexPoint)> {
    let mut out = Vec::new();
    for m in (1..=n).filter(|m| n.is_multiple_of(*m)) {
        let q = (n / m) as usize;
        if q == 1 {
            out.push((m, Complex64::new(1.0, 0.0)));
            continue;
        }
        let mut orbit = vec![theta.clone()];
        for _ in 1..q {
            let mut x = orbit[orbit.len() - 1].clone();
            for _ in 0..m {
                x = x.map(d);
            }
            orbit.push(x);
        }
        let mut sorted = orbit.clone();
        sorted.sort();
        let pos: Vec<usize> = orbit.iter().map(|x| sorted.binary_search(x).expect("present")).collect();
        let p = (pos[1] + q - pos[0]) % q;
        if (0..q).all(|j| pos[(j + 1) % q] == (pos[j] + p) % q) {
            out.push((m, Complex64::from_polar(1.0, TAU * p as f64 / q as f64)));
        }
    }
    out
}

/// Solves `f^m(z) = z`, `(f^m)'(z) = μ` for `(z, c)`, seeding `z` with the
/// point of the critical orbit of `c0` closest to being `m`-periodic.
fn parabolic_point(c0: ComplexPoint, m: u32, mu: ComplexPoint, d: u32) -> Option<ComplexPoint> {
    const ORBIT: usize = 4096;
    let mut orbit = Vec::with_capacity(ORBIT);
    let mut z = Complex64::new(0.0, 0.0);
    for _ in 0..ORBIT {
        z = z.powu(d) + c0;
        if z.norm() > 4.0 + c0.norm() {
            break;
        }
        orbit.push(z);
    }
    let m_us = m as usize;
    let seed = (0..orbit.len().saturating_sub(m_us))
        .min_by(|&i, &j| (orbit[i + m_us] - orbit[i]).norm().total_cmp(&(orbit[j + m_us] - orbit[j]).norm()))?;
    let (mut z, mut c) = (orbit[seed], c0);
    let df = d as f64;
    for _ in 0..64 {
        // w = f^m(z) and its derivatives in z and c.
        let (mut w, mut a, mut b) = (z, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let (mut azz, mut azc) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for _ in 0..m {
            let w1 = w.powu(d - 1) * df;
            let w2 = w.powu(d - 2) * df * (df - 1.0);
            azz = w2 * a * a + w1 * azz;
            azc = w2 * a * b + w1 * azc;
            a = w1 * a;
            b = w1 * b + 1.0;
            w = w.powu(d) + c;
        }
        let (f1, f2) = (w - z, a - mu);
        let (j11, j12, j21, j22) = (a - 1.0, b, azz, azc);
        let det = j11 * j22 - j12 * j21;
        let dz = (f1 * j22 - j12 * f2) / det;
        let dc = (j11 * f2 - j21 * f1) / det;
        if !(dz.re.is_finite() && dz.im.is_finite() && dc.re.is_finite() && dc.im.is_finite()) {
            return None;
        }
        z -= dz;
        c -= dc;
        if dc.norm() <= 1e-15 * (1.0 + c.norm()) && dz.norm() <= 1e-12 * (1.0 + z.norm()) {
            return Some(c);
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid,
    /// Some ray stalled before reaching `t_min`.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub verdict: Verdict,
    pub landings: Vec<ComplexPoint>,
    pub residuals: Vec<f64>,
    /// Largest pairwise distance between landing estimates.
    pub spread: f64,
    /// Mean of the landing estimates.
    pub center: ComplexPoint,
}

/// Traces every ray of a group and checks that they land together.
pub fn validate_leaf(group: &[Angle], d: Degree, tol: f64) -> ValidationReport {
    validate_leaf_with(group, d, tol, DEFAULT_DEPTH, DEFAULT_T_MIN, &TraceOptions::default())
}

pub fn validate_leaf_with(
    group: &[Angle],
    d: Degree,
    tol: f64,
    depth: u32,
    t_min: f64,
    opts: &TraceOptions,
) -> ValidationReport {
    let traces: Vec<Result<TracedRay>> =
        group.par_iter().map(|a| trace_parameter_ray_with(d, a, depth, t_min, opts)).collect();
    let mut stalled = false;
    let mut landings = Vec::with_capacity(group.len());
    let mut residuals = Vec::with_capacity(group.len());
    for t in traces {
        let ray = match t {
            Ok(r) => r,
            Err(Error::TraceStalled { partial, .. }) => {
                stalled = true;
                *partial
            }
            Err(e) => unreachable!("tracing only stalls: {e}"),
        };
        landings.push(ray.landing);
        residuals.push(ray.residual);
    }
    let spread = landings.iter().flat_map(|a| landings.iter().map(move |b| (a - b).norm())).fold(0.0, f64::max);
    let center = landings.iter().sum::<Complex64>() / landings.len().max(1) as f64;
    let verdict = if stalled {
        Verdict::Inconclusive
    } else if spread <= tol && residuals.iter().all(|r| *r < tol) {
        Verdict::Valid
    } else {
        Verdict::Invalid
    };
    ValidationReport { verdict, landings, residuals, spread, center }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    #[test]
    fn escape_examples() {
        let d = Degree::QUADRATIC;
        let r = |c| default_escape_radius(c, d);
        let c0 = Complex64::new(0.0, 0.0);
        assert_eq!(escape_iterations(c0, d, 1000, r(c0)), Escape::Bounded);
        let c = Complex64::new(-2.0, 0.0);
        assert_eq!(escape_iterations(c, d, 1000, r(c)), Escape::Bounded);
        let c = Complex64::new(1.0, 0.0);
        assert!(matches!(escape_iterations(c, d, 1000, r(c)), Escape::Escaped(_)));
    }

    #[test]
    fn misiurewicz_tip() {
        let ray = trace_parameter_ray(Degree::QUADRATIC, &a("1/2"), DEFAULT_DEPTH, 1e-12).unwrap();
        assert!((ray.landing - Complex64::new(-2.0, 0.0)).norm() < 1e-3, "{}", ray.landing);
        assert!(ray.potentials.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn conjugate_rays_mirror() {
        let d = Degree::QUADRATIC;
        let p = trace_parameter_ray(d, &a("1/7"), 200, 1e-8).unwrap();
        let q = trace_parameter_ray(d, &a("6/7"), 200, 1e-8).unwrap();
        assert!((p.landing - q.landing.conj()).norm() < 1e-9);
    }

    #[test]
    fn dump_format() {
        let ray = trace_parameter_ray(Degree::QUADRATIC, &a("1/2"), 10, 1.0).unwrap();
        let text = ray.dump();
        assert!(text.starts_with("t=1.1090354888959125e1 c="));
        assert!(text.lines().last().unwrap().starts_with("land="));
    }

    #[test]
    fn stall_keeps_partial_data() {
        let opts = TraceOptions { max_newton: 0, retry_cap: 2, ..TraceOptions::default() };
        match trace_parameter_ray_with(Degree::QUADRATIC, &a("1/3"), 100, 1e-3, &opts) {
            Err(Error::TraceStalled { partial, .. }) => assert_eq!(partial.points.len(), 1),
            other => panic!("expected a stall, got {other:?}"),
        }
    }
}
