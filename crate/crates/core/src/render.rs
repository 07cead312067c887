//! SVG pictures of laminations and escape-time images of the set.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::angle::{Angle, Degree};
use crate::error::{Error, Result};
use crate::lamination::Lamination;
use crate::numerics::{
    default_escape_radius, escape_iterations, trace_parameter_ray_with, Escape, TraceOptions, TracedRay,
};

/// Axis-aligned rectangle of the parameter plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Viewport {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Viewport> {
        let ok = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) && x_min < x_max && y_min < y_max;
        if !ok {
            return Err(Error::Parse(format!("degenerate viewport {x_min} {x_max} {y_min} {y_max}")));
        }
        Ok(Viewport { x_min, x_max, y_min, y_max })
    }

    /// `[−2.2, 0.8] × [−1.5, 1.5]` for `d = 2`; a square centred at 0 otherwise.
    pub fn default_for(d: Degree) -> Viewport {
        if d.get() == 2 {
            Viewport { x_min: -2.2, x_max: 0.8, y_min: -1.5, y_max: 1.5 }
        } else {
            Viewport { x_min: -1.6, x_max: 1.6, y_min: -1.6, y_max: 1.6 }
        }
    }
}

impl std::fmt::Display for Viewport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {} {}", num(self.x_min), num(self.x_max), num(self.y_min), num(self.y_max))
    }
}

impl std::str::FromStr for Viewport {
    type Err = Error;

    /// `xmin,xmax,ymin,ymax` or the same separated by spaces.
    fn from_str(s: &str) -> Result<Viewport> {
        let v: Vec<f64> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<f64>().map_err(|_| Error::Parse(format!("bad viewport number {p:?}"))))
            .collect::<Result<_>>()?;
        match v[..] {
            [a, b, c, d] => Viewport::new(a, b, c, d),
            _ => Err(Error::Parse(format!("viewport needs four numbers, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Width of the raster in pixels; also the nominal SVG size.
    pub size: u32,
    pub viewport: Viewport,
    /// Stroke colours indexed by period modulo the length.
    pub palette: Vec<String>,
    pub overlay_rays: Vec<Angle>,
    pub stroke_width: f64,
    /// Draw leaves as straight chords instead of geodesics.
    pub straight: bool,
    pub max_iter: u32,
    /// Tracing parameters for overlay rays.
    pub trace_depth: u32,
    pub trace_t_min: f64,
}

impl RenderOptions {
    pub fn new(d: Degree) -> RenderOptions {
        RenderOptions {
            size: 800,
            viewport: Viewport::default_for(d),
            palette: ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            overlay_rays: Vec::new(),
            stroke_width: 0.004,
            straight: false,
            max_iter: 500,
            trace_depth: crate::numerics::DEFAULT_DEPTH,
            trace_t_min: 1e-30,
        }
    }

    fn color(&self, period: u32) -> &str {
        if self.palette.is_empty() {
            "black"
        } else {
            &self.palette[period as usize % self.palette.len()]
        }
    }
}

/// Decimal with 9 significant digits, trailing zeros removed. Values below
/// `1e-12` are rounding noise of circle coordinates and print as 0.
fn num(x: f64) -> String {
    if x.abs() < 1e-12 || !x.is_finite() {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Point of the unit circle at angle θ, with the y axis pointing down.
fn circle_point(theta: &Angle) -> (f64, f64) {
    let a = TAU * theta.to_f64();
    (a.cos(), -a.sin())
}

/// Path segment from the point at `a` to the point at `b`, as a geodesic of
/// the disk (or a straight chord).
fn edge(a: &Angle, b: &Angle, straight: bool) -> String {
    let (p, q) = (circle_point(a), circle_point(b));
    let mut delta = (b.to_f64() - a.to_f64()).rem_euclid(1.0);
    if delta > 0.5 {
        delta = 1.0 - delta;
    }
    let half = delta * TAU / 2.0;
    if straight || (delta - 0.5).abs() < 1e-12 {
        return format!("L{} {}", num(q.0), num(q.1));
    }
    let r = half.tan();
    // Centre of the orthogonal circle lies beyond the chord midpoint.
    let (mx, my) = ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0);
    let m = (mx * mx + my * my).sqrt();
    let dist = 1.0 / half.cos();
    let (cx, cy) = (mx / m * dist, my / m * dist);
    let cross = (p.0 - cx) * (q.1 - cy) - (p.1 - cy) * (q.0 - cx);
    let sweep = u8::from(cross > 0.0);
    format!("A{} {} 0 0 {sweep} {} {}", num(r), num(r), num(q.0), num(q.1))
}

fn tick(theta: &Angle) -> String {
    let (x, y) = circle_point(theta);
    format!("M{} {}L{} {}", num(0.96 * x), num(0.96 * y), num(1.04 * x), num(1.04 * y))
}

/// The lamination as a standalone SVG: root leaves of components, Misiurewicz
/// groups of two or more rays as geodesic polygons, and the degenerate leaf
/// `(0, 1)` as a tick on the circle. Single rays pinch nothing and are left out.
pub fn lamination_svg(lam: &Lamination, opts: &RenderOptions) -> String {
    let w = num(opts.stroke_width);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.1 -1.1 2.2 2.2" width="{0}" height="{0}">"#,
        opts.size
    );
    let _ = writeln!(s, r#"<circle cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="{w}"/>"#);
    for c in lam.components() {
        let (lo, hi) = (&c.root.lower, &c.root.upper);
        let d = if lo.is_zero() && hi.is_one() {
            tick(lo)
        } else {
            let (x, y) = circle_point(lo);
            format!("M{} {}{}", num(x), num(y), edge(lo, hi, opts.straight))
        };
        let _ = writeln!(
            s,
            r#"<path class="leaf p{}" d="{d}" fill="none" stroke="{}" stroke-width="{w}"/>"#,
            c.period,
            opts.color(c.period)
        );
    }
    for m in lam.misiurewicz_nodes().iter().filter(|m| m.angles.len() > 1) {
        let a = &m.angles;
        let class = format!("misiu l{} p{}", m.preperiod, m.period);
        let color = opts.color(m.period);
        let (x, y) = circle_point(&a[0]);
        let mut d = format!("M{} {}", num(x), num(y));
        for i in 0..a.len() {
            d.push_str(&edge(&a[i], &a[(i + 1) % a.len()], opts.straight));
            if a.len() == 2 {
                break;
            }
        }
        if a.len() > 2 {
            d.push('Z');
        }
        let fill = if a.len() > 2 { color } else { "none" };
        let _ = writeln!(
            s,
            r#"<path class="{class}" d="{d}" fill="{fill}" fill-opacity="0.3" stroke="{color}" stroke-width="{w}"/>"#
        );
    }
    s.push_str("</svg>\n");
    s
}

/// One traced overlay ray in pixel coordinates.
#[derive(Clone, Debug)]
pub struct Overlay {
    pub angle: Angle,
    /// Polyline vertices `(x, y)`, pixel units, origin top left.
    pub pixels: Vec<(f64, f64)>,
    pub stalled: bool,
}

/// RGB raster with text metadata.
#[derive(Clone, Debug)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    /// Row-major RGB bytes.
    pub rgb: Vec<u8>,
    /// Escape counts, `0` for bounded pixels.
    pub counts: Vec<u32>,
    pub overlays: Vec<Overlay>,
    /// Ordered `(key, value)` pairs: `degree`, `viewport`, `rays`, and
    /// `stalled` when some overlay stalled.
    pub metadata: Vec<(String, String)>,
}

const RAY_COLOR: [u8; 3] = [220, 30, 30];

/// Escape-time picture of the set with traced rays drawn on top. A ray that
/// stalls is drawn up to where it stopped and listed under `stalled`.
pub fn set_image(d: Degree, opts: &RenderOptions) -> Result<Image> {
    if opts.size == 0 {
        return Err(Error::Parse("image size must be positive".into()));
    }
    let vp = opts.viewport;
    let width = opts.size;
    let height = ((opts.size as f64) * (vp.y_max - vp.y_min) / (vp.x_max - vp.x_min)).round().max(1.0) as u32;
    let dx = (vp.x_max - vp.x_min) / width as f64;
    let dy = (vp.y_max - vp.y_min) / height as f64;

    let rows: Vec<Vec<u32>> = (0..height)
        .into_par_iter()
        .map(|j| {
            let y = vp.y_max - (j as f64 + 0.5) * dy;
            (0..width)
                .map(|i| {
                    let c = Complex64::new(vp.x_min + (i as f64 + 0.5) * dx, y);
                    match escape_iterations(c, d, opts.max_iter, default_escape_radius(c, d)) {
                        Escape::Escaped(k) => k,
                        Escape::Bounded => 0,
                    }
                })
                .collect()
        })
        .collect();
    let counts: Vec<u32> = rows.into_iter().flatten().collect();
    let mut rgb = Vec::with_capacity(counts.len() * 3);
    for &k in &counts {
        let v = if k == 0 { 0 } else { 255 - ((k as f64).ln() / (opts.max_iter as f64).ln() * 200.0) as u8 };
        rgb.extend_from_slice(&[v, v, v]);
    }

    let topts = TraceOptions::default();
    let traces: Vec<(Angle, bool, Option<TracedRay>)> = opts
        .overlay_rays
        .par_iter()
        .map(|a| match trace_parameter_ray_with(d, a, opts.trace_depth, opts.trace_t_min, &topts) {
            Ok(r) => (a.clone(), false, Some(r)),
            Err(Error::TraceStalled { partial, .. }) => (a.clone(), true, Some(*partial)),
            Err(_) => (a.clone(), true, None),
        })
        .collect();
    let to_pixel = |c: Complex64| ((c.re - vp.x_min) / dx, (vp.y_max - c.im) / dy);
    let mut overlays = Vec::with_capacity(traces.len());
    for (angle, stalled, ray) in traces {
        let mut pixels: Vec<(f64, f64)> = Vec::new();
        if let Some(ray) = ray {
            pixels = ray.points.iter().map(|&c| to_pixel(c)).collect();
            if ray.polished {
                pixels.push(to_pixel(ray.landing));
            }
        }
        for w in pixels.windows(2) {
            draw_segment(&mut rgb, width, height, w[0], w[1]);
        }
        overlays.push(Overlay { angle, pixels, stalled });
    }

    let rays: Vec<String> = opts.overlay_rays.iter().map(|a| a.to_string()).collect();
    let mut metadata = vec![
        ("degree".to_string(), d.to_string()),
        ("viewport".to_string(), vp.to_string()),
        ("rays".to_string(), rays.join(" ")),
    ];
    let stalled: Vec<String> = overlays.iter().filter(|o| o.stalled).map(|o| o.angle.to_string()).collect();
    if !stalled.is_empty() {
        metadata.push(("stalled".to_string(), stalled.join(" ")));
    }
    Ok(Image { width, height, rgb, counts, overlays, metadata })
}

/// Draws the part of a segment inside the raster, one sample per pixel step.
fn draw_segment(rgb: &mut [u8], width: u32, height: u32, a: (f64, f64), b: (f64, f64)) {
    let (w, h) = (width as f64, height as f64);
    let outside = |p: (f64, f64)| p.0 < 0.0 || p.0 >= w || p.1 < 0.0 || p.1 >= h;
    if outside(a) && outside(b) && (a.0.max(b.0) < 0.0 || a.0.min(b.0) >= w || a.1.max(b.1) < 0.0 || a.1.min(b.1) >= h)
    {
        return;
    }
    let len = (b.0 - a.0).abs().max((b.1 - a.1).abs()).min(4.0 * (w + h));
    let steps = len.ceil().max(1.0) as usize;
    for s in 0..=steps {
        let f = s as f64 / steps as f64;
        let p = (a.0 + f * (b.0 - a.0), a.1 + f * (b.1 - a.1));
        if !outside(p) {
            let idx = 3 * (p.1 as usize * width as usize + p.0 as usize);
            rgb[idx..idx + 3].copy_from_slice(&RAY_COLOR);
        }
    }
}

impl Image {
    /// PNG with one `tEXt` chunk per metadata entry.
    pub fn write_png<W: Write>(&self, out: W) -> Result<()> {
        let mut enc = png::Encoder::new(out, self.width, self.height);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        for (k, v) in &self.metadata {
            enc.add_text_chunk(k.clone(), v.clone()).map_err(png_err)?;
        }
        let mut w = enc.write_header().map_err(png_err)?;
        w.write_image_data(&self.rgb).map_err(png_err)?;
        w.finish().map_err(png_err)
    }

    /// Binary PPM with the metadata as `# key=value` header comments.
    pub fn write_ppm<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "P6")?;
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}={v}")?;
        }
        writeln!(out, "{} {}\n255", self.width, self.height)?;
        out.write_all(&self.rgb)?;
        Ok(())
    }
}

fn png_err(e: png::EncodingError) -> Error {
    match e {
        png::EncodingError::IoError(io) => Error::Io(io),
        other => Error::InternalConsistency(format!("png encoding: {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::build_periodic;

    #[test]
    fn number_format() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-0.5), "-0.5");
        assert_eq!(num(1.0 / 3.0), "0.333333333");
        assert_eq!(num(123.456789012), "123.456789");
        assert_eq!(num(6.123233995736766e-17), "0");
    }

    #[test]
    fn period_three_leaves() {
        let lam = build_periodic(Degree::QUADRATIC, 3).unwrap();
        let svg = lamination_svg(&lam, &RenderOptions::new(Degree::QUADRATIC));
        assert!(svg.contains(r#"viewBox="-1.1 -1.1 2.2 2.2""#));
        assert_eq!(svg.matches(r#"class="leaf"#).count(), 5);
        let line = svg.lines().find(|l| l.contains("leaf p2")).unwrap();
        assert!(line.contains(r#"d="M-0.5 -0.866025404A1.73205081 1.73205081 0 0 1 -0.5 0.866025404""#), "{line}");
        assert!(svg.contains(r#"d="M0.96 0L1.04 0""#));
        let p3 = svg.lines().filter(|l| l.contains("leaf p3")).count();
        assert_eq!(p3, 3);
    }

    #[test]
    fn antipodal_is_diameter() {
        let e = edge(&"1/4".parse().unwrap(), &"3/4".parse().unwrap(), false);
        assert_eq!(e, "L0 1");
        let e = edge(&"1/8".parse().unwrap(), &"1/4".parse().unwrap(), false);
        assert!(e.starts_with('A'));
    }

    #[test]
    fn straight_option() {
        let lam = build_periodic(Degree::QUADRATIC, 4).unwrap();
        let mut o = RenderOptions::new(Degree::QUADRATIC);
        o.straight = true;
        assert!(!lamination_svg(&lam, &o).contains('A'));
    }

    #[test]
    fn viewport_parse() {
        let v: Viewport = "-2.2,0.8,-1.5,1.5".parse().unwrap();
        assert_eq!(v, Viewport::default_for(Degree::QUADRATIC));
        assert!("1,0,0,1".parse::<Viewport>().is_err());
        assert!("1,2,3".parse::<Viewport>().is_err());
    }
}
