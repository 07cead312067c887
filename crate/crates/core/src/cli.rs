//! The `multibrot` command line.
//!
//! Exit status: 0 success, 1 usage or parse error, 2 undecided at the
//! lamination bounds, 3 numerical validation failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::angle::{classify, Angle, Degree};
use crate::error::{Error, Result};
use crate::lamination::{build, load_or_build, write_lamination, Lamination, LandingGroup, NodeId};
use crate::numerics::{
    trace_parameter_ray_with, validate_leaf_with, TraceOptions, TracedRay, Verdict, DEFAULT_DEPTH, DEFAULT_T_MIN,
};
use crate::queries::{
    approximating_pairs, branch_point, in_wake, misiurewicz_subwakes, same_comb_class, separate, BranchResult, Input,
    Separation, WitnessKind,
};
use crate::render::{lamination_svg, set_image, RenderOptions, Viewport};
use crate::symbolic::{address_prefix, kneading_sequence};

pub const CACHE_ENV: &str = "MULTIBROT_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "multibrot", version, about = "Rational parameter rays of Multibrot sets")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    #[arg(long, global = true, default_value_t = 2)]
    pub degree: u32,
    #[arg(long, global = true, default_value_t = 10)]
    pub max_period: u32,
    #[arg(long, global = true, default_value_t = 3)]
    pub max_preperiod: u32,
    /// Directory holding cached laminations.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,
    /// Landing tolerance for numerical validation.
    #[arg(long, global = true, default_value_t = 1e-2)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Facts about one angle.
    Angle {
        #[command(subcommand)]
        what: AngleCmd,
    },
    /// Build or print the lamination.
    Lam {
        #[command(subcommand)]
        what: LamCmd,
    },
    /// Landing group of an angle.
    Pair { angle: String },
    /// Whether the wake of a node (an angle of it, or an id like c3) contains `theta`.
    Wake { node: String, theta: String },
    /// Where the paths from two angles to the main component meet.
    Branch { first: String, second: String },
    /// A periodic ray pair or component chord separating two landing points.
    Separate { first: String, second: String },
    /// Whether two angles land together: same-class, different or undecided.
    Class { first: String, second: String },
    /// Misiurewicz group of an angle with its subwakes.
    Misiu { angle: String },
    /// Ray pairs accumulating on a primitive root from outside.
    Approx {
        lower: String,
        upper: String,
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Trace a parameter ray and dump its points.
    Trace {
        angle: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        #[arg(long, default_value_t = DEFAULT_T_MIN)]
        t_min: f64,
    },
    /// Trace every root leaf up to a period and check common landing.
    Validate {
        #[arg(long, default_value_t = 4)]
        period: u32,
        #[arg(long, default_value_t = 1e-30)]
        t_min: f64,
    },
    /// Draw the lamination or the set.
    Render {
        #[command(subcommand)]
        what: RenderCmd,
    },
}

#[derive(Subcommand, Debug)]
enum AngleCmd {
    Info { angle: String },
}

#[derive(Subcommand, Debug)]
enum LamCmd {
    Build,
    Show,
}

#[derive(Subcommand, Debug)]
enum RenderCmd {
    /// SVG of the lamination, to stdout unless `--out` is given.
    Lam {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        straight: bool,
        #[arg(long, default_value_t = 800)]
        size: u32,
    },
    /// PNG (or PPM, by extension) of the set with rays drawn on top.
    Set {
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated angles to overlay.
        #[arg(long, value_delimiter = ',')]
        rays: Vec<String>,
        /// `xmin,xmax,ymin,ymax`.
        #[arg(long, allow_hyphen_values = true)]
        viewport: Option<String>,
        #[arg(long, default_value_t = 800)]
        size: u32,
        #[arg(long, default_value_t = 500)]
        max_iter: u32,
    },
}

/// One output line: free text, or `key=value` pairs in machine format.
/// Lines that are already a stable file format carry no pairs and print
/// verbatim in both formats.
struct Rec {
    text: String,
    kv: Vec<(&'static str, String)>,
}

fn rec(text: impl Into<String>, kv: Vec<(&'static str, String)>) -> Rec {
    Rec { text: text.into(), kv }
}

enum Outcome {
    Done(Vec<Rec>),
    Undecided(Vec<Rec>, String),
    Failed(Vec<Rec>, String),
}

/// Runs one command line (including the program name) and returns the exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let format = cli.config.format;
    let (records, code, message) = match execute(&cli.config, cli.command) {
        Ok(Outcome::Done(r)) => (r, 0, None),
        Ok(Outcome::Undecided(r, m)) => (r, 2, Some(m)),
        Ok(Outcome::Failed(r, m)) => (r, 3, Some(m)),
        Err(e) => {
            let code = match e {
                Error::BoundExceeded(_) => 2,
                Error::TraceStalled { .. } => 3,
                _ => 1,
            };
            (Vec::new(), code, Some(e.to_string()))
        }
    };
    for r in records {
        let line = match format {
            Format::Text => r.text,
            Format::Machine if r.kv.is_empty() => r.text,
            Format::Machine => r.kv.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "),
        };
        if writeln!(out, "{line}").is_err() {
            return 1;
        }
    }
    if let Some(m) = message {
        let _ = writeln!(err, "multibrot: {m}");
    }
    code
}

fn angle(s: &str) -> Result<Angle> {
    s.parse()
}

fn lamination(cfg: &Config) -> Result<Lamination> {
    let d = Degree::new(cfg.degree)?;
    if cfg.max_period == 0 {
        return Err(Error::Parse("--max-period must be at least 1".into()));
    }
    match &cfg.cache {
        Some(dir) => load_or_build(dir, d, cfg.max_period, cfg.max_preperiod),
        None => build(d, cfg.max_period, cfg.max_preperiod),
    }
}

fn join(angles: &[Angle]) -> String {
    angles.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
}

fn input_name(i: Input) -> String {
    match i {
        Input::First => "first".into(),
        Input::Second => "second".into(),
    }
}

fn execute(cfg: &Config, cmd: Command) -> Result<Outcome> {
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(Error::Parse("--tol must be positive".into()));
    }
    match cmd {
        Command::Angle { what: AngleCmd::Info { angle: a } } => angle_info(cfg, &angle(&a)?),
        Command::Lam { what } => {
            let lam = lamination(cfg)?;
            Ok(Outcome::Done(match what {
                LamCmd::Build => {
                    let (c, m) = (lam.components().len(), lam.misiurewicz_nodes().len());
                    let text = format!(
                        "lam d={} maxper={} maxpre={} comps={c} misiu={m}",
                        lam.degree(),
                        lam.max_period(),
                        lam.max_preperiod()
                    );
                    let kv = vec![
                        ("d", lam.degree().to_string()),
                        ("maxper", lam.max_period().to_string()),
                        ("maxpre", lam.max_preperiod().to_string()),
                        ("comps", c.to_string()),
                        ("misiu", m.to_string()),
                    ];
                    vec![rec(text, kv)]
                }
                LamCmd::Show => write_lamination(&lam).lines().map(|l| rec(l, Vec::new())).collect(),
            }))
        }
        Command::Pair { angle: a } => pair(cfg, &angle(&a)?),
        Command::Wake { node, theta } => {
            let lam = lamination(cfg)?;
            let theta = angle(&theta)?;
            let node = match node.parse::<NodeId>() {
                Ok(id) => {
                    let known = match id {
                        NodeId::Component(i) => i < lam.components().len(),
                        NodeId::Misiurewicz(i) => i < lam.misiurewicz_nodes().len(),
                    };
                    if !known {
                        return Err(Error::Parse(format!("no node {id} in this lamination")));
                    }
                    id
                }
                Err(_) => {
                    let a = angle(&node)?;
                    lam.node_of(&a).ok_or_else(|| beyond(&lam, &a))?
                }
            };
            let inside = in_wake(&lam, node, &theta);
            Ok(Outcome::Done(vec![rec(
                inside.to_string(),
                vec![("node", node.to_string()), ("theta", theta.to_string()), ("inwake", inside.to_string())],
            )]))
        }
        Command::Branch { first, second } => {
            let lam = lamination(cfg)?;
            let r = branch_point(&lam, &angle(&first)?, &angle(&second)?)?;
            let kv = match &r {
                BranchResult::InWake { node, contains } => {
                    vec![("case", "inwake".into()), ("node", node.to_string()), ("contains", input_name(*contains))]
                }
                BranchResult::ComponentBranch { node, first, second } => vec![
                    ("case", "comp".into()),
                    ("node", NodeId::Component(*node).to_string()),
                    ("first", first.to_string()),
                    ("second", second.to_string()),
                ],
                BranchResult::MisiurewiczBranch { node, first_gap, second_gap } => vec![
                    ("case", "misiu".into()),
                    ("node", NodeId::Misiurewicz(*node).to_string()),
                    ("first", first_gap.to_string()),
                    ("second", second_gap.to_string()),
                ],
                BranchResult::Undecided => vec![("case", "undecided".into())],
            };
            let line = rec(r.to_string(), kv);
            Ok(match r {
                BranchResult::Undecided => Outcome::Undecided(vec![line], bound_message(&lam)),
                _ => Outcome::Done(vec![line]),
            })
        }
        Command::Separate { first, second } => {
            let lam = lamination(cfg)?;
            let s = separate(&lam, &angle(&first)?, &angle(&second)?)?;
            let kv = match &s {
                Separation::SameClass => vec![("kind", "same-class".into())],
                Separation::Undecided => vec![("kind", "undecided".into())],
                Separation::Witness(w) => {
                    let (lo, hi) = w.chord();
                    let mut kv = vec![("kind", "pair".to_string())];
                    match &w.kind {
                        WitnessKind::RayPair(_) => {}
                        WitnessKind::ComponentCrossing { node, .. } => {
                            kv = vec![("kind", "comp".into()), ("node", NodeId::Component(*node).to_string())];
                        }
                        WitnessKind::PreperiodicPair { node, .. } => {
                            kv = vec![("kind", "misiu".into()), ("node", NodeId::Misiurewicz(*node).to_string())];
                        }
                    }
                    kv.push(("lower", lo.to_string()));
                    kv.push(("upper", hi.to_string()));
                    kv.push(("inside", input_name(w.inside)));
                    kv
                }
            };
            let line = rec(s.to_string(), kv);
            Ok(match s {
                Separation::Undecided => Outcome::Undecided(vec![line], bound_message(&lam)),
                _ => Outcome::Done(vec![line]),
            })
        }
        Command::Class { first, second } => {
            let lam = lamination(cfg)?;
            let r = same_comb_class(&lam, &angle(&first)?, &angle(&second)?)?;
            Ok(match r {
                Some(same) => {
                    let text = if same { "same-class" } else { "different" };
                    Outcome::Done(vec![rec(text, vec![("same", same.to_string())])])
                }
                None => {
                    Outcome::Undecided(vec![rec("undecided", vec![("same", "undecided".into())])], bound_message(&lam))
                }
            })
        }
        Command::Misiu { angle: a } => {
            let lam = lamination(cfg)?;
            let a = angle(&a)?;
            let m = match lam.node_of(&a) {
                Some(NodeId::Misiurewicz(m)) => m,
                Some(_) => return Err(Error::InvalidAngle(format!("{a} is periodic"))),
                None => return Err(beyond(&lam, &a)),
            };
            let node = lam.misiurewicz(m);
            let id = NodeId::Misiurewicz(m).to_string();
            let mut recs = vec![rec(
                format!("misiu {id} l={} n={} angles={}", node.preperiod, node.period, join(&node.angles)),
                vec![
                    ("node", id.clone()),
                    ("l", node.preperiod.to_string()),
                    ("n", node.period.to_string()),
                    ("angles", join(&node.angles)),
                ],
            )];
            for g in misiurewicz_subwakes(&lam, m)? {
                let mut text = format!("gap {} {} {}", g.index, g.from, g.to);
                let mut kv = vec![
                    ("gap", g.index.to_string()),
                    ("from", g.from.to_string()),
                    ("to", g.to.to_string()),
                    ("zero", g.zero.to_string()),
                ];
                if g.zero {
                    text.push_str(" zero");
                }
                if let Some(w) = &g.witness {
                    text.push_str(&format!(" witness {} {}", w.lower, w.upper));
                    kv.push(("witness", format!("{},{}", w.lower, w.upper)));
                }
                recs.push(rec(text, kv));
            }
            Ok(Outcome::Done(recs))
        }
        Command::Approx { lower, upper, count } => {
            let lam = lamination(cfg)?;
            let (lo, hi) = (angle(&lower)?, angle(&upper)?);
            let root = match lam.group_of(&lo) {
                Some(LandingGroup::Root(c)) if lam.component(c).root.upper == hi => lam.component(c).root.clone(),
                _ => return Err(Error::InvalidAngle(format!("{lo} {hi} is not a root leaf of the lamination"))),
            };
            let pairs = approximating_pairs(&lam, &root, count)?;
            Ok(Outcome::Done(
                pairs
                    .iter()
                    .map(|p| {
                        rec(
                            p.to_string(),
                            vec![
                                ("lower", p.lower.to_string()),
                                ("upper", p.upper.to_string()),
                                ("l", p.class.preperiod.to_string()),
                                ("n", p.class.period.to_string()),
                            ],
                        )
                    })
                    .collect(),
            ))
        }
        Command::Trace { angle: a, depth, t_min } => {
            let d = Degree::new(cfg.degree)?;
            if depth == 0 || t_min.is_nan() || t_min <= 0.0 {
                return Err(Error::Parse("--depth and --t-min must be positive".into()));
            }
            match trace_parameter_ray_with(d, &angle(&a)?, depth, t_min, &TraceOptions::default()) {
                Ok(ray) => Ok(Outcome::Done(trace_records(&ray))),
                Err(Error::TraceStalled { potential, partial }) => {
                    Ok(Outcome::Failed(trace_records(&partial), format!("trace stalled at potential {potential:e}")))
                }
                Err(e) => Err(e),
            }
        }
        Command::Validate { period, t_min } => validate(cfg, period, t_min),
        Command::Render { what } => render(cfg, what),
    }
}

fn bound_message(lam: &Lamination) -> String {
    format!("undecided at max period {} and max preperiod {}", lam.max_period(), lam.max_preperiod())
}

fn beyond(lam: &Lamination, a: &Angle) -> Error {
    Error::BoundExceeded(format!(
        "{a} is beyond max period {} and max preperiod {}",
        lam.max_period(),
        lam.max_preperiod()
    ))
}

fn angle_info(cfg: &Config, a: &Angle) -> Result<Outcome> {
    let d = Degree::new(cfg.degree)?;
    let class = classify(a, d);
    let knead = match kneading_sequence(a, d) {
        Ok(k) => k.to_string(),
        Err(_) => "none".into(),
    };
    let lam = lamination(cfg)?;
    let prefix = address_prefix(a, &lam)?;
    let mut address = prefix.address.to_string();
    if !prefix.complete {
        address.push_str("...");
    }
    let recs = vec![
        rec(format!("angle {a}"), vec![("angle", a.to_string())]),
        rec(
            format!("class l={} n={}", class.preperiod, class.period),
            vec![("l", class.preperiod.to_string()), ("n", class.period.to_string())],
        ),
        rec(format!("kneading {knead}"), vec![("kneading", knead)]),
        rec(format!("address {address}"), vec![("address", address.clone())]),
    ];
    Ok(Outcome::Done(recs))
}

fn pair(cfg: &Config, a: &Angle) -> Result<Outcome> {
    let lam = lamination(cfg)?;
    let g = lam.group_of(a).ok_or_else(|| beyond(&lam, a))?;
    let r = match g {
        LandingGroup::Root(c) => {
            let node = lam.component(c);
            rec(
                format!("leaf {} {} n={}", node.root.lower, node.root.upper, node.period),
                vec![
                    ("kind", "leaf".into()),
                    ("node", NodeId::Component(c).to_string()),
                    ("lower", node.root.lower.to_string()),
                    ("upper", node.root.upper.to_string()),
                    ("n", node.period.to_string()),
                ],
            )
        }
        LandingGroup::CoRoot(c, _) => {
            let node = lam.component(c);
            let id = NodeId::Component(c).to_string();
            rec(
                format!("coroot {a} n={} of {id}", node.period),
                vec![("kind", "coroot".into()), ("node", id), ("angle", a.to_string()), ("n", node.period.to_string())],
            )
        }
        LandingGroup::Misiurewicz(m) => {
            let node = lam.misiurewicz(m);
            let id = NodeId::Misiurewicz(m).to_string();
            rec(
                format!("misiu {id} l={} n={} angles={}", node.preperiod, node.period, join(&node.angles)),
                vec![
                    ("kind", "misiu".into()),
                    ("node", id),
                    ("l", node.preperiod.to_string()),
                    ("n", node.period.to_string()),
                    ("angles", join(&node.angles)),
                ],
            )
        }
    };
    Ok(Outcome::Done(vec![r]))
}

fn trace_records(ray: &TracedRay) -> Vec<Rec> {
    let mut recs: Vec<Rec> = ray.dump().lines().map(|l| rec(l, Vec::new())).collect();
    for (r, (t, c)) in recs.iter_mut().zip(ray.potentials.iter().zip(&ray.points)) {
        r.kv = vec![("t", format!("{t:e}")), ("re", format!("{:.12}", c.re)), ("im", format!("{:.12}", c.im))];
    }
    if let Some(last) = recs.last_mut() {
        last.kv = vec![
            ("land_re", format!("{:.12}", ray.landing.re)),
            ("land_im", format!("{:.12}", ray.landing.im)),
            ("resid", format!("{:e}", ray.residual)),
        ];
    }
    recs
}

fn validate(cfg: &Config, period: u32, t_min: f64) -> Result<Outcome> {
    let lam = lamination(cfg)?;
    if period > lam.max_period() {
        return Err(Error::BoundExceeded(format!("--period {period} exceeds max period {}", lam.max_period())));
    }
    let d = lam.degree();
    let leaves: Vec<_> = lam.components().iter().filter(|c| c.period <= period).map(|c| c.root.clone()).collect();
    let opts = TraceOptions::default();
    let reports: Vec<_> = leaves
        .par_iter()
        .map(|l| validate_leaf_with(&[l.lower.clone(), l.upper.clone()], d, cfg.tol, DEFAULT_DEPTH, t_min, &opts))
        .collect();
    let mut failed = 0;
    let mut recs = Vec::with_capacity(leaves.len());
    for (l, r) in leaves.iter().zip(reports) {
        let verdict = match r.verdict {
            Verdict::Valid => "valid",
            Verdict::Invalid => "invalid",
            Verdict::Inconclusive => "inconclusive",
        };
        if r.verdict != Verdict::Valid {
            failed += 1;
        }
        recs.push(rec(
            format!(
                "{verdict} {} {} n={} land={:.9} {:.9} spread={:.1e}",
                l.lower, l.upper, l.period, r.center.re, r.center.im, r.spread
            ),
            vec![
                ("verdict", verdict.into()),
                ("lower", l.lower.to_string()),
                ("upper", l.upper.to_string()),
                ("n", l.period.to_string()),
                ("re", format!("{:.9}", r.center.re)),
                ("im", format!("{:.9}", r.center.im)),
                ("spread", format!("{:.1e}", r.spread)),
            ],
        ));
    }
    Ok(if failed == 0 {
        Outcome::Done(recs)
    } else {
        Outcome::Failed(recs, format!("{failed} of {} leaves failed validation at tol {}", leaves.len(), cfg.tol))
    })
}

fn render(cfg: &Config, what: RenderCmd) -> Result<Outcome> {
    let d = Degree::new(cfg.degree)?;
    let mut opts = RenderOptions::new(d);
    match what {
        RenderCmd::Lam { out, straight, size } => {
            let lam = lamination(cfg)?;
            opts.size = size;
            opts.straight = straight;
            let svg = lamination_svg(&lam, &opts);
            match out {
                Some(path) => {
                    std::fs::write(&path, svg)?;
                    Ok(Outcome::Done(vec![wrote(&path)]))
                }
                None => Ok(Outcome::Done(svg.lines().map(|l| rec(l, Vec::new())).collect())),
            }
        }
        RenderCmd::Set { out, rays, viewport, size, max_iter } => {
            opts.size = size;
            opts.max_iter = max_iter;
            opts.overlay_rays = rays.iter().map(|r| angle(r)).collect::<Result<_>>()?;
            if let Some(v) = viewport {
                opts.viewport = v.parse::<Viewport>()?;
            }
            let img = set_image(d, &opts)?;
            let file = BufWriter::new(File::create(&out)?);
            if out.extension().is_some_and(|e| e.eq_ignore_ascii_case("ppm")) {
                img.write_ppm(file)?;
            } else {
                img.write_png(file)?;
            }
            let stalled: Vec<String> = img.overlays.iter().filter(|o| o.stalled).map(|o| o.angle.to_string()).collect();
            let recs = vec![wrote(&out)];
            Ok(if stalled.is_empty() {
                Outcome::Done(recs)
            } else {
                Outcome::Failed(recs, format!("overlay rays stalled: {}", stalled.join(" ")))
            })
        }
    }
}

fn wrote(path: &std::path::Path) -> Rec {
    rec(format!("wrote {}", path.display()), vec![("path", path.display().to_string())])
}
