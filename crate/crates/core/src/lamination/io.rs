//! Line-oriented lamination files.
//!
//! ```text
//! MBLAM v1 d=2 maxper=3 maxpre=1
//! comp main n=1 root=0/1,1/1 coroots=
//! comp c1 n=2 root=1/3,2/3 coroots=
//! misiu m0 l=1 n=1 angles=1/2 zerogap=0
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{build, ComponentNode, Lamination, Leaf, MisiurewiczNode, NodeId};
use crate::angle::{Angle, Degree};
use crate::error::{Error, Result};

fn join(angles: &[Angle]) -> String {
    angles.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
}

/// Serializes in the canonical order: components by (period, lower), then
/// Misiurewicz nodes by (preperiod, period, lower).
pub fn write_lamination(lam: &Lamination) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "MBLAM v1 d={} maxper={} maxpre={}", lam.degree(), lam.max_period(), lam.max_preperiod());
    for (i, c) in lam.components().iter().enumerate() {
        let _ = writeln!(
            s,
            "comp {} n={} root={},{} coroots={}",
            NodeId::Component(i),
            c.period,
            c.root.lower,
            c.root.upper,
            join(&c.co_roots)
        );
    }
    for (i, m) in lam.misiurewicz_nodes().iter().enumerate() {
        let _ = writeln!(
            s,
            "misiu {} l={} n={} angles={} zerogap={}",
            NodeId::Misiurewicz(i),
            m.preperiod,
            m.period,
            join(&m.angles),
            m.zero_gap
        );
    }
    s
}

fn field<'a>(tok: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("line {line}: expected {key}=")))
}

fn number(s: &str, line: usize) -> Result<u32> {
    s.parse().map_err(|_| Error::Parse(format!("line {line}: bad number {s:?}")))
}

fn angles(s: &str) -> Result<Vec<Angle>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(str::parse).collect()
}

/// Parses a lamination file and re-derives the forest. The header is returned
/// as read; callers compare it against what they expect.
pub fn read_lamination(text: &str) -> Result<Lamination> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty lamination file".into()))?;
    let mut h = header.split(' ');
    if h.next() != Some("MBLAM") || h.next() != Some("v1") {
        return Err(Error::Parse("missing MBLAM v1 header".into()));
    }
    let d = Degree::new(number(field(h.next(), "d", 1)?, 1)?)?;
    let max_period = number(field(h.next(), "maxper", 1)?, 1)?;
    let max_preperiod = number(field(h.next(), "maxpre", 1)?, 1)?;

    let mut components = Vec::new();
    let mut misiurewicz = Vec::new();
    for (i, line) in lines {
        let ln = i + 1;
        if line.is_empty() {
            continue;
        }
        let mut t = line.split(' ');
        match t.next() {
            Some("comp") => {
                let id: NodeId = t.next().unwrap_or("").parse()?;
                if id != NodeId::Component(components.len()) {
                    return Err(Error::Parse(format!("line {ln}: out-of-order id {id}")));
                }
                let n = number(field(t.next(), "n", ln)?, ln)?;
                let root = angles(field(t.next(), "root", ln)?)?;
                let co_roots = angles(field(t.next(), "coroots", ln)?)?;
                if root.len() != 2 || root[0] >= root[1] || co_roots.len() + 2 != d.get() as usize {
                    return Err(Error::Parse(format!("line {ln}: malformed component")));
                }
                let [lower, upper]: [Angle; 2] = root.try_into().expect("two angles");
                components.push(ComponentNode {
                    period: n,
                    root: Leaf::new(lower, upper, n),
                    co_roots,
                    parent: None,
                    attachment: None,
                });
            }
            Some("misiu") => {
                let id: NodeId = t.next().unwrap_or("").parse()?;
                if id != NodeId::Misiurewicz(misiurewicz.len()) {
                    return Err(Error::Parse(format!("line {ln}: out-of-order id {id}")));
                }
                let l = number(field(t.next(), "l", ln)?, ln)?;
                let n = number(field(t.next(), "n", ln)?, ln)?;
                let list = angles(field(t.next(), "angles", ln)?)?;
                let zero_gap = number(field(t.next(), "zerogap", ln)?, ln)? as usize;
                if list.is_empty() || zero_gap + 1 != list.len() || list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Parse(format!("line {ln}: malformed Misiurewicz node")));
                }
                misiurewicz.push(MisiurewiczNode { preperiod: l, period: n, angles: list, zero_gap });
            }
            _ => return Err(Error::Parse(format!("line {ln}: unknown record"))),
        }
    }
    Lamination::assemble(d, max_period, max_preperiod, components, misiurewicz)
}

/// Reads `dir/lam-d<d>-p<maxper>-l<maxpre>.txt` if present, otherwise builds
/// and writes it.
pub fn load_or_build(dir: &Path, d: Degree, max_period: u32, max_preperiod: u32) -> Result<Lamination> {
    let path = dir.join(format!("lam-d{d}-p{max_period}-l{max_preperiod}.txt"));
    if path.exists() {
        let lam = read_lamination(&fs::read_to_string(&path)?)?;
        if (lam.degree(), lam.max_period(), lam.max_preperiod()) != (d, max_period, max_preperiod) {
            return Err(Error::CacheMismatch(format!("{} holds different parameters", path.display())));
        }
        return Ok(lam);
    }
    let lam = build(d, max_period, max_preperiod)?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, write_lamination(&lam))?;
    fs::rename(&tmp, &path)?;
    Ok(lam)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let lam = build(Degree::QUADRATIC, 5, 2).unwrap();
        let text = write_lamination(&lam);
        let back = read_lamination(&text).unwrap();
        assert_eq!(write_lamination(&back), text);
        assert_eq!(back.components(), lam.components());
    }

    #[test]
    fn format_head() {
        let lam = build(Degree::QUADRATIC, 2, 1).unwrap();
        assert_eq!(
            write_lamination(&lam),
            "MBLAM v1 d=2 maxper=2 maxpre=1\n\
             comp main n=1 root=0/1,1/1 coroots=\n\
             comp c1 n=2 root=1/3,2/3 coroots=\n\
             misiu m0 l=1 n=1 angles=1/2 zerogap=0\n\
             misiu m1 l=1 n=2 angles=1/6 zerogap=0\n\
             misiu m2 l=1 n=2 angles=5/6 zerogap=0\n"
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_lamination("").is_err());
        assert!(read_lamination("MBLAM v2 d=2 maxper=1 maxpre=0\n").is_err());
        assert!(read_lamination("MBLAM v1 d=2 maxper=1 maxpre=0\nbogus\n").is_err());
    }

    #[test]
    fn cache_reuse() {
        let dir = tempfile::tempdir().unwrap();
        let a = load_or_build(dir.path(), Degree::QUADRATIC, 4, 1).unwrap();
        let b = load_or_build(dir.path(), Degree::QUADRATIC, 4, 1).unwrap();
        assert_eq!(write_lamination(&a), write_lamination(&b));
    }
}
