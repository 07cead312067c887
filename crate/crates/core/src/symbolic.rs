//! Kneading sequences and internal addresses.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::angle::{classify, Angle, Degree};
use crate::error::{Error, Result};
use crate::lamination::{Containment, InternalAngle, Lamination};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Digit(u32),
    Star,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Digit(j) => write!(f, "{}", char::from_digit(*j, 36).unwrap_or('?')),
            Symbol::Star => write!(f, "★"),
        }
    }
}

/// Eventually periodic itinerary, stored with minimal preperiod and period.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KneadingSequence {
    pub preperiodic: Vec<Symbol>,
    pub periodic: Vec<Symbol>,
}

impl KneadingSequence {
    fn normalized(mut pre: Vec<Symbol>, mut per: Vec<Symbol>) -> KneadingSequence {
        let n = per.len();
        if let Some(p) = (1..=n).find(|p| n.is_multiple_of(*p) && (0..n).all(|i| per[i] == per[i % p])) {
            per.truncate(p);
        }
        while let Some(last) = pre.last() {
            if *last != per[per.len() - 1] {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        KneadingSequence { preperiodic: pre, periodic: per }
    }

    /// Symbol at 1-based position `r`.
    pub fn symbol(&self, r: usize) -> Symbol {
        let i = r - 1;
        if i < self.preperiodic.len() {
            self.preperiodic[i]
        } else {
            self.periodic[(i - self.preperiodic.len()) % self.periodic.len()]
        }
    }

    pub fn has_star(&self) -> bool {
        self.preperiodic.contains(&Symbol::Star) || self.periodic.contains(&Symbol::Star)
    }
}

impl fmt::Display for KneadingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.preperiodic {
            write!(f, "{s}")?;
        }
        write!(f, "|")?;
        for s in &self.periodic {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Symbols of `x, d·x, d²·x, …` against the partition by the preimages of `theta`.
///
/// For `d = 2` symbol 1 marks the arc containing `theta`. Otherwise the arc
/// starting at `(theta + j)/d` carries symbol `j`.
pub fn itinerary(theta: &Angle, x: &Angle, d: Degree, len: usize) -> Vec<Symbol> {
    let small = theta.as_u64().zip(x.as_u64()).and_then(|((p, q), (xn, xq))| {
        let l = (q as u128).lcm(&(xq as u128));
        let fits = l.checked_mul(2 * d.get() as u128).is_some_and(|v| v < i128::MAX as u128);
        fits.then(|| {
            let (l, d) = (l as i128, d.get() as i128);
            (p as i128 * (l / q as i128), xn as i128 * (l / xq as i128), l, d)
        })
    });
    let raw = match small {
        Some((p, x, q, dd)) => run_itinerary(p, x, q, dd, len),
        None => {
            let (p, q) = (BigInt::from(theta.numer()), BigInt::from(theta.denom()));
            let (xn, xq) = (BigInt::from(x.numer()), BigInt::from(x.denom()));
            let l = q.lcm(&xq);
            run_itinerary(p * (&l / &q), xn * (&l / &xq), l, BigInt::from(d.get()), len)
        }
    };
    if d.get() == 2 {
        raw.into_iter()
            .map(|s| match s {
                Symbol::Digit(0) => Symbol::Digit(1),
                Symbol::Digit(_) => Symbol::Digit(0),
                Symbol::Star => Symbol::Star,
            })
            .collect()
    } else {
        raw
    }
}

fn run_itinerary<T>(p: T, mut x: T, q: T, d: T, len: usize) -> Vec<Symbol>
where
    T: Integer + Clone + ToPrimitive,
{
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        if x == q {
            x = T::zero();
        }
        let dx = d.clone() * x.clone();
        let (fl, r) = (dx.clone() - p.clone()).div_mod_floor(&q);
        if r.is_zero() {
            out.push(Symbol::Star);
        } else {
            let j = fl.mod_floor(&d).to_u32().expect("digit below degree");
            out.push(Symbol::Digit(j));
        }
        x = dx.mod_floor(&q);
    }
    out
}

/// Kneading sequence of θ: the itinerary of θ against its own partition.
pub fn kneading_sequence(theta: &Angle, d: Degree) -> Result<KneadingSequence> {
    if theta.is_zero() || theta.is_one() {
        return Err(Error::InvalidAngle(format!("{theta} has no kneading sequence")));
    }
    let class = classify(theta, d);
    let (l, n) = (class.preperiod as usize, class.period as usize);
    let mut raw = itinerary(theta, theta, d, l + n);
    let per = raw.split_off(l);
    Ok(KneadingSequence::normalized(raw, per))
}

/// Internal address read off a ★-free kneading sequence:
/// `S₁ = 1`, `S_{k+1} = min { r > S_k : ν_r ≠ ν_{r − S_k} }`, truncated at `bound`.
pub fn rho_address(nu: &KneadingSequence, bound: u32) -> InternalAddress {
    let mut entries = vec![1u32];
    let mut s = 1usize;
    'outer: loop {
        for r in s + 1..=bound as usize {
            if nu.symbol(r) != nu.symbol(r - s) {
                entries.push(r as u32);
                s = r;
                continue 'outer;
            }
        }
        break;
    }
    InternalAddress { entries }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InternalAddress {
    pub entries: Vec<u32>,
}

impl fmt::Display for InternalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, "->")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AngledInternalAddress {
    /// Period and, except for the last entry, the internal angle of the
    /// subwake leading onward.
    pub entries: Vec<(u32, Option<InternalAngle>)>,
}

impl AngledInternalAddress {
    pub fn periods(&self) -> InternalAddress {
        InternalAddress { entries: self.entries.iter().map(|e| e.0).collect() }
    }
}

impl fmt::Display for AngledInternalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, a)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, "->")?;
            }
            write!(f, "{n}")?;
            if let Some(a) = a {
                write!(f, "({}/{})", a.numer(), a.denom())?;
            }
        }
        Ok(())
    }
}

/// The part of the address visible in a lamination, and whether it is the
/// whole address.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddressPrefix {
    pub address: AngledInternalAddress,
    /// Components along the address, main first.
    pub path: Vec<usize>,
    pub complete: bool,
}

/// Walks from main towards θ, each time taking the component of least period
/// among the deeper ones whose closed wake contains θ.
pub fn address_prefix(theta: &Angle, lam: &Lamination) -> Result<AddressPrefix> {
    if theta.is_zero() || theta.is_one() {
        return Ok(AddressPrefix {
            address: AngledInternalAddress { entries: vec![(1, None)] },
            path: vec![0],
            complete: true,
        });
    }
    let chain = lam.component_chain(theta, Containment::Closed);
    let mut path = vec![0usize];
    let mut pos = 0usize;
    while let Some((k, &c)) = chain.iter().enumerate().skip(pos + 1).min_by_key(|(_, &c)| lam.component(c).period) {
        if lam.component(c).period <= lam.component(path[path.len() - 1]).period {
            return Err(Error::InternalConsistency(format!("address of {theta} does not increase")));
        }
        path.push(c);
        pos = k;
    }
    let last = lam.component(path[path.len() - 1]);
    let complete = last.angles().contains(theta);

    let class = classify(theta, lam.degree());
    let max_q = (class.preperiod + class.period + 1) as u64;
    let mut entries = Vec::with_capacity(path.len());
    for (i, &c) in path.iter().enumerate() {
        let period = lam.component(c).period;
        if i + 1 == path.len() && complete {
            entries.push((period, None));
            break;
        }
        let sw = lam.subwake(c, theta, max_q).ok_or_else(|| {
            Error::BoundExceeded(format!("no subwake of {} containing {theta} with denominator ≤ {max_q}", c))
        })?;
        entries.push((period, Some(sw.angle)));
    }
    Ok(AddressPrefix { address: AngledInternalAddress { entries }, path, complete })
}

/// Internal address of θ, certified complete within the lamination's bounds.
pub fn internal_address(theta: &Angle, lam: &Lamination) -> Result<InternalAddress> {
    angled_internal_address(theta, lam).map(|a| a.periods())
}

/// Angled internal address of θ, certified complete within the lamination's bounds.
pub fn angled_internal_address(theta: &Angle, lam: &Lamination) -> Result<AngledInternalAddress> {
    let pre = address_prefix(theta, lam)?;
    if !pre.complete {
        return Err(Error::BoundExceeded(format!(
            "address of {theta} continues beyond max period {}",
            lam.max_period()
        )));
    }
    Ok(pre.address)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    #[test]
    fn kneading_examples() {
        let d = Degree::QUADRATIC;
        assert_eq!(kneading_sequence(&a("1/7"), d).unwrap().to_string(), "|11★");
        assert_eq!(kneading_sequence(&a("1/2"), d).unwrap().to_string(), "1|0");
        let k = kneading_sequence(&a("1/4"), d).unwrap();
        assert!(!k.has_star());
        assert_eq!(k.preperiodic.len(), 2);
        assert_eq!(k.to_string(), "11|0");
        assert!(kneading_sequence(&Angle::zero(), d).is_err());
        assert!(kneading_sequence(&Angle::one(), d).is_err());
    }

    #[test]
    fn star_at_period_multiples() {
        let d = Degree::new(3).unwrap();
        for x in crate::angle::periodic_angles(d, 3) {
            if x.is_one() {
                continue;
            }
            let k = kneading_sequence(&x, d).unwrap();
            assert!(k.preperiodic.is_empty());
            assert_eq!(k.periodic.iter().filter(|s| **s == Symbol::Star).count(), 1);
            assert_eq!(k.periodic.last(), Some(&Symbol::Star));
        }
    }

    #[test]
    fn itinerary_separates_quarter_points() {
        let d = Degree::QUADRATIC;
        let (q1, q3) = (a("1/4"), a("3/4"));
        assert_ne!(itinerary(&q1, &q3, d, 3), itinerary(&q1, &q1, d, 3));
        let (x, y) = (a("9/56"), a("15/56"));
        assert_eq!(itinerary(&x, &y, d, 6), itinerary(&x, &x, d, 6));
    }

    #[test]
    fn rho_on_preperiodic() {
        let d = Degree::QUADRATIC;
        let nu = kneading_sequence(&a("9/56"), d).unwrap();
        assert_eq!(rho_address(&nu, 6).entries[..2], [1, 3]);
        let nu = kneading_sequence(&a("1/2"), d).unwrap();
        assert_eq!(rho_address(&nu, 5).to_string(), "1->2->3->4->5");
    }
}
