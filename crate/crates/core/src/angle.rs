//! Exact rational angles on the circle and multiplication by `d`.
//!
//! Angles live in `[0, 1]`; the value `1` is kept distinct from `0` so the
//! main component can carry the degenerate root pair `(0, 1)`. On the circle
//! both sit at the same point, which is what [`ccw`] uses.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Degree of the unicritical family `z^d + c`, always at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree(u32);

impl Degree {
    pub const QUADRATIC: Degree = Degree(2);

    pub fn new(d: u32) -> Result<Degree> {
        if d < 2 {
            return Err(Error::InvalidDegree(d));
        }
        Ok(Degree(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A reduced fraction `p/q` with `0 <= p <= q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Angle(Repr);

// Normalized: `Small` whenever the denominator fits in a u64.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: u64, den: u64 },
    Big { num: BigUint, den: BigUint },
}

/// Preperiod and exact period of an angle under multiplication by `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngleClass {
    pub preperiod: u32,
    pub period: u32,
}

impl AngleClass {
    pub fn is_periodic(&self) -> bool {
        self.preperiod == 0
    }
}

impl Angle {
    pub fn zero() -> Angle {
        Angle(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Angle {
        Angle(Repr::Small { num: 1, den: 1 })
    }

    pub fn new(num: u64, den: u64) -> Result<Angle> {
        if den == 0 || num > den {
            return Err(Error::InvalidAngle(format!("{num}/{den}")));
        }
        Ok(Self::reduced_u128(num as u128, den as u128))
    }

    pub fn from_biguint(num: BigUint, den: BigUint) -> Result<Angle> {
        if den.is_zero() || num > den {
            return Err(Error::InvalidAngle(format!("{num}/{den}")));
        }
        let g = num.gcd(&den);
        Ok(Self::normalized(num / &g, den / g))
    }

    /// The fractional part of a non-negative rational, as an angle in `[0, 1)`.
    pub fn frac(r: &BigRational) -> Angle {
        let den = r.denom().magnitude().clone();
        let num = r.numer().magnitude().mod_floor(&den);
        let num = if r.numer().sign() == num_bigint::Sign::Minus && !num.is_zero() { &den - num } else { num };
        let g = num.gcd(&den);
        Self::normalized(num / &g, den / g)
    }

    pub(crate) fn reduced_u128(num: u128, den: u128) -> Angle {
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        match (u64::try_from(num), u64::try_from(den)) {
            (Ok(num), Ok(den)) => Angle(Repr::Small { num, den }),
            _ => Angle(Repr::Big { num: num.into(), den: den.into() }),
        }
    }

    fn normalized(num: BigUint, den: BigUint) -> Angle {
        match (num.to_u64(), den.to_u64()) {
            (Some(num), Some(den)) => Angle(Repr::Small { num, den }),
            _ => Angle(Repr::Big { num, den }),
        }
    }

    pub fn numer(&self) -> BigUint {
        match &self.0 {
            Repr::Small { num, .. } => BigUint::from(*num),
            Repr::Big { num, .. } => num.clone(),
        }
    }

    pub fn denom(&self) -> BigUint {
        match &self.0 {
            Repr::Small { den, .. } => BigUint::from(*den),
            Repr::Big { den, .. } => den.clone(),
        }
    }

    /// Numerator and denominator when the denominator fits in a u64.
    pub fn as_u64(&self) -> Option<(u64, u64)> {
        match self.0 {
            Repr::Small { num, den } => Some((num, den)),
            Repr::Big { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { num: 1, den: 1 })
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big { num, den } => {
                let shift = den.bits().saturating_sub(60);
                let n = (num >> shift).to_f64().unwrap_or(0.0);
                let q = (den >> shift).to_f64().unwrap_or(1.0);
                n / q
            }
        }
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new_raw(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }

    /// `d·θ mod 1`. Angle 1 is fixed.
    pub fn map(&self, d: Degree) -> Angle {
        let d = d.get();
        match &self.0 {
            Repr::Small { num, den } => {
                if *num == *den {
                    return Angle::one();
                }
                let n = (*num as u128 * d as u128) % *den as u128;
                Self::reduced_u128(n, *den as u128)
            }
            Repr::Big { num, den } => {
                let n = (num * d) % den;
                let g = n.gcd(den);
                Self::normalized(n / &g, den / g)
            }
        }
    }

    /// The `d` preimages `(θ + j)/d`, ascending. Angle 1 is treated as 0.
    pub fn preimages(&self, d: Degree) -> Vec<Angle> {
        let d = d.get();
        match &self.0 {
            Repr::Small { num, den } => {
                let num = if num == den { 0 } else { *num } as u128;
                let den = *den as u128;
                (0..d as u128).map(|j| Self::reduced_u128(num + j * den, den * d as u128)).collect()
            }
            Repr::Big { num, den } => (0..d)
                .map(|j| {
                    let n = num + den * j;
                    let q = den * d;
                    let g = n.gcd(&q);
                    Self::normalized(n / &g, q / g)
                })
                .collect(),
        }
    }

    /// `1 − θ`, the angle of the complex-conjugate ray. 0 and 1 are fixed.
    pub fn conjugate(&self) -> Angle {
        match &self.0 {
            Repr::Small { num, den } if *num == 0 || num == den => self.clone(),
            Repr::Small { num, den } => Angle(Repr::Small { num: den - num, den: *den }),
            Repr::Big { num, den } => Angle(Repr::Big { num: den - num, den: den.clone() }),
        }
    }

    /// Position on the circle, identifying 1 with 0.
    fn position(&self) -> Angle {
        if self.is_one() {
            Angle::zero()
        } else {
            self.clone()
        }
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Angle) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: e }) => {
                (*a as u128 * *e as u128).cmp(&(*c as u128 * *b as u128))
            }
            _ => (self.numer() * other.denom()).cmp(&(other.numer() * self.denom())),
        }
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Angle) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Angle> {
        let bad = || Error::Parse(format!("expected an angle p/q, got {s:?}"));
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p: BigUint = p.parse().map_err(|_| bad())?;
        let q: BigUint = q.parse().map_err(|_| bad())?;
        Angle::from_biguint(p, q)
    }
}

/// `d·θ mod 1`.
pub fn map_d(theta: &Angle, d: Degree) -> Angle {
    theta.map(d)
}

/// Exact preperiod and period of `θ` under multiplication by `d`.
///
/// The period is the multiplicative order of `d` modulo the part of the
/// denominator coprime to `d`, found by iteration.
pub fn classify(theta: &Angle, d: Degree) -> AngleClass {
    if theta.is_one() {
        return AngleClass { preperiod: 0, period: 1 };
    }
    let dd = d.get();
    match &theta.0 {
        Repr::Small { den, .. } => {
            let mut q = *den;
            let mut preperiod = 0;
            loop {
                let g = q.gcd(&(dd as u64));
                if g == 1 {
                    break;
                }
                q /= g;
                preperiod += 1;
            }
            let period = if q == 1 {
                1
            } else {
                let (m, q) = (dd as u128 % q as u128, q as u128);
                let mut x = m;
                let mut k = 1;
                while x != 1 {
                    x = x * dd as u128 % q;
                    k += 1;
                }
                k
            };
            AngleClass { preperiod, period }
        }
        Repr::Big { den, .. } => {
            let dbig = BigUint::from(dd);
            let mut q = den.clone();
            let mut preperiod = 0;
            loop {
                let g = q.gcd(&dbig);
                if g.is_one() {
                    break;
                }
                q /= g;
                preperiod += 1;
            }
            let period = if q.is_one() {
                1
            } else {
                let mut x = &dbig % &q;
                let mut k = 1;
                while !x.is_one() {
                    x = x * dd % &q;
                    k += 1;
                }
                k
            };
            AngleClass { preperiod, period }
        }
    }
}

/// `d^n − 1`, panicking past u64 range.
pub(crate) fn d_pow_minus_one(d: Degree, n: u32) -> u64 {
    (d.get() as u64)
        .checked_pow(n)
        .and_then(|v| v.checked_sub(1))
        .unwrap_or_else(|| panic!("{}^{} overflows u64", d, n))
}

/// All angles of exact period `n`, ascending.
///
/// For `n = 1` the list is `0, 1/(d−1), …, (d−2)/(d−1), 1`.
///
/// # Panics
/// If `d^n − 1` does not fit in a u64.
pub fn periodic_angles(d: Degree, n: u32) -> Vec<Angle> {
    assert!(n >= 1, "period must be positive");
    let dd = d.get() as u64;
    if n == 1 {
        let mut out: Vec<Angle> = (0..dd - 1).map(|j| Angle::reduced_u128(j as u128, (dd - 1) as u128)).collect();
        out.push(Angle::one());
        return out;
    }
    let big = d_pow_minus_one(d, n);
    let moduli: Vec<u64> = (1..n).filter(|m| n.is_multiple_of(*m)).map(|m| big / d_pow_minus_one(d, m)).collect();
    (1..big)
        .filter(|p| moduli.iter().all(|k| p % k != 0))
        .map(|p| Angle::reduced_u128(p as u128, big as u128))
        .collect()
}

/// All angles of exact preperiod `l >= 1` and period `n`, ascending.
pub fn preperiodic_angles(d: Degree, l: u32, n: u32) -> Vec<Angle> {
    assert!(l >= 1, "preperiod must be positive");
    let cycle: Vec<Angle> = periodic_angles(d, n).into_iter().filter(|a| !a.is_one()).collect();
    let mut level: Vec<Angle> = Vec::new();
    for phi in &cycle {
        let mut back = phi.clone();
        for _ in 1..n {
            back = back.map(d);
        }
        level.extend(phi.preimages(d).into_iter().filter(|a| *a != back));
    }
    for _ in 1..l {
        level = level.iter().flat_map(|a| a.preimages(d)).collect();
    }
    level.sort();
    level
}

/// True when the circle points `a`, `b`, `c` are distinct and appear in
/// counterclockwise order.
pub fn ccw(a: &Angle, b: &Angle, c: &Angle) -> bool {
    let (a, b, c) = (a.position(), b.position(), c.position());
    (a < b && b < c) || (b < c && c < a) || (c < a && a < b)
}
