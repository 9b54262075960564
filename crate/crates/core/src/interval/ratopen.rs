//! Finite unions of rational intervals inside `[0,1]`.
//!
//! [`RealSet`] is any finite union of intervals (points allowed) and is closed
//! under the Boolean operations, closure and interior. [`RatOpen`] wraps the
//! relatively open ones: interior endpoints are excluded, while `0` and `1`
//! may be included.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q0() -> Q {
    Q::zero()
}

pub fn q1() -> Q {
    Q::one()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("interval {0} is empty or degenerate")]
    InvalidInterval(String),
    #[error("interval {0} leaves the ambient [0,1]")]
    OutOfAmbient(String),
    #[error("interval {0} is not relatively open in [0,1]")]
    NotRelativelyOpen(String),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Parses `p/q`, an integer, a decimal such as `0.25`, or scientific
/// notation such as `1e-3`, exactly.
pub fn parse_rational(s: &str) -> Result<Q, IntervalError> {
    let err = |reason: &str| IntervalError::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let t = s.trim();
    if t.is_empty() {
        return Err(err("empty number"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err("bad numerator"))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (
            &t[..i],
            t[i + 1..].parse::<i32>().map_err(|_| err("bad exponent"))?,
        ),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(err("not a number"));
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = Q::from_integer(BigInt::from_str(&all).map_err(|_| err("not a number"))?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Q::from_integer(BigInt::from(10));
    let scale = num::pow::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Ok(if neg { -value } else { value })
}

/// One interval; `lo == hi` only for a closed point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Q, hi: Q, lo_closed: bool, hi_closed: bool) -> Interval {
        Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    pub fn open(lo: Q, hi: Q) -> Interval {
        Interval::new(lo, hi, false, false)
    }

    pub fn closed(lo: Q, hi: Q) -> Interval {
        Interval::new(lo, hi, true, true)
    }

    pub fn point(p: Q) -> Interval {
        Interval::closed(p.clone(), p)
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Greater => true,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Less => false,
        }
    }

    pub fn contains(&self, x: &Q) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    pub fn length(&self) -> Q {
        &self.hi - &self.lo
    }

    fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// A finite union of intervals inside `[0,1]`, kept sorted, disjoint and
/// with no two pieces that could be merged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RealSet {
    parts: Vec<Interval>,
}

impl RealSet {
    pub fn empty() -> RealSet {
        RealSet { parts: Vec::new() }
    }

    pub fn unit() -> RealSet {
        RealSet {
            parts: vec![Interval::closed(q0(), q1())],
        }
    }

    /// Normalizes arbitrary intervals, clipping them to `[0,1]`.
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(items: I) -> RealSet {
        let unit = Interval::closed(q0(), q1());
        let mut parts: Vec<Interval> = items
            .into_iter()
            .map(|i| i.intersect(&unit))
            .filter(|i| !i.is_empty())
            .collect();
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for next in parts {
            if let Some(cur) = out.last_mut() {
                let touches = match next.lo.cmp(&cur.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => cur.hi_closed || next.lo_closed,
                    Ordering::Greater => false,
                };
                if touches {
                    match next.hi.cmp(&cur.hi) {
                        Ordering::Greater => {
                            cur.hi = next.hi;
                            cur.hi_closed = next.hi_closed;
                        }
                        Ordering::Equal => cur.hi_closed |= next.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(next);
        }
        RealSet { parts: out }
    }

    pub fn points<I: IntoIterator<Item = Q>>(points: I) -> RealSet {
        RealSet::from_intervals(points.into_iter().map(Interval::point))
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Q) -> bool {
        let idx = self.parts.partition_point(|i| i.hi < *x);
        self.parts[idx..].iter().take(2).any(|i| i.contains(x))
    }

    pub fn union(&self, other: &RealSet) -> RealSet {
        RealSet::from_intervals(self.parts.iter().chain(&other.parts).cloned())
    }

    pub fn intersect(&self, other: &RealSet) -> RealSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.parts.len() && j < other.parts.len() {
            let a = &self.parts[i];
            let b = &other.parts[j];
            let c = a.intersect(b);
            if !c.is_empty() {
                out.push(c);
            }
            let a_first = match a.hi.cmp(&b.hi) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => !a.hi_closed || b.hi_closed,
            };
            if a_first {
                i += 1;
            } else {
                j += 1;
            }
        }
        RealSet::from_intervals(out)
    }

    /// Complement inside `[0,1]`.
    pub fn complement(&self) -> RealSet {
        let mut out = Vec::new();
        let mut lo = q0();
        let mut lo_closed = true;
        for p in &self.parts {
            out.push(Interval::new(lo, p.lo.clone(), lo_closed, !p.lo_closed));
            lo = p.hi.clone();
            lo_closed = !p.hi_closed;
        }
        out.push(Interval::new(lo, q1(), lo_closed, true));
        RealSet::from_intervals(out)
    }

    pub fn difference(&self, other: &RealSet) -> RealSet {
        self.intersect(&other.complement())
    }

    pub fn closure(&self) -> RealSet {
        RealSet::from_intervals(
            self.parts
                .iter()
                .map(|p| Interval::closed(p.lo.clone(), p.hi.clone())),
        )
    }

    /// Interior relative to `[0,1]`.
    pub fn interior(&self) -> RatOpen {
        let parts = self
            .parts
            .iter()
            .filter(|p| p.lo < p.hi)
            .map(|p| {
                Interval::new(
                    p.lo.clone(),
                    p.hi.clone(),
                    p.lo_closed && p.lo.is_zero(),
                    p.hi_closed && p.hi.is_one(),
                )
            });
        RatOpen(RealSet::from_intervals(parts))
    }

    /// Total length.
    pub fn length(&self) -> Q {
        self.parts.iter().map(Interval::length).sum()
    }

    pub fn is_subset(&self, other: &RealSet) -> bool {
        self.intersect(other) == *self
    }

    /// Endpoints of all pieces, in order, without repetition.
    pub fn endpoints(&self) -> Vec<Q> {
        let mut out: Vec<Q> = Vec::new();
        for p in &self.parts {
            for e in [&p.lo, &p.hi] {
                if out.last() != Some(e) {
                    out.push(e.clone());
                }
            }
        }
        out
    }
}

impl fmt::Display for RealSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "empty");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A relatively open subset of `[0,1]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatOpen(RealSet);

impl RatOpen {
    pub fn empty() -> RatOpen {
        RatOpen(RealSet::empty())
    }

    pub fn unit() -> RatOpen {
        RatOpen(RealSet::unit())
    }

    /// Canonical form of a union of intervals that must each be relatively
    /// open and lie in `[0,1]`.
    pub fn normalize<I: IntoIterator<Item = Interval>>(items: I) -> Result<RatOpen, IntervalError> {
        let mut checked = Vec::new();
        for i in items {
            if i.lo >= i.hi {
                return Err(IntervalError::InvalidInterval(i.to_string()));
            }
            if i.lo.is_negative() || i.hi > q1() {
                return Err(IntervalError::OutOfAmbient(i.to_string()));
            }
            if i.lo_closed && !i.lo.is_zero() || i.hi_closed && !i.hi.is_one() {
                return Err(IntervalError::NotRelativelyOpen(i.to_string()));
            }
            checked.push(i);
        }
        Ok(RatOpen(RealSet::from_intervals(checked)))
    }

    /// `(lo, hi) n [0,1]`, which is open relative to `[0,1]` whatever the
    /// endpoints are.
    pub fn clipped(lo: Q, hi: Q) -> RatOpen {
        let lo_closed = lo.is_negative();
        let hi_closed = hi > q1();
        RatOpen(RealSet::from_intervals([Interval::new(
            lo, hi, lo_closed, hi_closed,
        )]))
    }

    pub fn open_interval(lo: Q, hi: Q) -> Result<RatOpen, IntervalError> {
        RatOpen::normalize([Interval::open(lo, hi)])
    }

    pub fn as_set(&self) -> &RealSet {
        &self.0
    }

    pub fn parts(&self) -> &[Interval] {
        self.0.parts()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        *self == RatOpen::unit()
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.0.contains(x)
    }

    pub fn meet(&self, other: &RatOpen) -> RatOpen {
        RatOpen(self.0.intersect(&other.0))
    }

    pub fn join(&self, other: &RatOpen) -> RatOpen {
        RatOpen(self.0.union(&other.0))
    }

    pub fn join_all<'a, I: IntoIterator<Item = &'a RatOpen>>(items: I) -> RatOpen {
        RatOpen(RealSet::from_intervals(
            items.into_iter().flat_map(|u| u.parts().iter().cloned()),
        ))
    }

    pub fn leq(&self, other: &RatOpen) -> bool {
        self.0.is_subset(&other.0)
    }

    /// The closed complement `[0,1] - U`.
    pub fn complement(&self) -> RealSet {
        self.0.complement()
    }

    pub fn closure(&self) -> RealSet {
        self.0.closure()
    }

    /// Largest open `W` with `W n U <= H`: the interior of `(E - U) u H`.
    pub fn heyting(&self, h: &RatOpen) -> RatOpen {
        self.0.complement().union(&h.0).interior()
    }

    pub fn pseudo_complement(&self) -> RatOpen {
        self.0.complement().interior()
    }

    /// Interior of the closure; the double-negation nucleus.
    pub fn regularize(&self) -> RatOpen {
        self.0.closure().interior()
    }

    /// Dense iff the complement has empty interior.
    pub fn is_dense(&self) -> bool {
        self.pseudo_complement().is_empty()
    }

    /// Removes finitely many points.
    pub fn remove_points<'a, I: IntoIterator<Item = &'a Q>>(&self, points: I) -> RatOpen {
        let pts = RealSet::points(points.into_iter().cloned());
        RatOpen(self.0.difference(&pts))
    }

    pub fn lebesgue(&self) -> Q {
        self.0.length()
    }

    /// Points of `[0,1]` missing from `self` that have a punctured
    /// neighbourhood inside `self`.
    pub fn isolated_gaps(&self) -> Vec<Q> {
        self.regularize().0.difference(&self.0).parts().iter().map(|p| p.lo.clone()).collect()
    }
}

impl fmt::Display for RatOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Parses a pipe-separated list of intervals such as `(1/3,1/2)|[0,1/4)`,
/// closed intervals `[a,b]` and points `{a}` included. `empty` is the empty
/// set.
pub fn parse_real_set(s: &str) -> Result<RealSet, IntervalError> {
    let t = s.trim();
    if t == "empty" || t == "∅" || t.is_empty() {
        return Ok(RealSet::empty());
    }
    let mut out = Vec::new();
    for piece in t.split('|') {
        out.push(parse_interval(piece.trim())?);
    }
    for i in &out {
        if i.lo > i.hi || i.lo == i.hi && !(i.lo_closed && i.hi_closed) {
            return Err(IntervalError::InvalidInterval(i.to_string()));
        }
        if i.lo.is_negative() || i.hi > q1() {
            return Err(IntervalError::OutOfAmbient(i.to_string()));
        }
    }
    Ok(RealSet::from_intervals(out))
}

fn parse_interval(s: &str) -> Result<Interval, IntervalError> {
    let err = |reason: &str| IntervalError::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        return Ok(Interval::point(parse_rational(inner)?));
    }
    let mut chars = s.chars();
    let open = chars.next().ok_or_else(|| err("empty interval"))?;
    let close = chars.next_back().ok_or_else(|| err("empty interval"))?;
    let lo_closed = match open {
        '[' => true,
        '(' => false,
        _ => return Err(err("expected '(' or '['")),
    };
    let hi_closed = match close {
        ']' => true,
        ')' => false,
        _ => return Err(err("expected ')' or ']'")),
    };
    let body = chars.as_str();
    let (lo, hi) = body.split_once(',').ok_or_else(|| err("expected a comma"))?;
    Ok(Interval::new(
        parse_rational(lo)?,
        parse_rational(hi)?,
        lo_closed,
        hi_closed,
    ))
}

impl FromStr for RatOpen {
    type Err = IntervalError;

    fn from_str(s: &str) -> Result<RatOpen, IntervalError> {
        let t = s.trim();
        if t == "empty" || t == "∅" || t.is_empty() {
            return Ok(RatOpen::empty());
        }
        let mut out = Vec::new();
        for piece in t.split('|') {
            out.push(parse_interval(piece.trim())?);
        }
        RatOpen::normalize(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ro(s: &str) -> RatOpen {
        s.parse().unwrap()
    }

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-2").unwrap(), q(-2, 1));
        assert_eq!(parse_rational("2.5e1").unwrap(), q(25, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn normalize_examples() {
        let merged = RatOpen::normalize([
            Interval::open(q0(), q(1, 3)),
            Interval::open(q(1, 4), q(1, 2)),
        ])
        .unwrap();
        assert_eq!(merged, ro("(0,1/2)"));
        let split = ro("(0,1/2)|(1/2,1)");
        assert_eq!(split.parts().len(), 2);
        assert!(!split.contains(&q(1, 2)));
        let ends = ro("[0,1/4)|(1/4,1]");
        assert_eq!(ends.parts().len(), 2);
        assert!(ends.contains(&q0()) && ends.contains(&q1()));
        assert_eq!(ends.to_string(), "[0,1/4)|(1/4,1]");
    }

    #[test]
    fn normalize_errors() {
        assert!(matches!(
            RatOpen::normalize([Interval::open(q(1, 2), q(1, 2))]),
            Err(IntervalError::InvalidInterval(_))
        ));
        assert!(matches!(
            RatOpen::normalize([Interval::open(q(1, 2), q(3, 2))]),
            Err(IntervalError::OutOfAmbient(_))
        ));
        assert!(matches!(
            "[1/4,1/2)".parse::<RatOpen>(),
            Err(IntervalError::NotRelativelyOpen(_))
        ));
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(ro("(0,2/3)").meet(&ro("(1/3,1)")), ro("(1/3,2/3)"));
        assert!(ro("(0,2/3)").meet(&RatOpen::empty()).is_empty());
        assert!(ro("(1/5,2/7)").join(&RatOpen::unit()).is_unit());
    }

    #[test]
    fn heyting_examples() {
        assert_eq!(ro("(0,1/2)").pseudo_complement(), ro("(1/2,1]"));
        assert_eq!(ro("(0,1/2)|(1/2,1)").regularize(), RatOpen::unit());
        assert!(RatOpen::empty().pseudo_complement().is_unit());
        assert_eq!(ro("(0,1/2)").heyting(&ro("(1/4,3/4)")), ro("(1/4,1]"));
    }

    #[test]
    fn density_examples() {
        assert!(ro("(0,1/2)|(1/2,1)").is_dense());
        assert!(!ro("(0,1/2)").is_dense());
        assert_eq!(ro("(0,1/2)|(1/2,1)").isolated_gaps(), vec![q0(), q(1, 2), q1()]);
    }

    #[test]
    fn complement_and_closure() {
        let u = ro("(1/4,1/2)|(1/2,3/4)");
        let c = u.complement();
        assert_eq!(c.to_string(), "[0,1/4]|{1/2}|[3/4,1]");
        assert_eq!(c.interior(), ro("[0,1/4)|(3/4,1]"));
        assert_eq!(u.closure().to_string(), "[1/4,3/4]");
        assert_eq!(c.complement(), *u.as_set());
        assert_eq!(u.lebesgue(), q(1, 2));
    }

    #[test]
    fn clipping() {
        assert_eq!(RatOpen::clipped(q(-1, 4), q(1, 4)), ro("[0,1/4)"));
        assert_eq!(RatOpen::clipped(q(3, 4), q(5, 4)), ro("(3/4,1]"));
    }

    #[test]
    fn real_set_parsing() {
        let s = parse_real_set("[0,1/2]").unwrap();
        assert_eq!(s.length(), q(1, 2));
        assert!(s.contains(&q(1, 2)));
        let p = parse_real_set("{1/3}|(1/2,1]").unwrap();
        assert!(p.contains(&q(1, 3)));
        assert!(parse_real_set("[1/2,1/3]").is_err());
    }
}
