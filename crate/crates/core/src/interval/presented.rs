//! Sublocales of `[0,1]` given by a closed set of constructors, each with a
//! certified stream of open neighbourhoods.

use std::fmt;

use num::{BigInt, One};
use thiserror::Error;

use super::enumerate::Enumerator;
use super::lazy::LazyOpen;
use super::ratopen::{parse_real_set, q0, Interval, IntervalError, Q, RatOpen, RealSet};

/// Deepest nesting of combinators accepted.
pub const MAX_DEPTH: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentedError {
    #[error("presentation nests {depth} combinators, more than {max}")]
    UnsupportedCombination { depth: usize, max: usize },
    #[error("cannot parse sublocale expression {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

#[derive(Clone, Debug)]
pub enum OpenPresentation {
    Fixed(RatOpen),
    Lazy(LazyOpen),
}

#[derive(Clone, Debug)]
pub enum PresentedSublocale {
    Open(OpenPresentation),
    /// The closed complement of the given open.
    Closed(RatOpen),
    /// The subspace on an enumerated countable set.
    CountablePoints(Enumerator),
    /// The subspace on the complement of an enumerated countable set.
    CoCountable(Enumerator),
    Generic,
    Union(Vec<PresentedSublocale>),
    Intersection(Vec<PresentedSublocale>),
    IntersectWithOpen(Box<PresentedSublocale>, RatOpen),
    /// Intersection with the closed complement of the given open.
    IntersectWithClosed(Box<PresentedSublocale>, RatOpen),
}

/// Answer of a structural certification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes(String),
    No(String),
    Unknown(String),
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn reason(&self) -> &str {
        match self {
            Verdict::Yes(r) | Verdict::No(r) | Verdict::Unknown(r) => r,
        }
    }
}

/// Shrinks every component of `u` by `len / 2^(k+2)` at each interior end,
/// giving a closed set inside `u` that grows towards `u` as `k` grows.
pub fn shrink(u: &RatOpen, k: usize) -> RealSet {
    let scale = Q::from_integer(BigInt::one() << (k + 2));
    RealSet::from_intervals(u.parts().iter().map(|p| {
        let delta = p.length() / &scale;
        let lo = if p.lo_closed { p.lo.clone() } else { &p.lo + &delta };
        let hi = if p.hi_closed { p.hi.clone() } else { &p.hi - &delta };
        Interval::closed(lo, hi)
    }))
}

impl PresentedSublocale {
    pub fn open(u: RatOpen) -> PresentedSublocale {
        PresentedSublocale::Open(OpenPresentation::Fixed(u))
    }

    pub fn rationals() -> PresentedSublocale {
        PresentedSublocale::CountablePoints(Enumerator::SternBrocot)
    }

    pub fn irrationals() -> PresentedSublocale {
        PresentedSublocale::CoCountable(Enumerator::SternBrocot)
    }

    pub fn depth(&self) -> usize {
        use PresentedSublocale::*;
        match self {
            Union(xs) | Intersection(xs) => 1 + xs.iter().map(Self::depth).max().unwrap_or(0),
            IntersectWithOpen(x, _) | IntersectWithClosed(x, _) => 1 + x.depth(),
            _ => 0,
        }
    }

    pub fn check(&self) -> Result<(), PresentedError> {
        let depth = self.depth();
        if depth > MAX_DEPTH {
            return Err(PresentedError::UnsupportedCombination {
                depth,
                max: MAX_DEPTH,
            });
        }
        Ok(())
    }

    /// Set-level membership, for the constructors that are subspaces.
    /// `None` for the generic part, which has no points.
    pub fn contains_point(&self, x: &Q) -> Option<bool> {
        use PresentedSublocale::*;
        match self {
            Open(OpenPresentation::Fixed(u)) => Some(u.contains(x)),
            Open(OpenPresentation::Lazy(_)) => None,
            Closed(u) => Some(!u.contains(x)),
            CountablePoints(s) => Some(s.contains(x)),
            CoCountable(s) => Some(!s.contains(x)),
            Generic => Some(false),
            Union(xs) => {
                let mut unknown = false;
                for m in xs.iter().map(|y| y.contains_point(x)) {
                    match m {
                        Some(true) => return Some(true),
                        None => unknown = true,
                        Some(false) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(false)
                }
            }
            Intersection(xs) => {
                let mut unknown = false;
                for m in xs.iter().map(|y| y.contains_point(x)) {
                    match m {
                        Some(false) => return Some(false),
                        None => unknown = true,
                        Some(true) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(true)
                }
            }
            IntersectWithOpen(y, u) => {
                if u.contains(x) {
                    y.contains_point(x)
                } else {
                    Some(false)
                }
            }
            IntersectWithClosed(y, u) => {
                if u.contains(x) {
                    Some(false)
                } else {
                    y.contains_point(x)
                }
            }
        }
    }

    /// The `k`-th certified open neighbourhood. Points of `avoid` that are
    /// certainly outside the sublocale are left out of the neighbourhood, so
    /// that atoms there do not inflate measure bounds.
    pub fn neighborhood(&self, k: usize, avoid: &[Q]) -> Result<LazyOpen, PresentedError> {
        self.check()?;
        Ok(self.nbhd(k, avoid))
    }

    fn nbhd(&self, k: usize, avoid: &[Q]) -> LazyOpen {
        use PresentedSublocale::*;
        let eps = || Q::new(BigInt::one(), BigInt::one() << k);
        match self {
            Open(OpenPresentation::Fixed(u)) => LazyOpen::Constant(u.clone()),
            Open(OpenPresentation::Lazy(l)) => l.clone(),
            Closed(u) => {
                let outside: Vec<&Q> = avoid.iter().filter(|p| u.contains(p)).collect();
                LazyOpen::Constant(shrink(u, k).complement().interior().remove_points(outside))
            }
            CountablePoints(s) => LazyOpen::Cover {
                points: s.clone(),
                epsilon: eps(),
                excluded: avoid.iter().filter(|p| !s.contains(p)).cloned().collect(),
            },
            CoCountable(s) => {
                let mut removed = s.first(k);
                removed.extend(avoid.iter().filter(|p| s.contains(p)).cloned());
                LazyOpen::Constant(RatOpen::unit().remove_points(&removed))
            }
            Generic => LazyOpen::Cover {
                points: Enumerator::SternBrocot,
                epsilon: eps(),
                excluded: avoid.to_vec(),
            },
            Union(xs) => LazyOpen::Join(xs.iter().map(|x| x.nbhd(k, avoid)).collect()),
            Intersection(xs) => LazyOpen::Meet(xs.iter().map(|x| x.nbhd(k, avoid)).collect()),
            IntersectWithOpen(x, u) => {
                LazyOpen::Meet(vec![x.nbhd(k, avoid), LazyOpen::Constant(u.clone())])
            }
            IntersectWithClosed(x, u) => {
                LazyOpen::Meet(vec![x.nbhd(k, avoid), Closed(u.clone()).nbhd(k, avoid)])
            }
        }
    }

    /// Whether the generic sublocale is contained in this one, equivalently
    /// whether this sublocale is dense.
    pub fn contains_generic(&self) -> Verdict {
        use PresentedSublocale::*;
        match self {
            Generic => Verdict::Yes("the generic sublocale itself".into()),
            Open(OpenPresentation::Fixed(u)) => {
                if u.is_dense() {
                    Verdict::Yes(format!("{u} is a dense open"))
                } else {
                    Verdict::No(format!("{u} misses the open {}", u.pseudo_complement()))
                }
            }
            Open(OpenPresentation::Lazy(l)) => {
                if l.certified_dense() {
                    Verdict::Yes(format!("{} is certified dense", l.describe()))
                } else {
                    Verdict::Unknown("lazy open without a density certificate".into())
                }
            }
            Closed(u) => {
                if u.is_empty() {
                    Verdict::Yes("closed complement of the empty open".into())
                } else {
                    Verdict::No(format!("a dense closed sublocale is everything, but {u} is removed"))
                }
            }
            CountablePoints(s) => {
                if s.is_dense() {
                    Verdict::Yes(format!("subspace on the dense set {s}"))
                } else {
                    Verdict::No(format!("{s} is finite, hence nowhere dense"))
                }
            }
            CoCountable(s) => Verdict::Yes(format!(
                "the complement of the countable set {s} is dense"
            )),
            Union(xs) => {
                let vs: Vec<Verdict> = xs.iter().map(Self::contains_generic).collect();
                match vs.iter().find(|v| v.is_yes()) {
                    Some(v) => Verdict::Yes(format!("a member of the union: {}", v.reason())),
                    None => Verdict::Unknown("no member of the union is certified dense".into()),
                }
            }
            Intersection(xs) => {
                let vs: Vec<Verdict> = xs.iter().map(Self::contains_generic).collect();
                if let Some(v) = vs.iter().find(|v| !v.is_yes()) {
                    return v.clone();
                }
                let reasons: Vec<&str> = vs.iter().map(Verdict::reason).collect();
                Verdict::Yes(format!("every member contains it ({})", reasons.join("; ")))
            }
            IntersectWithOpen(x, u) => {
                Intersection(vec![(**x).clone(), Self::open(u.clone())]).contains_generic()
            }
            IntersectWithClosed(x, u) => {
                Intersection(vec![(**x).clone(), Closed(u.clone())]).contains_generic()
            }
        }
    }

    pub fn describe(&self) -> String {
        use PresentedSublocale::*;
        let join = |xs: &[PresentedSublocale]| {
            xs.iter().map(Self::describe).collect::<Vec<_>>().join("; ")
        };
        match self {
            Open(OpenPresentation::Fixed(u)) => u.to_string(),
            Open(OpenPresentation::Lazy(l)) => format!("open {}", l.describe()),
            Closed(u) => format!("closed {}", u.complement()),
            CountablePoints(Enumerator::SternBrocot) => "rationals".into(),
            CountablePoints(s) => s.name(),
            CoCountable(Enumerator::SternBrocot) => "irrationals".into(),
            CoCountable(s) => format!("co {}", s.name()),
            Generic => "generic".into(),
            Union(xs) => format!("union({})", join(xs)),
            Intersection(xs) => format!("intersect({})", join(xs)),
            IntersectWithOpen(x, u) => format!("meet-open({}; {u})", x.describe()),
            IntersectWithClosed(x, u) => {
                format!("meet-closed({}; {})", x.describe(), u.complement())
            }
        }
    }
}

impl fmt::Display for PresentedSublocale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Parses the sublocale expression grammar:
///
/// ```text
/// expr := "rationals" | "irrationals" | "generic" | "dyadics" | "points[...]"
///       | "co " enumerator | "closed " closed-set | ["open "] open-set
///       | "union(" expr {";" expr} ")" | "intersect(" expr {";" expr} ")"
///       | "meet-open(" expr ";" open-set ")" | "meet-closed(" expr ";" closed-set ")"
/// ```
pub fn parse_expression(input: &str) -> Result<PresentedSublocale, PresentedError> {
    let s = input.trim();
    let err = |reason: &str| PresentedError::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let parsed = if let Some(body) = call_body(s, "union") {
        PresentedSublocale::Union(split_args(body).into_iter().map(parse_expression).collect::<Result<_, _>>()?)
    } else if let Some(body) = call_body(s, "intersect") {
        PresentedSublocale::Intersection(
            split_args(body).into_iter().map(parse_expression).collect::<Result<_, _>>()?,
        )
    } else if let Some(body) = call_body(s, "meet-open") {
        let args = split_args(body);
        let [x, u] = args.as_slice() else {
            return Err(err("meet-open takes an expression and an open set"));
        };
        PresentedSublocale::IntersectWithOpen(Box::new(parse_expression(x)?), u.parse()?)
    } else if let Some(body) = call_body(s, "meet-closed") {
        let args = split_args(body);
        let [x, f] = args.as_slice() else {
            return Err(err("meet-closed takes an expression and a closed set"));
        };
        PresentedSublocale::IntersectWithClosed(Box::new(parse_expression(x)?), closed_complement(f)?)
    } else if let Some(rest) = s.strip_prefix("closed ") {
        PresentedSublocale::Closed(closed_complement(rest)?)
    } else if let Some(rest) = s.strip_prefix("open ") {
        PresentedSublocale::open(rest.parse()?)
    } else if let Some(rest) = s.strip_prefix("co ") {
        PresentedSublocale::CoCountable(rest.parse().map_err(|e: super::enumerate::UnknownEnumerator| err(&e.to_string()))?)
    } else {
        match s {
            "rationals" => PresentedSublocale::rationals(),
            "irrationals" => PresentedSublocale::irrationals(),
            "generic" => PresentedSublocale::Generic,
            "whole" => PresentedSublocale::open(RatOpen::unit()),
            _ if s.starts_with('(') || s.starts_with('[') || s == "empty" => {
                PresentedSublocale::open(s.parse()?)
            }
            _ => match s.parse::<Enumerator>() {
                Ok(e) => PresentedSublocale::CountablePoints(e),
                Err(_) => return Err(err("unknown constructor")),
            },
        }
    };
    parsed.check()?;
    Ok(parsed)
}

fn call_body<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.strip_prefix(name)?.trim_start().strip_prefix('(')?.strip_suffix(')')
}

/// Splits on `;` at bracket depth zero.
fn split_args(body: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in body.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ';' if depth == 0 => {
                out.push(body[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(body[start..].trim());
    out
}

/// Reads a closed subset of `[0,1]` and returns its open complement.
fn closed_complement(s: &str) -> Result<RatOpen, PresentedError> {
    let set = parse_real_set(s)?;
    if set.closure() != set {
        return Err(PresentedError::Parse {
            input: s.to_string(),
            reason: "set is not closed".into(),
        });
    }
    Ok(set.complement().interior())
}

/// Whether the closed point sublocale `{x}` meets the generic sublocale.
///
/// The generic part of a closed `F` equals the generic part of its
/// interior; `{x}` has empty interior in `[0,1]`, and the generic part of
/// an open `W` is empty exactly when the nucleus `H |-> W => (H u not not 0)`
/// sends the bottom to the top.
pub fn point_sublocale_meets_generic(x: &Q) -> bool {
    let int_f = RealSet::points([x.clone()]).interior();
    let e_gamma_bottom = RatOpen::empty().regularize();
    !int_f.heyting(&e_gamma_bottom).is_unit()
}

/// The generic sublocale is nonempty: its nucleus fixes the bottom.
pub fn generic_is_nonempty() -> bool {
    !RatOpen::empty().regularize().is_unit()
}

/// Exact nuclei on the rational opens of `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoNucleus {
    Whole,
    Empty,
    Open(RatOpen),
    /// Closed complement of the given open: `H |-> H u N`.
    Closed(RatOpen),
    Generic,
    /// Generic sublocale of the given sublocale.
    GenericIn(Box<RoNucleus>),
    /// Nucleus of `[U] n X` (open first) or `X n F` (closed last).
    IntersectOpen(RatOpen, Box<RoNucleus>),
    IntersectClosed(Box<RoNucleus>, RatOpen),
}

impl RoNucleus {
    pub fn apply(&self, h: &RatOpen) -> RatOpen {
        match self {
            RoNucleus::Whole => h.clone(),
            RoNucleus::Empty => RatOpen::unit(),
            RoNucleus::Open(u) => u.heyting(h),
            RoNucleus::Closed(n) => h.join(n),
            RoNucleus::Generic => h.regularize(),
            RoNucleus::GenericIn(x) => {
                let bottom = x.apply(&RatOpen::empty());
                let neg = |w: &RatOpen| w.heyting(&bottom);
                neg(&neg(&x.apply(h)))
            }
            RoNucleus::IntersectOpen(u, x) => u.heyting(&x.apply(h)),
            RoNucleus::IntersectClosed(x, n) => x.apply(&h.join(n)),
        }
    }

    /// First sample on which the two nuclei differ.
    pub fn first_difference(&self, other: &RoNucleus, samples: &[RatOpen]) -> Option<RatOpen> {
        samples
            .iter()
            .find(|h| self.apply(h) != other.apply(h))
            .cloned()
    }
}

/// A small deterministic family of opens with the endpoints `0, 1/4, ...,
/// 1` and their neighbours, used to compare nuclei.
pub fn probe_opens() -> Vec<RatOpen> {
    let cuts: Vec<Q> = (0..=4).map(|i| Q::new(i.into(), 4.into())).collect();
    let mut pieces = Vec::new();
    for (i, a) in cuts.iter().enumerate() {
        for b in &cuts[i + 1..] {
            let lo_closed = [false, *a == q0()];
            let hi_closed = [false, b.is_one()];
            for &lc in lo_closed.iter().filter(|&&c| !c || *a == q0()) {
                for &hc in hi_closed.iter().filter(|&&c| !c || b.is_one()) {
                    pieces.push(Interval::new(a.clone(), b.clone(), lc, hc));
                }
            }
        }
    }
    let mut out: Vec<RatOpen> = vec![RatOpen::empty()];
    for (i, p) in pieces.iter().enumerate() {
        out.push(RatOpen::normalize([p.clone()]).expect("valid"));
        for r in &pieces[i + 1..] {
            out.push(RatOpen::normalize([p.clone(), r.clone()]).expect("valid"));
        }
    }
    out.sort_by_key(|u| u.to_string());
    out.dedup();
    out
}
