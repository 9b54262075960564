//! Measures on `[0,1]` from a closed family of descriptors, with certified
//! bounds for presented sublocales.

use std::fmt;

use num::{BigInt, One, Signed, Zero};
use serde_json::Value;
use thiserror::Error;

use crate::interval::lazy::LazyError;
use crate::interval::presented::{OpenPresentation, PresentedError, PresentedSublocale, RoNucleus};
use crate::interval::ratopen::{parse_rational, parse_real_set, q0, q1, RatOpen, RealSet, Q};
use crate::interval::{Enumerator, IntervalError, LazyOpen};

/// Largest neighbourhood index tried by [`measure_bounds`].
pub const MAX_PRECISION: usize = 48;

/// Default tolerance, `1/1000`.
pub fn default_tolerance() -> Q {
    Q::new(BigInt::one(), BigInt::from(1000))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("constructor not supported: {0}")]
    UnsupportedConstructor(String),
    #[error("no residual bound for {0}")]
    NoResidualBound(String),
    #[error("tolerance {tol} not reached; best bounds [{lower}, {upper}]")]
    TolNotReached { lower: Q, upper: Q, tol: Q },
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error(transparent)]
    Lazy(#[from] LazyError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

impl From<PresentedError> for MeasureError {
    fn from(e: PresentedError) -> MeasureError {
        MeasureError::UnsupportedConstructor(e.to_string())
    }
}

/// A measure on `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Lebesgue,
    /// Lebesgue measure of the intersection with a fixed set.
    RestrictTo(RealSet),
    /// Point masses `(position, weight)`.
    Atomic(Vec<(Q, Q)>),
    /// Nonnegative combination.
    Mixture(Vec<(Q, Descriptor)>),
}

impl Descriptor {
    pub fn validate(&self) -> Result<(), MeasureError> {
        match self {
            Descriptor::Lebesgue | Descriptor::RestrictTo(_) => Ok(()),
            Descriptor::Atomic(atoms) => {
                for (p, w) in atoms {
                    if *p < q0() || *p > q1() {
                        return Err(MeasureError::InvalidDescriptor(format!("atom {p} outside [0,1]")));
                    }
                    if w.is_negative() {
                        return Err(MeasureError::InvalidDescriptor(format!("negative weight {w}")));
                    }
                }
                Ok(())
            }
            Descriptor::Mixture(items) => {
                for (c, d) in items {
                    if c.is_negative() {
                        return Err(MeasureError::InvalidDescriptor(format!("negative coefficient {c}")));
                    }
                    d.validate()?;
                }
                Ok(())
            }
        }
    }

    /// Exact measure of a finite union of intervals.
    pub fn measure(&self, s: &RealSet) -> Q {
        match self {
            Descriptor::Lebesgue => s.length(),
            Descriptor::RestrictTo(r) => s.intersect(r).length(),
            Descriptor::Atomic(atoms) => atoms
                .iter()
                .filter(|(p, _)| s.contains(p))
                .map(|(_, w)| w.clone())
                .sum(),
            Descriptor::Mixture(items) => items.iter().map(|(c, d)| c * d.measure(s)).sum(),
        }
    }

    pub fn measure_open(&self, u: &RatOpen) -> Q {
        self.measure(u.as_set())
    }

    pub fn total(&self) -> Q {
        self.measure(&RealSet::unit())
    }

    /// Weight carried by the single point `x`.
    pub fn point_mass(&self, x: &Q) -> Q {
        self.measure(&RealSet::points([x.clone()]))
    }

    /// Positions carrying positive mass, sorted.
    pub fn atoms(&self) -> Vec<Q> {
        let mut out: Vec<Q> = Vec::new();
        self.collect_atoms(&mut out);
        out.sort();
        out.dedup();
        out.retain(|p| self.point_mass(p).is_positive());
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Q>) {
        match self {
            Descriptor::Atomic(atoms) => out.extend(atoms.iter().map(|(p, _)| p.clone())),
            Descriptor::Mixture(items) => items.iter().for_each(|(_, d)| d.collect_atoms(out)),
            _ => {}
        }
    }

    /// Closed support.
    pub fn support(&self) -> RealSet {
        match self {
            Descriptor::Lebesgue => RealSet::unit(),
            Descriptor::RestrictTo(r) => RealSet::from_intervals(
                r.parts().iter().filter(|p| p.lo < p.hi).cloned(),
            )
            .closure(),
            Descriptor::Atomic(atoms) => RealSet::points(
                atoms
                    .iter()
                    .filter(|(_, w)| w.is_positive())
                    .map(|(p, _)| p.clone()),
            ),
            Descriptor::Mixture(items) => items
                .iter()
                .filter(|(c, _)| c.is_positive())
                .fold(RealSet::empty(), |acc, (_, d)| acc.union(&d.support())),
        }
    }

    /// The largest open of measure zero: the complement of the support.
    pub fn null_open(&self) -> RatOpen {
        self.support().complement().interior()
    }

    /// Upper bound on `mu(limit - stage(n))` for a lazy open.
    pub fn tail(&self, l: &LazyOpen, n: usize) -> Option<Q> {
        match self {
            Descriptor::Lebesgue | Descriptor::RestrictTo(_) => l.lebesgue_tail(n),
            Descriptor::Atomic(atoms) => {
                if matches!(l, LazyOpen::Custom { .. }) {
                    return None;
                }
                let stage = l.stage(n);
                Some(
                    atoms
                        .iter()
                        .filter(|(p, _)| !stage.contains(p) && may_gain(l, p))
                        .map(|(_, w)| w.clone())
                        .sum(),
                )
            }
            Descriptor::Mixture(items) => items
                .iter()
                .map(|(c, d)| d.tail(l, n).map(|t| c * t))
                .sum(),
        }
    }

    /// Reads `lebesgue`, `restrict <set>`, `atoms [[p,w],...]`, or the JSON
    /// form.
    pub fn parse(s: &str) -> Result<Descriptor, MeasureError> {
        let t = s.trim();
        if t.starts_with('{') || t.starts_with('"') {
            let v: Value = serde_json::from_str(t)
                .map_err(|e| MeasureError::InvalidDescriptor(e.to_string()))?;
            return Descriptor::from_json(&v);
        }
        if t == "lebesgue" {
            return Ok(Descriptor::Lebesgue);
        }
        if let Some(rest) = t.strip_prefix("restrict ") {
            return Ok(Descriptor::RestrictTo(parse_real_set(rest)?));
        }
        if let Some(rest) = t.strip_prefix("atoms ") {
            let inner = rest
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| MeasureError::InvalidDescriptor(t.to_string()))?;
            let mut atoms = Vec::new();
            for pair in inner.split(']').map(str::trim).filter(|p| !p.is_empty()) {
                let body = pair.trim_start_matches(',').trim().trim_start_matches('[');
                let (p, w) = body
                    .split_once(',')
                    .ok_or_else(|| MeasureError::InvalidDescriptor(pair.to_string()))?;
                atoms.push((parse_rational(p)?, parse_rational(w)?));
            }
            let d = Descriptor::Atomic(atoms);
            d.validate()?;
            return Ok(d);
        }
        Err(MeasureError::InvalidDescriptor(t.to_string()))
    }

    /// `"lebesgue" | {"restrict": "[0,1/2]"} | {"atoms": [["1/2","1"]]} |
    /// {"mix": [["1/2", <descriptor>], ...]}`.
    pub fn from_json(v: &Value) -> Result<Descriptor, MeasureError> {
        let bad = |what: &str| MeasureError::InvalidDescriptor(what.to_string());
        let rational = |v: &Value| -> Result<Q, MeasureError> {
            match v {
                Value::String(s) => Ok(parse_rational(s)?),
                Value::Number(n) => Ok(parse_rational(&n.to_string())?),
                _ => Err(bad("expected a number or a \"p/q\" string")),
            }
        };
        let d = match v {
            Value::String(s) if s == "lebesgue" => Descriptor::Lebesgue,
            Value::Object(map) if map.len() == 1 => {
                let (key, body) = map.iter().next().expect("one entry");
                match key.as_str() {
                    "restrict" => Descriptor::RestrictTo(parse_real_set(
                        body.as_str().ok_or_else(|| bad("restrict expects a string"))?,
                    )?),
                    "atoms" => Descriptor::Atomic(
                        body.as_array()
                            .ok_or_else(|| bad("atoms expects an array"))?
                            .iter()
                            .map(|pair| match pair.as_array().map(Vec::as_slice) {
                                Some([p, w]) => Ok((rational(p)?, rational(w)?)),
                                _ => Err(bad("each atom is [position, weight]")),
                            })
                            .collect::<Result<_, _>>()?,
                    ),
                    "mix" => Descriptor::Mixture(
                        body.as_array()
                            .ok_or_else(|| bad("mix expects an array"))?
                            .iter()
                            .map(|pair| match pair.as_array().map(Vec::as_slice) {
                                Some([c, d]) => Ok((rational(c)?, Descriptor::from_json(d)?)),
                                _ => Err(bad("each mix entry is [coefficient, descriptor]")),
                            })
                            .collect::<Result<_, _>>()?,
                    ),
                    other => return Err(bad(&format!("unknown descriptor key {other:?}"))),
                }
            }
            _ => return Err(bad("expected \"lebesgue\" or a one-key object")),
        };
        d.validate()?;
        Ok(d)
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Lebesgue => write!(f, "lebesgue"),
            Descriptor::RestrictTo(r) => write!(f, "restrict {r}"),
            Descriptor::Atomic(atoms) => {
                let parts: Vec<String> = atoms.iter().map(|(p, w)| format!("[{p},{w}]")).collect();
                write!(f, "atoms [{}]", parts.join(","))
            }
            Descriptor::Mixture(items) => {
                let parts: Vec<String> = items.iter().map(|(c, d)| format!("{c}*({d})")).collect();
                write!(f, "mix({})", parts.join(" + "))
            }
        }
    }
}

/// Whether `x` could enter a later stage of `l`.
fn may_gain(l: &LazyOpen, x: &Q) -> bool {
    match l {
        LazyOpen::Constant(_) => false,
        LazyOpen::Cover { excluded, .. } => !excluded.contains(x),
        LazyOpen::Join(items) => items.iter().any(|i| may_gain(i, x)),
        LazyOpen::Meet(items) => items.iter().any(|i| may_gain(i, x)),
        LazyOpen::Custom { .. } => true,
    }
}

/// Certified bounds with a note on where each side came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureBounds {
    pub lower: Q,
    pub upper: Q,
    pub lower_certificate: String,
    pub upper_certificate: String,
}

impl MeasureBounds {
    pub fn exact(v: Q, why: &str) -> MeasureBounds {
        MeasureBounds {
            lower: v.clone(),
            upper: v,
            lower_certificate: why.to_string(),
            upper_certificate: why.to_string(),
        }
    }

    pub fn width(&self) -> Q {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.lower <= *x && *x <= self.upper
    }
}

impl fmt::Display for MeasureBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lower == self.upper {
            write!(f, "exactly {}", self.lower)
        } else {
            write!(f, "[{}, {}]", self.lower, self.upper)
        }
    }
}

/// Exact for a fixed open; for a lazy open, stages are refined until the
/// residual bound is within `tol`.
pub fn measure_open(d: &Descriptor, u: &OpenPresentation, tol: &Q) -> Result<MeasureBounds, MeasureError> {
    match u {
        OpenPresentation::Fixed(u) => Ok(MeasureBounds::exact(d.measure_open(u), "finite union of intervals")),
        OpenPresentation::Lazy(l) => {
            let mut cursor = l.cursor();
            let mut n = 0usize;
            loop {
                let stage = cursor.stage(n)?;
                let tail = d
                    .tail(l, n)
                    .ok_or_else(|| MeasureError::NoResidualBound(l.describe()))?;
                let lower = d.measure_open(&stage);
                if tail <= *tol {
                    return Ok(MeasureBounds {
                        upper: &lower + &tail,
                        lower,
                        lower_certificate: format!("stage {n}"),
                        upper_certificate: format!("stage {n} plus residual {tail}"),
                    });
                }
                if n >= 1 << 14 {
                    return Err(MeasureError::TolNotReached {
                        upper: &lower + &tail,
                        lower,
                        tol: tol.clone(),
                    });
                }
                n = if n == 0 { 1 } else { n * 2 };
            }
        }
    }
}

/// Upper bound on `mu` of the limit of `l`: the best of `mu(stage(n)) +
/// tail(n)` over a few stages.
fn open_upper(d: &Descriptor, l: &LazyOpen) -> Result<Option<(Q, usize)>, MeasureError> {
    let mut best: Option<(Q, usize)> = None;
    let mut cursor = l.cursor();
    for n in [0usize, 4, 16, 64] {
        let stage = cursor.stage(n)?;
        let Some(tail) = d.tail(l, n) else {
            return Ok(None);
        };
        let bound = d.measure_open(&stage) + tail;
        if best.as_ref().is_none_or(|(b, _)| bound < *b) {
            best = Some((bound, n));
        }
        if matches!(l, LazyOpen::Constant(_)) {
            break;
        }
    }
    Ok(best)
}

fn upper_at(d: &Descriptor, x: &PresentedSublocale, k: usize) -> Result<Option<(Q, String)>, MeasureError> {
    let v = x.neighborhood(k, &d.atoms())?;
    Ok(open_upper(d, &v)?.map(|(b, n)| {
        (b, format!("neighbourhood {k} ({}) at stage {n}", v.describe()))
    }))
}

fn lower_at(d: &Descriptor, x: &PresentedSublocale, k: usize, tol: &Q) -> Result<(Q, String), MeasureError> {
    use PresentedSublocale::*;
    let total = d.total();
    let clamp = |v: Q| if v.is_negative() { q0() } else { v };
    Ok(match x {
        Open(u) => {
            let b = measure_open(d, u, tol)?;
            (b.lower, format!("open, {}", b.lower_certificate))
        }
        Closed(u) => (
            clamp(&total - d.measure_open(u)),
            "covering partner: the complementary open".into(),
        ),
        CountablePoints(s) => match upper_at(d, &CoCountable(s.clone()), k)? {
            Some((up, _)) => (clamp(&total - up), format!("covering partner: co {s}")),
            None => (q0(), "nonnegativity".into()),
        },
        CoCountable(s) => match upper_at(d, &CountablePoints(s.clone()), k)? {
            Some((up, _)) => (clamp(&total - up), format!("covering partner: points of {s}")),
            None => (q0(), "nonnegativity".into()),
        },
        Generic | Intersection(_) => (q0(), "nonnegativity".into()),
        Union(xs) if covers_everything(xs) => (total, "members cover the whole space".into()),
        Union(xs) => {
            let mut best = (q0(), "nonnegativity".to_string());
            // the open and closed members form a spatial set: split by the
            // open meet of the closed members' complements
            let opens: Vec<&RatOpen> = xs
                .iter()
                .filter_map(|y| match y {
                    Open(OpenPresentation::Fixed(u)) => Some(u),
                    _ => None,
                })
                .collect();
            let closeds: Vec<&RatOpen> = xs
                .iter()
                .filter_map(|y| match y {
                    Closed(v) => Some(v),
                    _ => None,
                })
                .collect();
            if opens.len() + closeds.len() >= 2 {
                let outside = closeds.iter().fold(RatOpen::unit(), |acc, v| acc.meet(v));
                let inside = if closeds.is_empty() { RealSet::empty() } else { outside.complement() };
                let set = RatOpen::join_all(opens).as_set().union(&inside);
                best = (d.measure(&set), "open and closed members as a set".into());
            }
            for y in xs {
                let (l, why) = lower_at(d, y, k, tol)?;
                if l > best.0 {
                    best = (l, format!("member {}: {why}", y.describe()));
                }
            }
            best
        }
        IntersectWithOpen(y, u) => {
            let (l, why) = lower_at(d, y, k, tol)?;
            let outside = &total - d.measure_open(u);
            (clamp(l - outside), format!("{why}, minus the mass outside {u}"))
        }
        IntersectWithClosed(y, u) => {
            let (l, why) = lower_at(d, y, k, tol)?;
            (clamp(l - d.measure_open(u)), format!("{why}, minus the mass of {u}"))
        }
    })
}

/// An open together with a closed sublocale outside it, or a countable set
/// together with its co-countable complement.
fn covers_everything(xs: &[PresentedSublocale]) -> bool {
    use PresentedSublocale::*;
    xs.iter().any(|a| {
        xs.iter().any(|b| match (a, b) {
            (Open(OpenPresentation::Fixed(u)), Closed(v)) => v.leq(u),
            (CountablePoints(s), CoCountable(t)) => s == t,
            _ => false,
        })
    })
}

/// Certified bounds on the outer measure of a presented sublocale, refined
/// until their width is at most `tol`.
pub fn measure_bounds(d: &Descriptor, x: &PresentedSublocale, tol: &Q) -> Result<MeasureBounds, MeasureError> {
    d.validate()?;
    x.check()?;
    let mut best = MeasureBounds {
        lower: q0(),
        upper: d.total(),
        lower_certificate: "nonnegativity".into(),
        upper_certificate: "total mass".into(),
    };
    for k in 0..=MAX_PRECISION {
        if let Some((up, why)) = upper_at(d, x, k)? {
            if up < best.upper {
                best.upper = up;
                best.upper_certificate = why;
            }
        }
        let (lo, why) = lower_at(d, x, k, tol)?;
        if lo > best.lower {
            best.lower = lo;
            best.lower_certificate = why;
        }
        if best.width() <= *tol {
            return Ok(best);
        }
    }
    if let PresentedSublocale::Open(OpenPresentation::Lazy(l)) = x {
        if d.tail(l, 0).is_none() {
            return Err(MeasureError::NoResidualBound(l.describe()));
        }
    }
    Err(MeasureError::TolNotReached {
        lower: best.lower,
        upper: best.upper,
        tol: tol.clone(),
    })
}

/// Interval bounds on `mu(A u B) - mu(A) - mu(B) + mu(A n B)`.
#[derive(Clone, Debug)]
pub struct AdditivityCheck {
    pub a: MeasureBounds,
    pub b: MeasureBounds,
    pub union: MeasureBounds,
    pub intersection: MeasureBounds,
    pub lower: Q,
    pub upper: Q,
}

impl AdditivityCheck {
    pub fn width(&self) -> Q {
        &self.upper - &self.lower
    }

    pub fn contains_zero(&self) -> bool {
        !self.lower.is_positive() && !self.upper.is_negative()
    }
}

pub fn strict_additivity_check(
    d: &Descriptor,
    a: &PresentedSublocale,
    b: &PresentedSublocale,
    tol: &Q,
) -> Result<AdditivityCheck, MeasureError> {
    let ma = measure_bounds(d, a, tol)?;
    let mb = measure_bounds(d, b, tol)?;
    let mu = measure_bounds(d, &PresentedSublocale::Union(vec![a.clone(), b.clone()]), tol)?;
    let mi = measure_bounds(d, &PresentedSublocale::Intersection(vec![a.clone(), b.clone()]), tol)?;
    Ok(AdditivityCheck {
        lower: &mu.lower - &ma.upper - &mb.upper + &mi.lower,
        upper: &mu.upper - &ma.lower - &mb.lower + &mi.upper,
        a: ma,
        b: mb,
        union: mu,
        intersection: mi,
    })
}

/// A partner `B` for `A` with `mu(A u B) = mu(E)` and `mu(A n B)` at most
/// the tolerance.
#[derive(Clone, Debug)]
pub struct PresentedNullPartner {
    pub partner: PresentedSublocale,
    pub union: MeasureBounds,
    pub intersection: MeasureBounds,
}

pub fn null_partner(d: &Descriptor, a: &PresentedSublocale, tol: &Q) -> Result<PresentedNullPartner, MeasureError> {
    use PresentedSublocale::*;
    let partner = match a {
        Open(OpenPresentation::Fixed(u)) => Closed(u.clone()),
        Closed(u) => PresentedSublocale::open(u.clone()),
        CountablePoints(s) => CoCountable(s.clone()),
        CoCountable(s) => CountablePoints(s.clone()),
        Generic => CoCountable(Enumerator::SternBrocot),
        other => {
            return Err(MeasureError::UnsupportedConstructor(format!(
                "no null partner for {}",
                other.describe()
            )))
        }
    };
    let union = measure_bounds(d, &Union(vec![a.clone(), partner.clone()]), tol)?;
    let intersection = measure_bounds(d, &Intersection(vec![a.clone(), partner.clone()]), tol)?;
    Ok(PresentedNullPartner {
        partner,
        union,
        intersection,
    })
}

/// The reduction nucleus `e_mu` of a descriptor on the rational opens.
#[derive(Clone, Debug)]
pub struct IntervalReduction {
    pub descriptor: Descriptor,
    pub null_open: RatOpen,
}

/// `e_mu(U)` is the largest open containing `U` with the same measure: `U`
/// joined with the largest null open, plus every isolated missing point
/// that carries no mass.
pub fn mu_reduce(d: &Descriptor) -> Result<IntervalReduction, MeasureError> {
    d.validate()?;
    Ok(IntervalReduction {
        descriptor: d.clone(),
        null_open: d.null_open(),
    })
}

impl IntervalReduction {
    pub fn apply(&self, u: &RatOpen) -> RatOpen {
        let w = u.join(&self.null_open);
        let fill: Vec<Q> = w
            .isolated_gaps()
            .into_iter()
            .filter(|p| self.descriptor.point_mass(p).is_zero())
            .collect();
        if fill.is_empty() {
            return w;
        }
        w.as_set().union(&RealSet::points(fill)).interior()
    }

    /// Exterior of the reduced sublocale, `e_mu(empty)`.
    pub fn exterior(&self) -> RatOpen {
        self.apply(&RatOpen::empty())
    }

    /// Closure of the reduced sublocale as a closed-sublocale nucleus.
    pub fn closure(&self) -> RoNucleus {
        RoNucleus::Closed(self.exterior())
    }

    /// First probe where this nucleus differs from `other`.
    pub fn first_difference(&self, other: &RoNucleus, samples: &[RatOpen]) -> Option<RatOpen> {
        samples.iter().find(|h| self.apply(h) != other.apply(h)).cloned()
    }

    /// First probe where the reduced sublocale is not inside `other`, i.e.
    /// where `e_mu(H) < e_other(H)`.
    pub fn first_escape(&self, other: &RoNucleus, samples: &[RatOpen]) -> Option<RatOpen> {
        samples.iter().find(|h| !other.apply(h).leq(&self.apply(h))).cloned()
    }
}

/// The three standard reduction scenarios.
pub fn lebesgue_restricted_to_lower_half() -> Descriptor {
    Descriptor::RestrictTo(RealSet::from_intervals([crate::interval::Interval::closed(
        q0(),
        Q::new(1.into(), 2.into()),
    )]))
}

pub fn unit_atom_at_half() -> Descriptor {
    Descriptor::Atomic(vec![(Q::new(1.into(), 2.into()), q1())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::presented::probe_opens;
    use crate::interval::ratopen::q;

    fn ro(s: &str) -> RatOpen {
        s.parse().unwrap()
    }

    fn tol() -> Q {
        default_tolerance()
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!(Descriptor::parse("lebesgue").unwrap(), Descriptor::Lebesgue);
        assert_eq!(Descriptor::parse("atoms [[1/2,1]]").unwrap(), unit_atom_at_half());
        assert_eq!(
            Descriptor::parse("atoms [[1/2,1],[1/3, 1/4]]").unwrap(),
            Descriptor::Atomic(vec![(q(1, 2), q(1, 1)), (q(1, 3), q(1, 4))])
        );
        assert_eq!(
            Descriptor::parse(r#"{"restrict": "[0,1/2]"}"#).unwrap(),
            lebesgue_restricted_to_lower_half()
        );
        let mix = Descriptor::parse(r#"{"mix": [["1/2", "lebesgue"], ["1/2", {"atoms": [["1/2", "1"]]}]]}"#)
            .unwrap();
        assert_eq!(mix.total(), q(1, 1));
        assert_eq!(mix.atoms(), vec![q(1, 2)]);
        assert!(Descriptor::parse("counting").is_err());
        assert!(Descriptor::parse(r#"{"atoms": [["2", "1"]]}"#).is_err());
    }

    #[test]
    fn open_measures() {
        assert_eq!(Descriptor::Lebesgue.measure_open(&ro("(0,1/2)")), q(1, 2));
        assert_eq!(unit_atom_at_half().measure_open(&ro("(0,1/2)")), q(0, 1));
        let c = LazyOpen::Cover {
            points: Enumerator::SternBrocot,
            epsilon: q(1, 4),
            excluded: vec![],
        };
        let b = measure_open(&Descriptor::Lebesgue, &OpenPresentation::Lazy(c.clone()), &tol()).unwrap();
        assert!(b.width() <= tol());
        assert!(b.upper <= q(1, 8));
        for n in [0, 3, 40] {
            assert!(Descriptor::Lebesgue.measure_open(&c.stage(n)) <= q(1, 8));
        }
    }

    #[test]
    fn missing_residual_is_an_error() {
        let custom = LazyOpen::Custom {
            name: "opaque".into(),
            stage: std::sync::Arc::new(|_| RatOpen::empty()),
        };
        assert!(matches!(
            measure_open(&Descriptor::Lebesgue, &OpenPresentation::Lazy(custom.clone()), &tol()),
            Err(MeasureError::NoResidualBound(_))
        ));
        let x = PresentedSublocale::Open(OpenPresentation::Lazy(custom));
        assert!(matches!(
            measure_bounds(&Descriptor::Lebesgue, &x, &tol()),
            Err(MeasureError::NoResidualBound(_))
        ));
    }

    #[test]
    fn lebesgue_bounds_for_the_standard_sublocales() {
        let l = Descriptor::Lebesgue;
        let r = measure_bounds(&l, &PresentedSublocale::rationals(), &tol()).unwrap();
        assert!(r.lower.is_zero() && r.upper <= tol());
        let i = measure_bounds(&l, &PresentedSublocale::irrationals(), &tol()).unwrap();
        assert!(i.lower >= q1() - tol() && i.upper <= q1());
        let g = measure_bounds(&l, &PresentedSublocale::Generic, &tol()).unwrap();
        assert!(g.lower.is_zero() && g.upper <= tol());
        let h = measure_bounds(&l, &PresentedSublocale::open(ro("(0,1/2)")), &tol()).unwrap();
        assert_eq!((h.lower, h.upper), (q(1, 2), q(1, 2)));
        let f = measure_bounds(&l, &PresentedSublocale::Closed(ro("(0,1/2)")), &tol()).unwrap();
        assert!(f.contains(&q(1, 2)) && f.width() <= tol());
    }

    #[test]
    fn atoms_and_generic() {
        let b = measure_bounds(&unit_atom_at_half(), &PresentedSublocale::Generic, &tol()).unwrap();
        assert_eq!((b.lower, b.upper), (q0(), q0()));
        let p = measure_bounds(&unit_atom_at_half(), &PresentedSublocale::rationals(), &tol()).unwrap();
        assert_eq!((p.lower, p.upper), (q1(), q1()));
        let c = measure_bounds(&unit_atom_at_half(), &PresentedSublocale::irrationals(), &tol()).unwrap();
        assert_eq!((c.lower, c.upper), (q0(), q0()));
    }

    #[test]
    fn strict_additivity_for_rationals_and_irrationals() {
        let check = strict_additivity_check(
            &Descriptor::Lebesgue,
            &PresentedSublocale::rationals(),
            &PresentedSublocale::irrationals(),
            &tol(),
        )
        .unwrap();
        assert!(check.contains_zero());
        assert!(check.width() <= tol() * Q::from_integer(4.into()));
        assert!(check.intersection.upper <= tol());
        assert!(check.union.lower >= q1() - tol());
    }

    #[test]
    fn null_partners() {
        let l = Descriptor::Lebesgue;
        let p = null_partner(&l, &PresentedSublocale::rationals(), &tol()).unwrap();
        assert!(p.union.lower >= q1() - tol());
        assert!(p.intersection.upper <= tol());
        let whole = null_partner(&l, &PresentedSublocale::open(RatOpen::unit()), &tol()).unwrap();
        assert!(whole.intersection.upper.is_zero());
        let o = null_partner(&l, &PresentedSublocale::open(ro("(0,1/2)")), &tol()).unwrap();
        assert!(o.union.contains(&q1()) && o.intersection.upper <= tol());
    }

    #[test]
    fn reductions() {
        let probes = probe_opens();
        let leb = mu_reduce(&Descriptor::Lebesgue).unwrap();
        assert_eq!(leb.apply(&ro("(0,1/2)|(1/2,1)")), RatOpen::unit());
        assert!(leb.first_difference(&RoNucleus::Generic, &probes).is_none());

        let atom = mu_reduce(&unit_atom_at_half()).unwrap();
        let punctured = ro("[0,1/2)|(1/2,1]");
        assert!(atom.first_difference(&RoNucleus::Closed(punctured.clone()), &probes).is_none());
        let mut fixed: Vec<RatOpen> = probes.iter().map(|h| atom.apply(h)).collect();
        fixed.sort_by_key(|u| u.to_string());
        fixed.dedup();
        assert_eq!(fixed, vec![punctured, RatOpen::unit()]);

        let half = mu_reduce(&lebesgue_restricted_to_lower_half()).unwrap();
        let upper = ro("(1/2,1]");
        assert_eq!(half.exterior(), upper);
        assert!(half.first_escape(&RoNucleus::Closed(upper.clone()), &probes).is_none());
        assert_eq!(half.apply(&ro("(0,1/2)")), RatOpen::unit());
        let generic_part = RoNucleus::GenericIn(Box::new(RoNucleus::Closed(upper)));
        assert!(half.first_difference(&generic_part, &probes).is_none());

        for r in [&leb, &atom, &half] {
            for h in &probes {
                let once = r.apply(h);
                assert!(h.leq(&once));
                assert_eq!(r.apply(&once), once);
            }
        }
    }
}
