//! Finite frames: complete distributive lattices given by an explicit order.
//!
//! A [`Frame`] is validated once at construction and afterwards carries
//! precomputed meet, join and Heyting implication tables. Elements are
//! addressed by [`Elem`] indices into those tables.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an element inside a [`Frame`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub(crate) usize);

impl Elem {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Raw description of a finite poset, as read from a frame file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<HashMap<String, String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Bottom,
    Top,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MissingOp {
    Meet,
    Join,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("frame has no elements")]
    Empty,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("duplicate order pair ({0}, {1})")]
    DuplicatePair(String, String),
    #[error("order pair mentions unknown element `{0}`")]
    UnknownElement(String),
    #[error("order is not antisymmetric: {a} <= {b} <= {a}")]
    NotPartialOrder { a: String, b: String },
    #[error("no unique {which:?} element")]
    MissingBound { which: Bound },
    #[error("not a lattice: {a} and {b} have no {missing:?}")]
    NotALattice {
        a: String,
        b: String,
        missing: MissingOp,
    },
    #[error("not distributive: {w} /\\ ({a} \\/ {b}) != ({w} /\\ {a}) \\/ ({w} /\\ {b})")]
    NotDistributive { w: String, a: String, b: String },
}

/// A finite frame with all lattice tables computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    imp: Vec<Elem>,
    bottom: Elem,
    top: Elem,
}

/// Builds and validates a frame from a spec.
pub fn build_frame(spec: &FrameSpec) -> Result<Frame, FrameError> {
    if spec.elements.is_empty() {
        return Err(FrameError::Empty);
    }
    let mut index = HashMap::new();
    for (i, name) in spec.elements.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(FrameError::DuplicateElement(name.clone()));
        }
    }
    let n = spec.elements.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    let mut seen = std::collections::HashSet::new();
    for (a, b) in &spec.leq {
        if !seen.insert((a.clone(), b.clone())) {
            return Err(FrameError::DuplicatePair(a.clone(), b.clone()));
        }
        let ia = *index
            .get(a)
            .ok_or_else(|| FrameError::UnknownElement(a.clone()))?;
        let ib = *index
            .get(b)
            .ok_or_else(|| FrameError::UnknownElement(b.clone()))?;
        leq[ia * n + ib] = true;
    }
    // Warshall closure.
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
    Frame::from_order(spec.elements.clone(), leq)
}

impl Frame {
    /// Builds a frame from names and a full `n * n` order matrix, which must
    /// already be reflexive and transitive.
    pub fn from_order(names: Vec<String>, leq: Vec<bool>) -> Result<Frame, FrameError> {
        let n = names.len();
        if n == 0 {
            return Err(FrameError::Empty);
        }
        assert_eq!(leq.len(), n * n, "order matrix has wrong size");
        let le = |a: usize, b: usize| leq[a * n + b];
        for a in 0..n {
            for b in (a + 1)..n {
                if le(a, b) && le(b, a) {
                    return Err(FrameError::NotPartialOrder {
                        a: names[a].clone(),
                        b: names[b].clone(),
                    });
                }
            }
        }
        let bottom = (0..n).filter(|&b| (0..n).all(|x| le(b, x))).collect::<Vec<_>>();
        if bottom.len() != 1 {
            return Err(FrameError::MissingBound {
                which: Bound::Bottom,
            });
        }
        let top = (0..n).filter(|&t| (0..n).all(|x| le(x, t))).collect::<Vec<_>>();
        if top.len() != 1 {
            return Err(FrameError::MissingBound { which: Bound::Top });
        }

        let mut meet = vec![Elem(0); n * n];
        let mut join = vec![Elem(0); n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&x| le(x, a) && le(x, b)).collect();
                let glb = lower.iter().copied().find(|&x| lower.iter().all(|&y| le(y, x)));
                let upper: Vec<usize> = (0..n).filter(|&x| le(a, x) && le(b, x)).collect();
                let lub = upper.iter().copied().find(|&x| upper.iter().all(|&y| le(x, y)));
                match (glb, lub) {
                    (Some(m), Some(j)) => {
                        meet[a * n + b] = Elem(m);
                        join[a * n + b] = Elem(j);
                    }
                    (None, _) => {
                        return Err(FrameError::NotALattice {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            missing: MissingOp::Meet,
                        })
                    }
                    (_, None) => {
                        return Err(FrameError::NotALattice {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            missing: MissingOp::Join,
                        })
                    }
                }
            }
        }
        // In a finite lattice the frame law reduces to binary distributivity.
        for w in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let lhs = meet[w * n + join[a * n + b].0];
                    let wa = meet[w * n + a].0;
                    let wb = meet[w * n + b].0;
                    if lhs != join[wa * n + wb] {
                        return Err(FrameError::NotDistributive {
                            w: names[w].clone(),
                            a: names[a].clone(),
                            b: names[b].clone(),
                        });
                    }
                }
            }
        }
        let mut imp = vec![Elem(0); n * n];
        for u in 0..n {
            for h in 0..n {
                let mut acc = bottom[0];
                for w in 0..n {
                    if le(meet[w * n + u].0, h) {
                        acc = join[acc * n + w].0;
                    }
                }
                imp[u * n + h] = Elem(acc);
            }
        }
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), Elem(i)))
            .collect();
        Ok(Frame {
            names,
            index,
            leq,
            meet,
            join,
            imp,
            bottom: Elem(bottom[0]),
            top: Elem(top[0]),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + ExactSizeIterator + Clone {
        (0..self.names.len()).map(Elem)
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elem(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a.0 * self.len() + b.0]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a.0 * self.len() + b.0]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a.0 * self.len() + b.0]
    }

    /// Join of an arbitrary (finite) family; the empty join is bottom.
    pub fn join_all<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items
            .into_iter()
            .fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of a finite family; the empty meet is top.
    pub fn meet_all<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Heyting implication `u => h`: the largest `w` with `w /\ u <= h`.
    pub fn heyting(&self, u: Elem, h: Elem) -> Elem {
        self.imp[u.0 * self.len() + h.0]
    }

    pub fn pseudo_complement(&self, u: Elem) -> Elem {
        self.heyting(u, self.bottom)
    }

    /// `w` is well inside `u` when `not w \/ u = top`.
    pub fn well_inside(&self, w: Elem, u: Elem) -> bool {
        self.join(self.pseudo_complement(w), u) == self.top
    }

    /// Every element is the join of the elements well inside it.
    pub fn is_regular(&self) -> bool {
        self.elements().all(|u| {
            let cover = self.join_all(self.elements().filter(|&w| self.well_inside(w, u)));
            cover == u
        })
    }

    pub fn is_boolean(&self) -> bool {
        self.elements()
            .all(|u| self.join(u, self.pseudo_complement(u)) == self.top)
    }

    /// Atoms: minimal non-bottom elements.
    pub fn atoms(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&a| {
                a != self.bottom
                    && self
                        .elements()
                        .all(|x| x == a || x == self.bottom || !self.leq(x, a))
            })
            .collect()
    }

    /// Points: frame homomorphisms into the two-element chain.
    ///
    /// On a finite frame each point is the characteristic map of the principal
    /// filter of a join-prime element; every candidate is re-validated against
    /// the homomorphism laws before it is returned.
    pub fn points(&self) -> Vec<Point> {
        self.elements()
            .filter(|&p| p != self.bottom && self.is_join_prime(p))
            .map(|p| Point {
                generator: p,
                map: self.elements().map(|x| self.leq(p, x)).collect(),
            })
            .filter(|pt| self.is_two_valued_homomorphism(&pt.map))
            .collect()
    }

    fn is_join_prime(&self, p: Elem) -> bool {
        self.elements().all(|a| {
            self.elements().all(|b| {
                !self.leq(p, self.join(a, b)) || self.leq(p, a) || self.leq(p, b)
            })
        })
    }

    /// Checks that `map` (indexed by element) preserves bottom, top, binary
    /// meets and binary joins.
    pub fn is_two_valued_homomorphism(&self, map: &[bool]) -> bool {
        if map.len() != self.len() || map[self.bottom.0] || !map[self.top.0] {
            return false;
        }
        self.elements().all(|a| {
            self.elements().all(|b| {
                map[self.meet(a, b).0] == (map[a.0] && map[b.0])
                    && map[self.join(a, b).0] == (map[a.0] || map[b.0])
            })
        })
    }

    /// The frame restricted to a subset that is itself a frame under the
    /// induced order (fixpoints of a nucleus, for instance).
    pub fn subframe_on(&self, members: &[Elem]) -> Result<Frame, FrameError> {
        let names = members.iter().map(|&e| self.name(e).to_string()).collect();
        let k = members.len();
        let mut leq = vec![false; k * k];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                leq[i * k + j] = self.leq(a, b);
            }
        }
        Frame::from_order(names, leq)
    }

    /// Writes the frame back out as a spec listing the covering relation.
    pub fn to_spec(&self) -> FrameSpec {
        let mut leq = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if a != b && self.leq(a, b) && self.covers(a, b) {
                    leq.push((self.name(a).to_string(), self.name(b).to_string()));
                }
            }
        }
        FrameSpec {
            elements: self.names.clone(),
            leq,
            labels: None,
        }
    }

    fn covers(&self, a: Elem, b: Elem) -> bool {
        !self
            .elements()
            .any(|x| x != a && x != b && self.leq(a, x) && self.leq(x, b))
    }
}

/// A point of a frame, i.e. a homomorphism to the two-element chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    /// The least element sent to top.
    pub generator: Elem,
    pub map: Vec<bool>,
}

/// Chain `0 < 1 < ... < n-1` named by its indices.
pub fn chain(n: usize) -> Frame {
    assert!(n >= 1);
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in i..n {
            leq[i * n + j] = true;
        }
    }
    Frame::from_order(names, leq).expect("chains are frames")
}

/// Powerset of `n` atoms, elements named like `{a,c}`.
pub fn boolean(n: usize) -> Frame {
    assert!(n <= 6, "boolean frame too large");
    let size = 1usize << n;
    let letters: Vec<char> = "abcdef".chars().collect();
    let names: Vec<String> = (0..size)
        .map(|m| {
            let inner: Vec<String> = (0..n)
                .filter(|i| m & (1 << i) != 0)
                .map(|i| letters[i].to_string())
                .collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect();
    let mut leq = vec![false; size * size];
    for a in 0..size {
        for b in 0..size {
            leq[a * size + b] = a & !b == 0;
        }
    }
    Frame::from_order(names, leq).expect("powersets are frames")
}

/// Failure while reading a topology.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("too many points ({0}); at most 64 supported")]
    TooManyPoints(usize),
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("open set mentions unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate open set {0}")]
    DuplicateOpen(String),
    #[error("the empty set is not listed as open")]
    MissingEmpty,
    #[error("the whole space is not listed as open")]
    MissingWhole,
    #[error("opens {0} and {1}: union is not open")]
    NotClosedUnderUnion(String, String),
    #[error("opens {0} and {1}: intersection is not open")]
    NotClosedUnderIntersection(String, String),
}

/// Raw description of a finite topological space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySpec {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

/// A validated finite topology together with its frame of opens.
#[derive(Clone, Debug)]
pub struct Topology {
    points: Vec<String>,
    /// Open sets as bitmasks, indexed like the frame's elements.
    opens: Vec<u64>,
    frame: std::sync::Arc<Frame>,
}

impl Topology {
    pub fn new(spec: &TopologySpec) -> Result<Topology, TopologyError> {
        let n = spec.points.len();
        if n > 64 {
            return Err(TopologyError::TooManyPoints(n));
        }
        let mut pidx = HashMap::new();
        for (i, p) in spec.points.iter().enumerate() {
            if pidx.insert(p.as_str(), i).is_some() {
                return Err(TopologyError::DuplicatePoint(p.clone()));
            }
        }
        let mut masks = Vec::new();
        for open in &spec.opens {
            let mut m = 0u64;
            for p in open {
                let i = pidx
                    .get(p.as_str())
                    .ok_or_else(|| TopologyError::UnknownPoint(p.clone()))?;
                m |= 1 << i;
            }
            masks.push(m);
        }
        Self::from_masks(spec.points.clone(), masks)
    }

    /// Builds from bitmask opens; point `i` is bit `i`.
    pub fn from_masks(points: Vec<String>, masks: Vec<u64>) -> Result<Topology, TopologyError> {
        let n = points.len();
        if n > 64 {
            return Err(TopologyError::TooManyPoints(n));
        }
        let full = full_mask(n);
        let describe = |m: u64| mask_name(&points, m);
        let mut seen = std::collections::HashSet::new();
        for &m in &masks {
            if !seen.insert(m) {
                return Err(TopologyError::DuplicateOpen(describe(m)));
            }
        }
        if !seen.contains(&0) {
            return Err(TopologyError::MissingEmpty);
        }
        if !seen.contains(&full) {
            return Err(TopologyError::MissingWhole);
        }
        for &a in &masks {
            for &b in &masks {
                if !seen.contains(&(a | b)) {
                    return Err(TopologyError::NotClosedUnderUnion(describe(a), describe(b)));
                }
                if !seen.contains(&(a & b)) {
                    return Err(TopologyError::NotClosedUnderIntersection(
                        describe(a),
                        describe(b),
                    ));
                }
            }
        }
        let mut opens = masks;
        opens.sort_by_key(|m| (m.count_ones(), *m));
        let k = opens.len();
        let names = opens.iter().map(|&m| describe(m)).collect();
        let mut leq = vec![false; k * k];
        for i in 0..k {
            for j in 0..k {
                leq[i * k + j] = opens[i] & !opens[j] == 0;
            }
        }
        let frame = Frame::from_order(names, leq).expect("open-set lattices are frames");
        Ok(Topology {
            points,
            opens,
            frame: std::sync::Arc::new(frame),
        })
    }

    pub fn frame(&self) -> &std::sync::Arc<Frame> {
        &self.frame
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn full_mask(&self) -> u64 {
        full_mask(self.points.len())
    }

    pub fn open_mask(&self, e: Elem) -> u64 {
        self.opens[e.0]
    }

    pub fn elem_of_mask(&self, mask: u64) -> Option<Elem> {
        self.opens.iter().position(|&m| m == mask).map(Elem)
    }

    /// Largest open contained in `mask`.
    pub fn interior_mask(&self, mask: u64) -> u64 {
        self.opens
            .iter()
            .filter(|&&m| m & !mask == 0)
            .fold(0, |acc, &m| acc | m)
    }

    /// Smallest closed set containing `mask`.
    pub fn closure_mask(&self, mask: u64) -> u64 {
        let full = self.full_mask();
        full & !self.interior_mask(full & !mask)
    }

    /// T0: distinct points are separated by some open.
    pub fn is_t0(&self) -> bool {
        let n = self.points.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                i == j
                    || self
                        .opens
                        .iter()
                        .any(|&m| ((m >> i) & 1) != ((m >> j) & 1))
            })
        })
    }

    /// T1: every singleton is closed.
    pub fn is_t1(&self) -> bool {
        (0..self.points.len()).all(|i| self.closure_mask(1 << i) == 1 << i)
    }

    pub fn to_spec(&self) -> TopologySpec {
        TopologySpec {
            points: self.points.clone(),
            opens: self
                .opens
                .iter()
                .map(|&m| {
                    (0..self.points.len())
                        .filter(|i| m & (1 << i) != 0)
                        .map(|i| self.points[i].clone())
                        .collect()
                })
                .collect(),
        }
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn mask_name(points: &[String], m: u64) -> String {
    let inner: Vec<&str> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| m & (1 << i) != 0)
        .map(|(_, p)| p.as_str())
        .collect();
    format!("{{{}}}", inner.join(","))
}

/// All topologies on the point set `{1..n}` (labelled, not up to homeomorphism).
pub fn all_topologies(n: usize) -> Vec<Topology> {
    assert!(n <= 4, "enumeration is doubly exponential");
    let points: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let full = full_mask(n);
    let subsets: Vec<u64> = (0..=full).filter(|&m| m != 0 && m != full).collect();
    let mut out = Vec::new();
    for family in 0u64..(1u64 << subsets.len()) {
        let mut opens = vec![0u64];
        if full != 0 {
            opens.push(full);
        }
        opens.extend(
            subsets
                .iter()
                .enumerate()
                .filter(|(i, _)| family & (1 << i) != 0)
                .map(|(_, &m)| m),
        );
        if let Ok(t) = Topology::from_masks(points.clone(), opens) {
            out.push(t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(elements: &[&str], leq: &[(&str, &str)]) -> FrameSpec {
        FrameSpec {
            elements: elements.iter().map(|s| s.to_string()).collect(),
            leq: leq
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            labels: None,
        }
    }

    fn m3() -> FrameSpec {
        spec(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
    }

    #[test]
    fn three_chain_is_a_frame() {
        let f = build_frame(&spec(&["0", "u", "1"], &[("0", "u"), ("u", "1")])).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.name(f.bottom()), "0");
        assert_eq!(f.name(f.top()), "1");
    }

    #[test]
    fn m3_is_rejected_with_a_brute_force_witness() {
        let err = build_frame(&m3()).unwrap_err();
        let FrameError::NotDistributive { w, a, b } = err else {
            panic!("expected NotDistributive, got {err:?}");
        };
        // Re-evaluate the witness on the raw diamond: w /\ (a \/ b) = w, but
        // (w /\ a) \/ (w /\ b) = 0 unless w is below one of them.
        assert!(w != a && w != b);
        assert!(["a", "b", "c"].contains(&w.as_str()));
        assert!(["a", "b", "c"].contains(&a.as_str()));
    }

    #[test]
    fn n5_is_rejected() {
        let n5 = spec(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
        );
        assert!(matches!(
            build_frame(&n5),
            Err(FrameError::NotDistributive { .. })
        ));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(build_frame(&spec(&[], &[])), Err(FrameError::Empty));
        assert!(matches!(
            build_frame(&spec(&["a", "a"], &[])),
            Err(FrameError::DuplicateElement(_))
        ));
        assert!(matches!(
            build_frame(&spec(&["a", "b"], &[("a", "b"), ("a", "b")])),
            Err(FrameError::DuplicatePair(..))
        ));
        assert!(matches!(
            build_frame(&spec(&["a", "b"], &[("a", "z")])),
            Err(FrameError::UnknownElement(_))
        ));
        assert!(matches!(
            build_frame(&spec(&["a", "b"], &[("a", "b"), ("b", "a")])),
            Err(FrameError::NotPartialOrder { .. })
        ));
        assert!(matches!(
            build_frame(&spec(&["a", "b"], &[])),
            Err(FrameError::MissingBound { .. })
        ));
        // two incomparable middles with two maximal tops above them
        let bowtie = spec(
            &["0", "a", "b", "x", "y", "1"],
            &[
                ("0", "a"),
                ("0", "b"),
                ("a", "x"),
                ("b", "x"),
                ("a", "y"),
                ("b", "y"),
                ("x", "1"),
                ("y", "1"),
            ],
        );
        assert!(matches!(
            build_frame(&bowtie),
            Err(FrameError::NotALattice { .. })
        ));
    }

    #[test]
    fn heyting_examples() {
        let c = chain(3);
        let (z, u) = (Elem(0), Elem(1));
        assert_eq!(c.heyting(u, z), z);
        for x in c.elements() {
            assert_eq!(c.heyting(x, x), c.top());
        }
        let b = boolean(2);
        let a = b.elem("{a}").unwrap();
        let bb = b.elem("{b}").unwrap();
        assert_eq!(b.heyting(a, bb), bb);
        assert_eq!(b.pseudo_complement(a), bb);
        assert_eq!(c.pseudo_complement(u), z);
        assert_eq!(c.pseudo_complement(c.bottom()), c.top());
    }

    #[test]
    fn heyting_adjunction_is_exhaustive_on_small_frames() {
        for f in [chain(4), boolean(3), chain(1)] {
            for u in f.elements() {
                for h in f.elements() {
                    for w in f.elements() {
                        assert_eq!(f.leq(w, f.heyting(u, h)), f.leq(f.meet(w, u), h));
                    }
                }
            }
        }
    }

    #[test]
    fn regular_and_boolean_predicates() {
        assert!(boolean(2).is_regular());
        assert!(boolean(3).is_boolean());
        assert!(!chain(3).is_regular());
        assert!(!chain(3).is_boolean());
        assert!(!chain(4).is_boolean());
        assert!(chain(2).is_boolean());
    }

    /// Brute force: every map into {0,1}, filtered by the homomorphism laws.
    fn brute_points(f: &Frame) -> usize {
        (0u32..(1 << f.len()))
            .filter(|bits| {
                let map: Vec<bool> = (0..f.len()).map(|i| bits & (1 << i) != 0).collect();
                f.is_two_valued_homomorphism(&map)
            })
            .count()
    }

    #[test]
    fn point_counts_match_enumeration() {
        assert_eq!(brute_points(&chain(3)), 2);
        assert_eq!(brute_points(&boolean(2)), 2);
        assert_eq!(brute_points(&chain(4)), 3);
        for f in [chain(3), boolean(2), chain(4), boolean(3), chain(1)] {
            assert_eq!(f.points().len(), brute_points(&f));
        }
    }

    #[test]
    fn topology_counts_and_sierpinski() {
        assert_eq!(all_topologies(0).len(), 1);
        assert_eq!(all_topologies(1).len(), 1);
        assert_eq!(all_topologies(2).len(), 4);
        assert_eq!(all_topologies(3).len(), 29);
        let s = Topology::new(&TopologySpec {
            points: vec!["1".into(), "2".into()],
            opens: vec![vec![], vec!["1".into()], vec!["1".into(), "2".into()]],
        })
        .unwrap();
        let f = s.frame();
        assert_eq!(f.len(), 3);
        // a chain: everything comparable
        for a in f.elements() {
            for b in f.elements() {
                assert!(f.leq(a, b) || f.leq(b, a));
            }
        }
        assert_eq!(f.points().len(), 2);
    }

    #[test]
    fn topology_rejects_bad_families() {
        let pts = vec!["1".to_string(), "2".to_string()];
        assert_eq!(
            Topology::from_masks(pts.clone(), vec![0b11]).unwrap_err(),
            TopologyError::MissingEmpty
        );
        assert!(matches!(
            Topology::from_masks(pts.clone(), vec![0, 0b01, 0b10]).unwrap_err(),
            TopologyError::MissingWhole
        ));
        assert!(matches!(
            Topology::from_masks(pts, vec![0, 0b01, 0b10, 0b11, 0b01]).unwrap_err(),
            TopologyError::DuplicateOpen(_)
        ));
        let pts3: Vec<String> = ["1", "2", "3"].iter().map(|s| s.to_string()).collect();
        assert!(matches!(
            Topology::from_masks(pts3.clone(), vec![0, 0b001, 0b010, 0b111]).unwrap_err(),
            TopologyError::NotClosedUnderUnion(..)
        ));
        assert!(matches!(
            Topology::from_masks(pts3, vec![0, 0b011, 0b110, 0b111]).unwrap_err(),
            TopologyError::NotClosedUnderUnion(..) | TopologyError::NotClosedUnderIntersection(..)
        ));
    }

    #[test]
    fn every_three_point_topology_is_a_frame_and_t0_points_match() {
        for t in all_topologies(3) {
            let f = t.frame();
            assert!(f.len() >= 2);
            if t.is_t0() {
                assert_eq!(f.points().len(), t.points().len());
            }
            if f.is_boolean() {
                assert!(f.is_regular());
            }
        }
    }
}
