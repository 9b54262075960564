//! Nuclei and sublocales of a finite frame.
//!
//! A sublocale is carried by its nucleus `e`; two sublocales are equal when
//! their nuclei agree pointwise. Inclusion is the reverse pointwise order:
//! `X <= Y` iff `e_X(H) >= e_Y(H)` for every `H`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::frame::{Elem, Frame, Topology};

/// Largest frame that [`enumerate_sublocales`] accepts by default.
pub const DEFAULT_ENUMERATION_BOUND: usize = 10;

/// Hard ceiling for subset enumeration regardless of the configured bound.
const ENUMERATION_CEILING: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NucleusError {
    #[error("map has {got} entries, frame has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("map sends {at} outside the frame")]
    OutOfRange { at: String },
    #[error("not inflationary at {at}: e({at}) = {image}")]
    NotInflationary { at: String, image: String },
    #[error("not idempotent at {at}: e({at}) = {once}, e(e({at})) = {twice}")]
    NotIdempotent {
        at: String,
        once: String,
        twice: String,
    },
    #[error("does not preserve the meet of {a} and {b}")]
    NotMeetPreserving { a: String, b: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SublocaleError {
    #[error("sublocales live on different frames")]
    MixedFrames,
    #[error("frame has {size} elements; enumeration bound is {bound}")]
    FrameTooLarge { size: usize, bound: usize },
    #[error("computed map is not a nucleus: {0}")]
    Nucleus(#[from] NucleusError),
}

pub(crate) fn same_frame(a: &Arc<Frame>, b: &Arc<Frame>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A validated nucleus on a finite frame.
#[derive(Clone, Debug)]
pub struct Nucleus {
    frame: Arc<Frame>,
    map: Vec<Elem>,
}

impl PartialEq for Nucleus {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && same_frame(&self.frame, &other.frame)
    }
}

impl Eq for Nucleus {}

/// Checks the three nucleus laws: inflationary, idempotent, meet-preserving.
pub fn validate_nucleus(frame: &Arc<Frame>, map: Vec<Elem>) -> Result<Nucleus, NucleusError> {
    let n = frame.len();
    if map.len() != n {
        return Err(NucleusError::WrongLength {
            expected: n,
            got: map.len(),
        });
    }
    if let Some(i) = map.iter().position(|e| e.0 >= n) {
        return Err(NucleusError::OutOfRange {
            at: frame.names()[i].clone(),
        });
    }
    let name = |e: Elem| frame.name(e).to_string();
    for h in frame.elements() {
        if !frame.leq(h, map[h.0]) {
            return Err(NucleusError::NotInflationary {
                at: name(h),
                image: name(map[h.0]),
            });
        }
    }
    for h in frame.elements() {
        let once = map[h.0];
        let twice = map[once.0];
        if once != twice {
            return Err(NucleusError::NotIdempotent {
                at: name(h),
                once: name(once),
                twice: name(twice),
            });
        }
    }
    for a in frame.elements() {
        for b in frame.elements().skip(a.0 + 1) {
            if map[frame.meet(a, b).0] != frame.meet(map[a.0], map[b.0]) {
                return Err(NucleusError::NotMeetPreserving {
                    a: name(a),
                    b: name(b),
                });
            }
        }
    }
    Ok(Nucleus {
        frame: frame.clone(),
        map,
    })
}

impl Nucleus {
    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn apply(&self, h: Elem) -> Elem {
        self.map[h.0]
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }
}

/// A sublocale of a finite frame: a nucleus together with its fixpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublocale {
    nucleus: Nucleus,
    fixpoints: Vec<Elem>,
}

impl From<Nucleus> for Sublocale {
    fn from(nucleus: Nucleus) -> Self {
        let fixpoints = nucleus
            .frame
            .elements()
            .filter(|&h| nucleus.map[h.0] == h)
            .collect();
        Sublocale { nucleus, fixpoints }
    }
}

impl Sublocale {
    pub fn from_map(frame: &Arc<Frame>, map: Vec<Elem>) -> Result<Sublocale, NucleusError> {
        validate_nucleus(frame, map).map(Sublocale::from)
    }

    /// For maps that are nuclei by construction.
    pub(crate) fn from_map_trusted(frame: &Arc<Frame>, map: Vec<Elem>) -> Sublocale {
        if cfg!(debug_assertions) {
            return Sublocale::from_map(frame, map).expect("constructed map is a nucleus");
        }
        Sublocale::from(Nucleus {
            frame: frame.clone(),
            map,
        })
    }

    pub fn whole(frame: &Arc<Frame>) -> Sublocale {
        Sublocale::from_map_trusted(frame, frame.elements().collect())
    }

    pub fn empty(frame: &Arc<Frame>) -> Sublocale {
        Sublocale::from_map_trusted(frame, vec![frame.top(); frame.len()])
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.nucleus.frame
    }

    pub fn nucleus(&self) -> &Nucleus {
        &self.nucleus
    }

    pub fn apply(&self, h: Elem) -> Elem {
        self.nucleus.map[h.0]
    }

    pub fn map(&self) -> &[Elem] {
        &self.nucleus.map
    }

    pub fn fixpoints(&self) -> &[Elem] {
        &self.fixpoints
    }

    pub fn is_empty(&self) -> bool {
        self.apply(self.frame().bottom()) == self.frame().top()
    }

    pub fn is_whole(&self) -> bool {
        self.fixpoints.len() == self.frame().len()
    }

    pub fn is_dense(&self) -> bool {
        let f = self.frame();
        self.apply(f.bottom()) == f.bottom()
    }

    fn check_same(&self, other: &Sublocale) -> Result<(), SublocaleError> {
        if same_frame(self.frame(), other.frame()) {
            Ok(())
        } else {
            Err(SublocaleError::MixedFrames)
        }
    }

    /// `self <= other` as sublocales.
    pub fn is_subsublocale_of(&self, other: &Sublocale) -> Result<bool, SublocaleError> {
        self.check_same(other)?;
        let f = self.frame();
        Ok(f.elements().all(|h| f.leq(other.apply(h), self.apply(h))))
    }

    /// Union: the pointwise meet of the nuclei.
    pub fn union(&self, other: &Sublocale) -> Result<Sublocale, SublocaleError> {
        union(&[self.clone(), other.clone()])
    }

    /// Intersection: least common fixpoint above each element, reached by
    /// iterating `e_X . e_Y` until it stabilises.
    pub fn intersect(&self, other: &Sublocale) -> Result<Sublocale, SublocaleError> {
        self.check_same(other)?;
        let f = self.frame();
        let map = f
            .elements()
            .map(|h| {
                let mut cur = h;
                loop {
                    let next = self.apply(other.apply(cur));
                    if next == cur {
                        break cur;
                    }
                    cur = next;
                }
            })
            .collect();
        Ok(Sublocale::from_map(f, map)?)
    }

    /// Largest open disjoint from the sublocale: `e(bottom)`.
    pub fn exterior(&self) -> Elem {
        self.apply(self.frame().bottom())
    }

    /// Largest open whose open sublocale lies inside `self`.
    pub fn interior(&self) -> Elem {
        let f = self.frame();
        f.join_all(f.elements().filter(|&u| {
            f.elements()
                .all(|h| f.leq(self.apply(h), f.heyting(u, h)))
        }))
    }

    pub fn closure(&self) -> Sublocale {
        closed_sublocale(self.frame(), self.exterior())
    }

    pub fn boundary(&self) -> Sublocale {
        let f = self.frame();
        self.closure()
            .intersect(&closed_sublocale(f, self.interior()))
            .expect("same frame")
    }

    /// `Some(u)` when this is the open sublocale of `u`.
    pub fn as_open(&self) -> Option<Elem> {
        let u = self.interior();
        (open_sublocale(self.frame(), u) == *self).then_some(u)
    }

    /// `Some(v)` when this is the closed complement of `v`.
    pub fn as_closed(&self) -> Option<Elem> {
        let v = self.exterior();
        (closed_sublocale(self.frame(), v) == *self).then_some(v)
    }

    /// The fixpoint set as a frame in its own right, with the embedding of
    /// each of its elements back into the ambient frame.
    pub fn fixpoint_frame(&self) -> (Arc<Frame>, Vec<Elem>) {
        let frame = self
            .frame()
            .subframe_on(&self.fixpoints)
            .expect("fixpoints of a nucleus form a frame");
        (Arc::new(frame), self.fixpoints.clone())
    }

    /// Position of a fixpoint inside [`Sublocale::fixpoint_frame`].
    pub(crate) fn fixpoint_position(&self, e: Elem) -> Option<Elem> {
        self.fixpoints.binary_search(&e).ok().map(Elem)
    }

    /// Pushes a sublocale of this sublocale's own frame back into the
    /// ambient frame: `H |-> inner(e(H))`.
    pub fn lift(&self, inner: &Sublocale) -> Result<Sublocale, SublocaleError> {
        if inner.frame().len() != self.fixpoints.len()
            || inner
                .frame()
                .names()
                .iter()
                .zip(&self.fixpoints)
                .any(|(n, &e)| n != self.frame().name(e))
        {
            return Err(SublocaleError::MixedFrames);
        }
        let f = self.frame();
        let map = f
            .elements()
            .map(|h| {
                let pos = self.fixpoint_position(self.apply(h)).expect("image is a fixpoint");
                self.fixpoints[inner.apply(pos).0]
            })
            .collect();
        Ok(Sublocale::from_map(f, map)?)
    }

    /// Short human-readable form listing the fixpoints.
    pub fn describe(&self) -> String {
        let f = self.frame();
        let names: Vec<&str> = self.fixpoints.iter().map(|&e| f.name(e)).collect();
        format!("fix{{{}}}", names.join(", "))
    }
}

impl fmt::Display for Sublocale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Open sublocale `[u]`, nucleus `H |-> (u => H)`.
pub fn open_sublocale(frame: &Arc<Frame>, u: Elem) -> Sublocale {
    Sublocale::from_map_trusted(frame, frame.elements().map(|h| frame.heyting(u, h)).collect())
}

/// Closed complement `E - v`, nucleus `H |-> H \/ v`.
pub fn closed_sublocale(frame: &Arc<Frame>, v: Elem) -> Sublocale {
    Sublocale::from_map_trusted(frame, frame.elements().map(|h| frame.join(h, v)).collect())
}

/// Generic sublocale, nucleus `H |-> not not H`.
pub fn generic(frame: &Arc<Frame>) -> Sublocale {
    Sublocale::from_map_trusted(
        frame,
        frame
            .elements()
            .map(|h| frame.pseudo_complement(frame.pseudo_complement(h)))
            .collect(),
    )
}

/// Union of a family: `e(V) = meet_i e_i(V)`. The empty union is the empty
/// sublocale, which needs the frame; use [`union_on`] for that case.
pub fn union(family: &[Sublocale]) -> Result<Sublocale, SublocaleError> {
    let first = family.first().expect("union of a nonempty family");
    union_on(first.frame(), family)
}

pub fn union_on(frame: &Arc<Frame>, family: &[Sublocale]) -> Result<Sublocale, SublocaleError> {
    if family.iter().any(|x| !same_frame(x.frame(), frame)) {
        return Err(SublocaleError::MixedFrames);
    }
    let map = frame
        .elements()
        .map(|h| frame.meet_all(family.iter().map(|x| x.apply(h))))
        .collect();
    Ok(Sublocale::from_map(frame, map)?)
}

/// Intersection of a family; the empty intersection is the whole sublocale.
pub fn intersect_all<'a, I>(frame: &Arc<Frame>, family: I) -> Result<Sublocale, SublocaleError>
where
    I: IntoIterator<Item = &'a Sublocale>,
{
    family
        .into_iter()
        .try_fold(Sublocale::whole(frame), |acc, x| acc.intersect(x))
}

/// Every sublocale of a small frame.
///
/// Sublocales are enumerated as subsets that contain top, are closed under
/// binary meets and satisfy `a => s` in the subset for every frame element
/// `a` and member `s`; each subset is turned into its nucleus
/// `H |-> meet { s in S : s >= H }` and re-validated.
pub fn enumerate_sublocales(
    frame: &Arc<Frame>,
    bound: usize,
) -> Result<Vec<Sublocale>, SublocaleError> {
    let n = frame.len();
    if n > bound || n > ENUMERATION_CEILING {
        return Err(SublocaleError::FrameTooLarge {
            size: n,
            bound: bound.min(ENUMERATION_CEILING),
        });
    }
    let top_bit = 1u32 << frame.top().0;
    let mut out = Vec::new();
    for set in 0u32..(1u32 << n) {
        if set & top_bit == 0 {
            continue;
        }
        let members: Vec<Elem> = frame.elements().filter(|e| set & (1 << e.0) != 0).collect();
        let closed = members.iter().all(|&a| {
            members
                .iter()
                .all(|&b| set & (1 << frame.meet(a, b).0) != 0)
        }) && frame
            .elements()
            .all(|a| members.iter().all(|&s| set & (1 << frame.heyting(a, s).0) != 0));
        if !closed {
            continue;
        }
        let map = frame
            .elements()
            .map(|h| frame.meet_all(members.iter().copied().filter(|&s| frame.leq(h, s))))
            .collect();
        out.push(Sublocale::from_map(frame, map)?);
    }
    Ok(out)
}

/// Smallest `Y` with `X u Y = whole`, found by intersecting every such `Y`
/// among the enumerated sublocales.
pub fn complement_c(x: &Sublocale, bound: usize) -> Result<Sublocale, SublocaleError> {
    let frame = x.frame();
    let all = enumerate_sublocales(frame, bound)?;
    let mut acc = Sublocale::whole(frame);
    for y in &all {
        if x.union(y)?.is_whole() {
            acc = acc.intersect(y)?;
        }
    }
    Ok(acc)
}

/// Largest entanglement zone: the closure of `A n B`.
pub fn entanglement(a: &Sublocale, b: &Sublocale) -> Result<Sublocale, SublocaleError> {
    Ok(a.intersect(b)?.closure())
}

/// A sublocale is Boolean when it is the generic sublocale of its closure.
pub fn is_boolean_sublocale(b: &Sublocale) -> bool {
    let closure = b.closure();
    let (inner, _) = closure.fixpoint_frame();
    let lifted = closure
        .lift(&generic(&inner))
        .expect("generic lives on the closure's own frame");
    lifted == *b
}

/// Sublocale of a subspace given as a point bitmask:
/// `e(V)` is the largest open `W` with `W n subset <= V`.
pub fn subspace_sublocale(topology: &Topology, subset: u64) -> Sublocale {
    let frame = topology.frame();
    let subset = subset & topology.full_mask();
    let map = frame
        .elements()
        .map(|v| {
            let vm = topology.open_mask(v);
            frame.join_all(
                frame
                    .elements()
                    .filter(|&w| topology.open_mask(w) & subset & !vm == 0),
            )
        })
        .collect();
    Sublocale::from_map_trusted(frame, map)
}
