//! Frame morphisms and the locale maps they present.
//!
//! A locale map `f : E -> F` is stored as its frame map `f* : O(F) -> O(E)`.
//! In [`FrameMorphism`] the `source` is `O(F)` and the `target` is `O(E)`,
//! so sublocales of `E` live on the target frame and are pushed forward to
//! the source frame by [`image`]; [`preimage`] goes the other way.

use std::sync::Arc;

use thiserror::Error;

use crate::frame::{Elem, Frame};
use crate::sublocale::{
    closed_sublocale, intersect_all, open_sublocale, same_frame, union_on, Sublocale,
    SublocaleError,
};

/// Product frames larger than this are refused.
pub const MAX_SUM_SIZE: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismViolation {
    Bottom { image: String },
    Top { image: String },
    Meet { a: String, b: String },
    Join { a: String, b: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("map has {got} entries, source frame has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("map sends an element outside the target frame")]
    OutOfRange,
    #[error("not a frame map: {0:?}")]
    NotAFrameMap(Vec<MorphismViolation>),
    #[error("morphisms are not composable")]
    NotComposable,
    #[error("sum has {0} elements, more than the supported maximum")]
    SumTooLarge(usize),
    #[error("the second morphism is not an embedding")]
    NotAnEmbedding,
    #[error(transparent)]
    Sublocale(#[from] SublocaleError),
}

/// A validated frame homomorphism `fstar : source -> target`, with its right
/// adjoint `f_* : target -> source`.
#[derive(Clone, Debug)]
pub struct FrameMorphism {
    source: Arc<Frame>,
    target: Arc<Frame>,
    fstar: Vec<Elem>,
    adjoint: Vec<Elem>,
}

impl PartialEq for FrameMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.fstar == other.fstar
            && same_frame(&self.source, &other.source)
            && same_frame(&self.target, &other.target)
    }
}

impl Eq for FrameMorphism {}

/// Checks preservation of bottom, top, binary meets and binary joins (which
/// on finite frames covers arbitrary joins). All violated laws are reported.
pub fn validate_morphism(
    source: &Arc<Frame>,
    target: &Arc<Frame>,
    map: Vec<Elem>,
) -> Result<FrameMorphism, MorphismError> {
    if map.len() != source.len() {
        return Err(MorphismError::WrongLength {
            expected: source.len(),
            got: map.len(),
        });
    }
    if map.iter().any(|e| e.index() >= target.len()) {
        return Err(MorphismError::OutOfRange);
    }
    let at = |e: Elem| map[e.index()];
    let mut violations = Vec::new();
    if at(source.bottom()) != target.bottom() {
        violations.push(MorphismViolation::Bottom {
            image: target.name(at(source.bottom())).to_string(),
        });
    }
    if at(source.top()) != target.top() {
        violations.push(MorphismViolation::Top {
            image: target.name(at(source.top())).to_string(),
        });
    }
    let pair = |a: Elem, b: Elem| (source.name(a).to_string(), source.name(b).to_string());
    let meet_bad = source.elements().find_map(|a| {
        source
            .elements()
            .find(|&b| at(source.meet(a, b)) != target.meet(at(a), at(b)))
            .map(|b| pair(a, b))
    });
    if let Some((a, b)) = meet_bad {
        violations.push(MorphismViolation::Meet { a, b });
    }
    let join_bad = source.elements().find_map(|a| {
        source
            .elements()
            .find(|&b| at(source.join(a, b)) != target.join(at(a), at(b)))
            .map(|b| pair(a, b))
    });
    if let Some((a, b)) = join_bad {
        violations.push(MorphismViolation::Join { a, b });
    }
    if !violations.is_empty() {
        return Err(MorphismError::NotAFrameMap(violations));
    }
    Ok(FrameMorphism::from_valid(source, target, map))
}

impl FrameMorphism {
    fn from_valid(source: &Arc<Frame>, target: &Arc<Frame>, fstar: Vec<Elem>) -> FrameMorphism {
        let adjoint = target
            .elements()
            .map(|u| {
                source.join_all(
                    source
                        .elements()
                        .filter(|&v| target.leq(fstar[v.index()], u)),
                )
            })
            .collect();
        FrameMorphism {
            source: source.clone(),
            target: target.clone(),
            fstar,
            adjoint,
        }
    }

    pub fn identity(frame: &Arc<Frame>) -> FrameMorphism {
        FrameMorphism::from_valid(frame, frame, frame.elements().collect())
    }

    /// Frame side of the inclusion of a sublocale: `V |-> e_X(V)`, landing in
    /// the fixpoint frame of `X`.
    pub fn inclusion(x: &Sublocale) -> FrameMorphism {
        let (inner, _) = x.fixpoint_frame();
        let map = x
            .frame()
            .elements()
            .map(|v| x.fixpoint_position(x.apply(v)).expect("image is a fixpoint"))
            .collect();
        validate_morphism(x.frame(), &inner, map).expect("nuclei induce frame surjections")
    }

    pub fn source(&self) -> &Arc<Frame> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Frame> {
        &self.target
    }

    pub fn apply(&self, v: Elem) -> Elem {
        self.fstar[v.index()]
    }

    pub fn map(&self) -> &[Elem] {
        &self.fstar
    }

    /// `f_*(u)`: the join of every `v` with `fstar(v) <= u`.
    pub fn right_adjoint(&self, u: Elem) -> Elem {
        self.adjoint[u.index()]
    }

    /// True iff `fstar` is onto. Injectivity of `f_*` and `fstar . f_* = id`
    /// are computed as well and must agree.
    pub fn is_embedding(&self) -> bool {
        let surjective = self
            .target
            .elements()
            .all(|u| self.fstar.contains(&u));
        let mut images: Vec<Elem> = self.adjoint.clone();
        images.sort();
        images.dedup();
        let injective = images.len() == self.adjoint.len();
        let counit = self
            .target
            .elements()
            .all(|u| self.apply(self.right_adjoint(u)) == u);
        assert!(
            surjective == injective && injective == counit,
            "embedding characterisations disagree"
        );
        surjective
    }

    /// Nucleus `f_* fstar` of the image sublocale on the source frame.
    pub fn image_sublocale(&self) -> Sublocale {
        let map = self
            .source
            .elements()
            .map(|v| self.right_adjoint(self.apply(v)))
            .collect();
        Sublocale::from_map(&self.source, map).expect("f_* f^* is a nucleus")
    }
}

/// Locale composite `g . f` for `f : E -> F` and `g : F -> G`; its frame map
/// is `fstar . gstar`.
pub fn compose(f: &FrameMorphism, g: &FrameMorphism) -> Result<FrameMorphism, MorphismError> {
    if !same_frame(&f.source, &g.target) {
        return Err(MorphismError::NotComposable);
    }
    let map = g.source.elements().map(|v| f.apply(g.apply(v))).collect();
    Ok(FrameMorphism::from_valid(&g.source, &f.target, map))
}

/// Whether the locale map `f` factors through the embedding `i` (both with
/// the same codomain locale). On success the factor `g` with
/// `gstar(istar(V)) = fstar(V)` is built and validated.
pub fn factors_through(
    f: &FrameMorphism,
    i: &FrameMorphism,
) -> Result<Option<FrameMorphism>, MorphismError> {
    if !same_frame(&f.source, &i.source) {
        return Err(MorphismError::NotComposable);
    }
    if !i.is_embedding() {
        return Err(MorphismError::NotAnEmbedding);
    }
    let src = &f.source;
    let holds = src.elements().all(|v| {
        src.leq(
            i.right_adjoint(i.apply(v)),
            f.right_adjoint(f.apply(v)),
        )
    });
    if !holds {
        return Ok(None);
    }
    let map = i
        .target
        .elements()
        .map(|w| {
            let v = src
                .elements()
                .find(|&v| i.apply(v) == w)
                .expect("embedding is onto");
            f.apply(v)
        })
        .collect();
    validate_morphism(&i.target, &f.target, map).map(Some)
}

/// Direct image `f(X)`, nucleus `f_* e_X fstar`, for `X` on the target frame.
pub fn image(f: &FrameMorphism, x: &Sublocale) -> Result<Sublocale, MorphismError> {
    if !same_frame(x.frame(), &f.target) {
        return Err(SublocaleError::MixedFrames.into());
    }
    let map = f
        .source
        .elements()
        .map(|v| f.right_adjoint(x.apply(f.apply(v))))
        .collect();
    Ok(Sublocale::from_map(&f.source, map).map_err(SublocaleError::from)?)
}

/// Inverse image `f^{-1}(Y)` for `Y` on the source frame, computed as the
/// intersection over all opens `V` of `[fstar V] u (E - fstar(e_Y(V)))`.
pub fn preimage(f: &FrameMorphism, y: &Sublocale) -> Result<Sublocale, MorphismError> {
    if !same_frame(y.frame(), &f.source) {
        return Err(SublocaleError::MixedFrames.into());
    }
    let e = &f.target;
    let pieces: Vec<Sublocale> = f
        .source
        .elements()
        .map(|v| {
            union_on(
                e,
                &[
                    open_sublocale(e, f.apply(v)),
                    closed_sublocale(e, f.apply(y.apply(v))),
                ],
            )
        })
        .collect::<Result<_, _>>()?;
    Ok(intersect_all(e, &pieces)?)
}

/// A product frame with its coordinate projections, which are the frame
/// maps of the coproduct injections of locales.
#[derive(Clone, Debug)]
pub struct SumFrame {
    pub frame: Arc<Frame>,
    pub factors: Vec<Arc<Frame>>,
    pub injections: Vec<FrameMorphism>,
    coords: Vec<Vec<Elem>>,
}

impl SumFrame {
    pub fn coords(&self, e: Elem) -> &[Elem] {
        &self.coords[e.index()]
    }

    pub fn elem_of(&self, coords: &[Elem]) -> Elem {
        let pos = self
            .coords
            .iter()
            .position(|c| c.as_slice() == coords)
            .expect("coordinates of a product element");
        self.frame.elements().nth(pos).expect("in range")
    }
}

/// Disjoint sum of locales: the product of their frames, componentwise.
pub fn sum_frame(frames: &[Arc<Frame>]) -> Result<SumFrame, MorphismError> {
    let size: usize = frames.iter().map(|f| f.len()).product();
    if size > MAX_SUM_SIZE {
        return Err(MorphismError::SumTooLarge(size));
    }
    let mut coords: Vec<Vec<Elem>> = vec![Vec::new()];
    for f in frames {
        coords = coords
            .into_iter()
            .flat_map(|prefix| {
                f.elements().map(move |e| {
                    let mut c = prefix.clone();
                    c.push(e);
                    c
                })
            })
            .collect();
    }
    let names = coords
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c
                .iter()
                .zip(frames)
                .map(|(&e, f)| f.name(e))
                .collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let n = coords.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = coords[i]
                .iter()
                .zip(&coords[j])
                .zip(frames)
                .all(|((&a, &b), f)| f.leq(a, b));
        }
    }
    let frame = Arc::new(Frame::from_order(names, leq).expect("products of frames are frames"));
    let injections = frames
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let map = frame.elements().map(|e| coords[e.index()][k]).collect();
            validate_morphism(&frame, f, map).expect("projections are frame maps")
        })
        .collect();
    Ok(SumFrame {
        frame,
        factors: frames.to_vec(),
        injections,
        coords,
    })
}

/// The canonical map from the disjoint sum of a family of sublocales into
/// the ambient locale: `V |-> (e_i(V))_i`.
pub fn sum_of_sublocales(
    ambient: &Arc<Frame>,
    family: &[Sublocale],
) -> Result<(SumFrame, FrameMorphism), MorphismError> {
    if family.iter().any(|x| !same_frame(x.frame(), ambient)) {
        return Err(SublocaleError::MixedFrames.into());
    }
    let inner: Vec<Arc<Frame>> = family.iter().map(|x| x.fixpoint_frame().0).collect();
    let sum = sum_frame(&inner)?;
    let map = ambient
        .elements()
        .map(|v| {
            let c: Vec<Elem> = family
                .iter()
                .map(|x| x.fixpoint_position(x.apply(v)).expect("fixpoint"))
                .collect();
            sum.elem_of(&c)
        })
        .collect();
    let u = validate_morphism(ambient, &sum.frame, map)?;
    Ok((sum, u))
}

/// One atom of a decomposition: the choice of open (`true`) or closed
/// complement (`false`) for each generator, and the resulting sublocale.
#[derive(Clone, Debug)]
pub struct Atom {
    pub choices: Vec<bool>,
    pub sublocale: Sublocale,
}

/// Nonempty intersections of generators and their closed complements, and
/// the Boolean algebra of their unions.
#[derive(Clone, Debug)]
pub struct AtomDecomposition {
    pub frame: Arc<Frame>,
    pub generators: Vec<Elem>,
    pub atoms: Vec<Atom>,
}

pub const MAX_ATOM_GENERATORS: usize = 16;

pub fn atoms(frame: &Arc<Frame>, generators: &[Elem]) -> Result<AtomDecomposition, MorphismError> {
    assert!(
        generators.len() <= MAX_ATOM_GENERATORS,
        "too many generators for atom decomposition"
    );
    let n = generators.len();
    let mut out = Vec::new();
    for bits in 0u32..(1u32 << n) {
        let choices: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
        let parts: Vec<Sublocale> = generators
            .iter()
            .zip(&choices)
            .map(|(&u, &open)| {
                if open {
                    open_sublocale(frame, u)
                } else {
                    closed_sublocale(frame, u)
                }
            })
            .collect();
        let s = intersect_all(frame, &parts)?;
        if s != Sublocale::empty(frame) {
            out.push(Atom {
                choices,
                sublocale: s,
            });
        }
    }
    Ok(AtomDecomposition {
        frame: frame.clone(),
        generators: generators.to_vec(),
        atoms: out,
    })
}

impl AtomDecomposition {
    /// Union of the atoms selected by `mask`.
    pub fn element(&self, mask: u64) -> Sublocale {
        let chosen: Vec<Sublocale> = self
            .atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.sublocale.clone())
            .collect();
        union_on(&self.frame, &chosen).expect("same frame")
    }

    /// All unions of atoms, indexed by atom bitmask.
    pub fn algebra(&self) -> Vec<Sublocale> {
        assert!(self.atoms.len() < 20, "algebra too large to list");
        (0..(1u64 << self.atoms.len()))
            .map(|m| self.element(m))
            .collect()
    }

    /// Complement inside the algebra: the union of the other atoms.
    pub fn complement(&self, mask: u64) -> Sublocale {
        let full = (1u64 << self.atoms.len()) - 1;
        self.element(full & !mask)
    }
}

/// Every frame morphism `source -> target`, found by backtracking along a
/// linear extension of the source order.
pub fn enumerate_morphisms(source: &Arc<Frame>, target: &Arc<Frame>) -> Vec<FrameMorphism> {
    let mut order: Vec<Elem> = source.elements().collect();
    order.sort_by_key(|&x| source.elements().filter(|&y| source.leq(y, x)).count());
    let mut assigned: Vec<Option<Elem>> = vec![None; source.len()];
    let mut out = Vec::new();
    backtrack(source, target, &order, 0, &mut assigned, &mut out);
    out
}

fn backtrack(
    source: &Arc<Frame>,
    target: &Arc<Frame>,
    order: &[Elem],
    depth: usize,
    assigned: &mut Vec<Option<Elem>>,
    out: &mut Vec<FrameMorphism>,
) {
    if depth == order.len() {
        let map: Vec<Elem> = assigned.iter().map(|e| e.expect("complete")).collect();
        out.push(FrameMorphism::from_valid(source, target, map));
        return;
    }
    let x = order[depth];
    let candidates: Vec<Elem> = if x == source.bottom() && x == source.top() {
        // the one-element frame maps only to a one-element frame
        if target.len() == 1 {
            vec![target.bottom()]
        } else {
            Vec::new()
        }
    } else if x == source.bottom() {
        vec![target.bottom()]
    } else if x == source.top() {
        vec![target.top()]
    } else {
        target.elements().collect()
    };
    for img in candidates {
        assigned[x.index()] = Some(img);
        if consistent(source, target, x, assigned) {
            backtrack(source, target, order, depth + 1, assigned, out);
        }
    }
    assigned[x.index()] = None;
}

/// Checks every law instance whose three elements are all assigned and one
/// of which is `x`.
fn consistent(source: &Frame, target: &Frame, x: Elem, assigned: &[Option<Elem>]) -> bool {
    let fx = assigned[x.index()].expect("just assigned");
    for a in source.elements() {
        let Some(fa) = assigned[a.index()] else {
            continue;
        };
        if source.leq(a, x) && !target.leq(fa, fx) || source.leq(x, a) && !target.leq(fx, fa) {
            return false;
        }
        if let Some(fm) = assigned[source.meet(a, x).index()] {
            if fm != target.meet(fa, fx) {
                return false;
            }
        }
        if let Some(fj) = assigned[source.join(a, x).index()] {
            if fj != target.join(fa, fx) {
                return false;
            }
        }
        // laws whose result is x
        for b in source.elements() {
            let Some(fb) = assigned[b.index()] else {
                continue;
            };
            if source.meet(a, b) == x && target.meet(fa, fb) != fx {
                return false;
            }
            if source.join(a, b) == x && target.join(fa, fb) != fx {
                return false;
            }
        }
    }
    true
}
