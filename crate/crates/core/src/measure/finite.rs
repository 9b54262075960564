//! Valuations on finite frames and the outer measure of sublocales.

use std::sync::Arc;

use num::{Signed, Zero};
use thiserror::Error;

use crate::frame::{Elem, Frame, FrameError};
use crate::interval::Q;
use crate::morphism::{validate_morphism, FrameMorphism, MorphismError};
use crate::sublocale::{
    closed_sublocale, enumerate_sublocales, open_sublocale, same_frame, Sublocale, SublocaleError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValuationError {
    #[error("table has {got} values, frame has {expected} elements")]
    WrongLength { expected: usize, got: usize },
    #[error("value at {elem} is negative ({value})")]
    Negative { elem: String, value: String },
    #[error("value at the bottom is {value}, not 0")]
    NotZeroAtBottom { value: String },
    #[error("not monotone: {a} <= {b} but mu({a}) > mu({b})")]
    NotMonotone { a: String, b: String },
    #[error("not modular at {a}, {b}")]
    NotModular { a: String, b: String },
    #[error("atom weights need a Boolean frame with {expected} atoms")]
    NotAtomic { expected: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiniteMeasureError {
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Sublocale(#[from] SublocaleError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("reduced sublocales do not form a frame: {0}")]
    NotAFrame(#[from] FrameError),
}

/// A validated measure on the opens of a finite frame.
#[derive(Clone, Debug)]
pub struct Valuation {
    frame: Arc<Frame>,
    values: Vec<Q>,
}

pub fn validate_valuation(frame: &Arc<Frame>, values: Vec<Q>) -> Result<Valuation, ValuationError> {
    if values.len() != frame.len() {
        return Err(ValuationError::WrongLength {
            expected: frame.len(),
            got: values.len(),
        });
    }
    let mu = |e: Elem| &values[e.index()];
    let name = |e: Elem| frame.name(e).to_string();
    if let Some(e) = frame.elements().find(|&e| mu(e).is_negative()) {
        return Err(ValuationError::Negative {
            elem: name(e),
            value: mu(e).to_string(),
        });
    }
    if !mu(frame.bottom()).is_zero() {
        return Err(ValuationError::NotZeroAtBottom {
            value: mu(frame.bottom()).to_string(),
        });
    }
    for a in frame.elements() {
        for b in frame.elements() {
            if frame.leq(a, b) && mu(a) > mu(b) {
                return Err(ValuationError::NotMonotone {
                    a: name(a),
                    b: name(b),
                });
            }
        }
    }
    for a in frame.elements() {
        for b in frame.elements() {
            if mu(frame.join(a, b)) + mu(frame.meet(a, b)) != mu(a) + mu(b) {
                return Err(ValuationError::NotModular {
                    a: name(a),
                    b: name(b),
                });
            }
        }
    }
    Ok(Valuation {
        frame: frame.clone(),
        values,
    })
}

impl Valuation {
    /// On a Boolean frame, the measure with the given weight on each atom,
    /// atoms taken in the order of [`Frame::atoms`].
    pub fn from_atom_weights(frame: &Arc<Frame>, weights: &[Q]) -> Result<Valuation, ValuationError> {
        let atoms = frame.atoms();
        if !frame.is_boolean() || atoms.len() != weights.len() {
            return Err(ValuationError::NotAtomic {
                expected: atoms.len(),
            });
        }
        let values = frame
            .elements()
            .map(|e| {
                atoms
                    .iter()
                    .zip(weights)
                    .filter(|(&a, _)| frame.leq(a, e))
                    .map(|(_, w)| w.clone())
                    .sum()
            })
            .collect();
        validate_valuation(frame, values)
    }

    pub fn zero(frame: &Arc<Frame>) -> Valuation {
        Valuation {
            frame: frame.clone(),
            values: vec![Q::zero(); frame.len()],
        }
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn value(&self, e: Elem) -> &Q {
        &self.values[e.index()]
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn total(&self) -> &Q {
        self.value(self.frame.top())
    }

    /// Outer measure: the least `mu(V)` over opens `V` with `e_X(V) = top`.
    pub fn outer(&self, x: &Sublocale) -> Q {
        assert!(same_frame(x.frame(), &self.frame), "sublocale of another frame");
        let top = self.frame.top();
        self.frame
            .elements()
            .filter(|&v| x.apply(v) == top)
            .map(|v| self.value(v))
            .min()
            .expect("top is a neighbourhood of every sublocale")
            .clone()
    }

    /// `mu(A u B) - mu(A) - mu(B) + mu(A n B)`.
    pub fn additivity_residual(&self, a: &Sublocale, b: &Sublocale) -> Result<Q, SublocaleError> {
        let u = a.union(b)?;
        let i = a.intersect(b)?;
        Ok(self.outer(&u) - self.outer(a) - self.outer(b) + self.outer(&i))
    }

    /// The measure `W |-> mu(A n [W])` on the opens of `A`, i.e. on the
    /// fixpoint frame of `e_A`.
    pub fn restrict(&self, a: &Sublocale) -> Result<Valuation, ValuationError> {
        let (inner, positions) = a.fixpoint_frame();
        let values = positions
            .iter()
            .map(|&w| {
                let piece = open_sublocale(&self.frame, w)
                    .intersect(a)
                    .expect("same frame");
                self.outer(&piece)
            })
            .collect();
        validate_valuation(&inner, values)
    }
}

/// Nucleus `U |-> V{V >= U : mu(V) = mu(U)}` of the smallest full-measure
/// sublocale, on the valuation's own frame.
pub fn reduction_nucleus(v: &Valuation) -> Sublocale {
    let f = v.frame();
    let map = f
        .elements()
        .map(|u| f.join_all(f.elements().filter(|&w| f.leq(u, w) && v.value(w) == v.value(u))))
        .collect();
    Sublocale::from_map(f, map).expect("the equal-measure hull is a nucleus")
}

#[derive(Clone, Debug)]
pub struct ReducedSublocale {
    pub sublocale: Sublocale,
    /// Whether the input already equalled its reduction.
    pub was_reduced: bool,
}

/// `R_mu(A)`: restrict the measure to `A`, reduce there, and lift back.
pub fn mu_reduce(v: &Valuation, a: &Sublocale) -> Result<ReducedSublocale, FiniteMeasureError> {
    let restricted = v.restrict(a)?;
    let inner = reduction_nucleus(&restricted);
    let sublocale = a.lift(&inner)?;
    Ok(ReducedSublocale {
        was_reduced: sublocale == *a,
        sublocale,
    })
}

#[derive(Clone, Debug)]
pub struct NullPartner {
    pub partner: Sublocale,
    pub union_measure: Q,
    pub intersection_measure: Q,
}

/// The closed complement of the smallest measure-minimizing neighbourhood.
pub fn null_partner(v: &Valuation, a: &Sublocale) -> Result<NullPartner, SublocaleError> {
    let f = v.frame();
    let best = v.outer(a);
    let smallest = f.meet_all(
        f.elements()
            .filter(|&w| a.apply(w) == f.top() && *v.value(w) == best),
    );
    let partner = closed_sublocale(f, smallest);
    let union_measure = v.outer(&a.union(&partner)?);
    let intersection_measure = v.outer(&a.intersect(&partner)?);
    Ok(NullPartner {
        partner,
        union_measure,
        intersection_measure,
    })
}

/// The algebra of reduced sublocales with the quotient frame map
/// `V |-> R_mu([V])` and the induced measure.
#[derive(Clone, Debug)]
pub struct ReducedAlgebra {
    pub elements: Vec<Sublocale>,
    pub frame: Arc<Frame>,
    pub quotient: FrameMorphism,
    pub measure: Valuation,
}

impl ReducedAlgebra {
    pub fn is_boolean(&self) -> bool {
        self.frame.is_boolean()
    }

    pub fn position(&self, x: &Sublocale) -> Option<Elem> {
        self.elements
            .iter()
            .position(|y| y == x)
            .and_then(|i| self.frame.elements().nth(i))
    }
}

pub fn reduced_algebra(v: &Valuation, bound: usize) -> Result<ReducedAlgebra, FiniteMeasureError> {
    let f = v.frame();
    let mut elements: Vec<Sublocale> = Vec::new();
    for x in enumerate_sublocales(f, bound)? {
        let r = mu_reduce(v, &x)?.sublocale;
        if !elements.contains(&r) {
            elements.push(r);
        }
    }
    // larger sublocales have pointwise smaller nuclei
    elements.sort_by(|a, b| {
        let key = |s: &Sublocale| (s.fixpoints().len(), s.map().to_vec());
        key(a).cmp(&key(b))
    });
    let n = elements.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = elements[i].is_subsublocale_of(&elements[j])?;
        }
    }
    let names = (0..n).map(|i| format!("R{i}")).collect();
    let frame = Arc::new(Frame::from_order(names, leq)?);
    let position = |x: &Sublocale| {
        let i = elements.iter().position(|y| y == x).expect("reductions are enumerated");
        frame.elements().nth(i).expect("in range")
    };
    let map = f
        .elements()
        .map(|u| mu_reduce(v, &open_sublocale(f, u)).map(|r| position(&r.sublocale)))
        .collect::<Result<Vec<_>, _>>()?;
    let quotient = validate_morphism(f, &frame, map)?;
    let values = elements.iter().map(|x| v.outer(x)).collect();
    let measure = validate_valuation(&frame, values)?;
    Ok(ReducedAlgebra {
        elements,
        frame,
        quotient,
        measure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{boolean, chain};
    use crate::interval::ratopen::q;

    fn arc(f: Frame) -> Arc<Frame> {
        Arc::new(f)
    }

    #[test]
    fn validation_examples() {
        let b2 = arc(boolean(2));
        let v = Valuation::from_atom_weights(&b2, &[q(1, 3), q(2, 3)]).unwrap();
        assert_eq!(*v.total(), q(1, 1));
        let mut bad = v.values().to_vec();
        bad[b2.bottom().index()] = q(1, 9);
        assert!(matches!(
            validate_valuation(&b2, bad),
            Err(ValuationError::NotZeroAtBottom { .. })
        ));
        let c3 = arc(chain(3));
        assert!(matches!(
            validate_valuation(&c3, vec![q(0, 1), q(1, 1), q(1, 2)]),
            Err(ValuationError::NotMonotone { .. })
        ));
        let modular_break = vec![q(0, 1), q(1, 2), q(1, 2), q(1, 2)];
        assert!(matches!(
            validate_valuation(&b2, modular_break),
            Err(ValuationError::NotModular { .. })
        ));
    }

    #[test]
    fn outer_measure_examples() {
        let b2 = arc(boolean(2));
        let v = Valuation::from_atom_weights(&b2, &[q(1, 3), q(2, 3)]).unwrap();
        let a = b2.elem("{a}").unwrap();
        assert_eq!(v.outer(&Sublocale::whole(&b2)), *v.total());
        assert_eq!(v.outer(&open_sublocale(&b2, a)), q(1, 3));
        assert_eq!(v.outer(&closed_sublocale(&b2, a)), q(2, 3));
        assert_eq!(v.outer(&Sublocale::empty(&b2)), q(0, 1));
    }

    #[test]
    fn restriction_examples() {
        let b3 = arc(boolean(3));
        let v = Valuation::from_atom_weights(&b3, &[q(1, 6), q(1, 3), q(1, 2)]).unwrap();
        let whole = v.restrict(&Sublocale::whole(&b3)).unwrap();
        assert_eq!(whole.values(), v.values());
        let ab = b3.elem("{a,b}").unwrap();
        let r = v.restrict(&open_sublocale(&b3, ab)).unwrap();
        // the opens of [a v b] are {0, a, b, a v b} up to the lift
        let mut got: Vec<Q> = r.values().to_vec();
        got.sort();
        assert_eq!(got, vec![q(0, 1), q(1, 6), q(1, 3), q(1, 2)]);
        let z = Valuation::from_atom_weights(&b3, &[q(0, 1), q(1, 2), q(1, 2)]).unwrap();
        let a = b3.elem("{a}").unwrap();
        assert!(z.restrict(&open_sublocale(&b3, a)).unwrap().values().iter().all(Q::is_zero));
    }

    #[test]
    fn reduction_is_smallest_full_measure_sublocale() {
        let b3 = arc(boolean(3));
        let v = Valuation::from_atom_weights(&b3, &[q(1, 2), q(1, 2), q(0, 1)]).unwrap();
        let all = enumerate_sublocales(&b3, 10).unwrap();
        for a in &all {
            let r = mu_reduce(&v, a).unwrap().sublocale;
            assert!(r.is_subsublocale_of(a).unwrap());
            assert_eq!(v.outer(&r), v.outer(a));
            for b in &all {
                if b.is_subsublocale_of(a).unwrap() && v.outer(b) == v.outer(a) {
                    assert!(r.is_subsublocale_of(b).unwrap());
                }
            }
            assert!(mu_reduce(&v, &r).unwrap().was_reduced);
        }
    }

    #[test]
    fn reduced_algebra_examples() {
        let b3 = arc(boolean(3));
        let v = Valuation::from_atom_weights(&b3, &[q(1, 2), q(1, 2), q(0, 1)]).unwrap();
        let alg = reduced_algebra(&v, 10).unwrap();
        assert_eq!(alg.frame.len(), 4);
        assert!(alg.is_boolean());
        let full = Valuation::from_atom_weights(&b3, &[q(1, 6), q(1, 3), q(1, 2)]).unwrap();
        assert_eq!(reduced_algebra(&full, 10).unwrap().frame.len(), 8);
        let zero = Valuation::zero(&b3);
        assert_eq!(reduced_algebra(&zero, 10).unwrap().frame.len(), 1);
    }

    #[test]
    fn null_partner_examples() {
        let b3 = arc(boolean(3));
        let v = Valuation::from_atom_weights(&b3, &[q(1, 6), q(1, 3), q(1, 2)]).unwrap();
        let p = null_partner(&v, &Sublocale::whole(&b3)).unwrap();
        assert!(p.partner.is_empty());
        for a in enumerate_sublocales(&b3, 10).unwrap() {
            let p = null_partner(&v, &a).unwrap();
            assert_eq!(p.union_measure, *v.total());
            assert!(p.intersection_measure.is_zero());
        }
    }

    #[test]
    fn strict_additivity_on_boolean_cube() {
        let b3 = arc(boolean(3));
        let v = Valuation::from_atom_weights(&b3, &[q(1, 6), q(1, 3), q(1, 2)]).unwrap();
        let all = enumerate_sublocales(&b3, 10).unwrap();
        assert_eq!(all.len(), 8);
        let mut pairs = 0;
        for a in &all {
            for b in &all {
                assert!(v.additivity_residual(a, b).unwrap().is_zero());
                pairs += 1;
            }
        }
        assert_eq!(pairs, 64);
    }
}
