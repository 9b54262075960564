//! The sublocale calculus: open and closed sublocales, intersections with
//! them, interior, exterior, closure and boundary, the generic sublocale,
//! complements and entanglement, and subspaces of finite spaces.

use std::sync::Arc;

use super::{per_frame, LawConfig, Lattice};
use crate::corpus::Corpus;
use crate::frame::{Elem, Frame, Topology};
use crate::morphism::{preimage, FrameMorphism};
use crate::report::{Checker, RunReport};
use crate::sublocale::{
    closed_sublocale, complement_c, entanglement, intersect_all, is_boolean_sublocale, open_sublocale,
    subspace_sublocale, union_on, Sublocale,
};

pub fn run(corpus: &Corpus, config: &LawConfig) -> RunReport {
    let mut report = per_frame(corpus, config, |entry, frame, c| {
        let lattice = match Lattice::new(frame, config.max_size) {
            Ok(l) => l,
            Err(e) => {
                c.fail("operations stay inside the enumeration", vec![e]);
                return;
            }
        };
        check_lattice(&lattice, c);
        if let Some(t) = entry.loaded.as_ref().ok().and_then(|l| l.topology.as_ref()) {
            check_subspaces(t, &lattice, c);
        }
    });
    report.notes.push(
        "infinite distributivity of intersection over unions: every finite lattice of sublocales is \
         distributive, so no finite frame can violate it; the counterexample is exercised on [0,1]"
            .into(),
    );
    report
}

pub(crate) fn check_lattice(l: &Lattice, c: &mut Checker) {
    let f = &l.frame;
    check_order(l, c);
    check_opens_and_closeds(l, c);
    check_composition(l, c);
    check_boundary(l, c);
    check_generic(l, c);
    check_complements(l, c);
    if f.is_boolean() {
        for i in 0..l.len() {
            c.check("sublocales of a Boolean frame are open", l.get(i).as_open().is_some(), || {
                vec![l.name(i)]
            });
        }
    }
}

fn check_order(l: &Lattice, c: &mut Checker) {
    let n = l.len();
    for i in 0..n {
        for j in 0..n {
            let u = l.union(i, j);
            let m = l.inter(i, j);
            let lub = l.sub(i, u) && l.sub(j, u) && (0..n).all(|z| !(l.sub(i, z) && l.sub(j, z)) || l.sub(u, z));
            c.check("union is the least upper bound", lub, || vec![l.name(i), l.name(j)]);
            let glb = l.sub(m, i) && l.sub(m, j) && (0..n).all(|z| !(l.sub(z, i) && l.sub(z, j)) || l.sub(z, m));
            c.check("intersection is the greatest lower bound", glb, || vec![l.name(i), l.name(j)]);
        }
    }
    c.check("empty and whole bound everything", (0..n).all(|i| l.sub(l.empty, i) && l.sub(i, l.whole)), Vec::new);
}

fn check_opens_and_closeds(l: &Lattice, c: &mut Checker) {
    let f = &l.frame;
    let els: Vec<Elem> = f.elements().collect();
    let top = f.top();
    for &u in &els {
        for &v in &els {
            let w = || vec![format!("U={}, V={}", f.name(u), f.name(v))];
            let (ou, ov) = (l.open_of(u), l.open_of(v));
            c.check("open sublocale of a meet is the intersection", l.inter(ou, ov) == l.open_of(f.meet(u, v)), w);
            let eu = l.get(ou);
            let ev = l.get(ov);
            let euv = l.get(l.open_of(f.meet(u, v)));
            c.check(
                "open nucleus of a meet is the composite in either order",
                els.iter().all(|&h| euv.apply(h) == eu.apply(ev.apply(h)) && euv.apply(h) == ev.apply(eu.apply(h))),
                w,
            );
            c.check("inclusion of opens reflects the order", l.sub(ou, ov) == f.leq(u, v), w);
            c.check("open sublocale of a join is the union", l.union(ou, ov) == l.open_of(f.join(u, v)), w);
            let (cu, cv) = (l.closed_of(u), l.closed_of(v));
            c.check("closed complement of a join is the intersection", l.inter(cu, cv) == l.closed_of(f.join(u, v)), w);
            c.check("closed complement of a meet is the union", l.union(cu, cv) == l.closed_of(f.meet(u, v)), w);
        }
        let all_opens = l.union_all(els.iter().map(|&v| l.open_of(v)));
        c.check("open sublocales of an arbitrary join", all_opens == l.whole, Vec::new);

        let (ou, cu) = (l.open_of(u), l.closed_of(u));
        c.check("an open and its closed complement cover", l.union(ou, cu) == l.whole, || vec![f.name(u).into()]);
        c.check("an open and its closed complement are disjoint", l.inter(ou, cu) == l.empty, || {
            vec![f.name(u).into()]
        });
        for x in 0..l.len() {
            let e = l.get(x);
            let w = || vec![format!("X={}, V={}", l.name(x), f.name(u))];
            c.check("inside an open iff the nucleus sends it to top", l.sub(x, ou) == (e.apply(u) == top), w);
            c.check("covering with an open iff containing its closed complement", (l.union(ou, x) == l.whole) == l.sub(cu, x), w);
            c.check("disjoint from an open iff inside its closed complement", (l.inter(ou, x) == l.empty) == l.sub(x, cu), w);
            c.check("covering with a closed iff containing its open", (l.union(cu, x) == l.whole) == l.sub(ou, x), w);
            c.check("disjoint from a closed iff inside its open", (l.inter(cu, x) == l.empty) == l.sub(x, ou), w);
            for &h in &els {
                let lhs = f.leq(h, e.apply(u));
                let rhs = l.sub(l.inter(l.open_of(h), x), ou);
                c.check("opens below the nucleus are those meeting inside the open", lhs == rhs, || {
                    vec![format!("X={}, U={}, V={}", l.name(x), f.name(u), f.name(h))]
                });
            }
        }
    }
    for (i, &u) in els.iter().enumerate() {
        for &v in &els[i..] {
            if l.closed_of(u) == l.closed_of(v) {
                c.check("equal closed complements come from equal opens", u == v, || {
                    vec![format!("{} and {}", f.name(u), f.name(v))]
                });
            }
        }
    }
}

fn check_composition(l: &Lattice, c: &mut Checker) {
    let f = &l.frame;
    let els: Vec<Elem> = f.elements().collect();
    for x in 0..l.len() {
        let ex = l.get(x);
        for &u in &els {
            let eu = l.get(l.open_of(u));
            let ec = l.get(l.closed_of(u));
            let with_open = l.get(l.inter(l.open_of(u), x));
            let with_closed = l.get(l.inter(l.closed_of(u), x));
            let w = || vec![format!("X={}, U={}", l.name(x), f.name(u))];
            c.check(
                "intersection with an open composes nuclei",
                els.iter().all(|&h| with_open.apply(h) == eu.apply(ex.apply(h))),
                w,
            );
            c.check(
                "intersection with a closed composes nuclei",
                els.iter().all(|&h| with_closed.apply(h) == ex.apply(ec.apply(h))),
                w,
            );
            for &v in &els {
                let lhs = l.inter(x, l.open_of(f.join(u, v)));
                let rhs = l.union(l.inter(x, l.open_of(u)), l.inter(x, l.open_of(v)));
                c.check("intersection distributes over a union of two opens", lhs == rhs, || {
                    vec![format!("X={}, U={}, V={}", l.name(x), f.name(u), f.name(v))]
                });
            }
        }
        for y in 0..l.len() {
            for &u in &els {
                for lo in [l.open_of(u), l.closed_of(u)] {
                    let lhs = l.inter(lo, l.union(x, y));
                    let rhs = l.union(l.inter(lo, x), l.inter(lo, y));
                    c.check("intersection with an open or closed distributes over unions", lhs == rhs, || {
                        vec![l.name(lo), l.name(x), l.name(y)]
                    });
                }
            }
        }
        // inverse images along the inclusion of X
        let i = FrameMorphism::inclusion(ex);
        let inner = i.target().clone();
        for &v in &els {
            let iv = i.apply(v);
            let pulled_open = preimage(&i, l.get(l.open_of(v))).expect("same frame");
            c.check("inverse image of an open is the open of the pulled-back element", pulled_open == open_sublocale(&inner, iv), || {
                vec![format!("X={}, V={}", l.name(x), f.name(v))]
            });
            let pulled_closed = preimage(&i, l.get(l.closed_of(v))).expect("same frame");
            c.check("inverse image of a closed is the relative closed complement", pulled_closed == closed_sublocale(&inner, iv), || {
                vec![format!("X={}, V={}", l.name(x), f.name(v))]
            });
        }
    }
    // iterated intersection of larger families agrees with the pairwise table
    let family: Vec<Sublocale> = (0..l.len()).filter(|i| i % 2 == 0).map(|i| l.get(i).clone()).collect();
    let direct = intersect_all(f, &family).expect("same frame");
    let folded = l.inter_all((0..l.len()).filter(|i| i % 2 == 0));
    c.check("intersection of a family matches pairwise intersections", l.pos(&direct) == Some(folded), Vec::new);
}

fn check_boundary(l: &Lattice, c: &mut Checker) {
    let f = &l.frame;
    let els: Vec<Elem> = f.elements().collect();
    for x in 0..l.len() {
        let s = l.get(x);
        let w = || vec![l.name(x)];
        let ext = s.exterior();
        let int = s.interior();
        let oracle_ext = f.join_all(els.iter().copied().filter(|&v| l.inter(l.open_of(v), x) == l.empty));
        c.check("exterior is the largest disjoint open", ext == oracle_ext, w);
        let oracle_int = f.join_all(els.iter().copied().filter(|&u| l.sub(l.open_of(u), x)));
        c.check("interior is the largest open inside", int == oracle_int, w);
        let closure = l.pos(&s.closure()).expect("closed sublocale");
        let smallest_closed = els
            .iter()
            .all(|&v| !l.sub(x, l.closed_of(v)) || l.sub(closure, l.closed_of(v)));
        c.check(
            "closure is the complement of the exterior and the smallest closed superset",
            closure == l.closed_of(ext) && l.sub(x, closure) && smallest_closed,
            w,
        );
        let boundary = l.pos(&s.boundary()).expect("in the enumeration");
        c.check(
            "boundary is the complement of interior and exterior",
            boundary == l.closed_of(f.join(int, ext)),
            w,
        );
        c.check(
            "interior and boundary make the closure",
            l.union(l.open_of(int), boundary) == closure,
            w,
        );
        c.check(
            "exterior and boundary make the complement of the interior",
            l.union(l.open_of(ext), boundary) == l.closed_of(int),
            w,
        );
        c.check(
            "dense iff the nucleus fixes bottom",
            (closure == l.whole) == (s.apply(f.bottom()) == f.bottom()) && s.is_dense() == (closure == l.whole),
            w,
        );
    }
}

fn check_generic(l: &Lattice, c: &mut Checker) {
    let f = &l.frame;
    let g = l.get(l.generic);
    for h in f.elements() {
        let nn = f.pseudo_complement(f.pseudo_complement(h));
        let int_closure = l.get(l.open_of(h)).closure().interior();
        c.check("generic nucleus is double negation and interior of closure", g.apply(h) == nn && nn == int_closure, || {
            vec![f.name(h).into()]
        });
    }
    c.check("generic sublocale is dense", g.apply(f.bottom()) == f.bottom(), Vec::new);
    for x in 0..l.len() {
        if l.get(x).is_dense() {
            c.check("generic sublocale lies in every dense sublocale", l.sub(l.generic, x), || vec![l.name(x)]);
        }
    }
    c.check("generic sublocale is Boolean", is_boolean_sublocale(g), Vec::new);
    for v in f.elements() {
        let lhs = l.inter(l.generic, l.closed_of(v));
        let rhs = l.inter(l.generic, l.open_of(f.pseudo_complement(v)));
        c.check("generic part of a closed is the generic part of its interior", lhs == rhs, || {
            vec![f.name(v).into()]
        });
    }
}

fn check_complements(l: &Lattice, c: &mut Checker) {
    let f = &l.frame;
    let n = l.len();
    let boolean: Vec<bool> = (0..n).map(|i| is_boolean_sublocale(l.get(i))).collect();
    for a in 0..n {
        let s = l.get(a);
        let fixpoints_boolean = s.fixpoint_frame().0.is_boolean();
        c.check("Boolean sublocales are the generic parts of their closures", boolean[a] == fixpoints_boolean, || {
            vec![l.name(a)]
        });
        let parts = l.union_all((0..n).filter(|&b| boolean[b] && l.sub(b, a)));
        c.check("every sublocale is the union of its Boolean sublocales", parts == a, || vec![l.name(a)]);

        let comp = l.inter_all((0..n).filter(|&y| l.union(a, y) == l.whole));
        let produced = complement_c(s, l.frame.len()).expect("enumerable");
        c.check(
            "complement is the least covering partner",
            l.pos(&produced) == Some(comp) && l.union(a, comp) == l.whole,
            || vec![l.name(a)],
        );
        if let Some(u) = s.as_open() {
            c.check("complement of an open is its closed complement", comp == l.closed_of(u), || vec![l.name(a)]);
        }

        for b in 0..n {
            let eps = l.pos(&entanglement(s, l.get(b)).expect("same frame")).expect("closed");
            let is_zone = |v: Elem| {
                let fz = l.closed_of(v);
                let dense_in = |x: usize| l.pos(&l.get(l.inter(x, fz)).closure()) == Some(fz);
                dense_in(a) && dense_in(b)
            };
            let zones: Vec<Elem> = f.elements().filter(|&v| is_zone(v)).collect();
            let eps_is_zone = f.elements().any(|v| l.closed_of(v) == eps && is_zone(v));
            c.check(
                "entanglement zone is a zone containing all others",
                eps_is_zone && zones.iter().all(|&v| l.sub(l.closed_of(v), eps)),
                || vec![l.name(a), l.name(b)],
            );
        }
    }
}

fn check_subspaces(t: &Topology, l: &Lattice, c: &mut Checker) {
    let f: &Arc<Frame> = t.frame();
    let full = t.full_mask();
    let subsets: Vec<u64> = (0..=full).collect();
    let sub: Vec<usize> = subsets
        .iter()
        .map(|&m| l.pos(&subspace_sublocale(t, m)).expect("subspace sublocale in the enumeration"))
        .collect();
    let of = |m: u64| sub[m as usize];
    let saturated = |m: u64| {
        let nbhd = f
            .elements()
            .map(|u| t.open_mask(u))
            .filter(|&o| o & m == m)
            .fold(full, |acc, o| acc & o);
        nbhd == m
    };
    let all_saturated = subsets.iter().all(|&m| saturated(m));
    c.check("subspace sublocale of the whole space is whole", of(full) == l.whole, Vec::new);
    let mut strict = None;
    for &x in &subsets {
        let name = |m: u64| format!("{{mask {m:b}}}");
        for u in f.elements() {
            let um = t.open_mask(u);
            c.check("a subspace lies in an open iff its sublocale does", (x & !um == 0) == l.sub(of(x), l.open_of(u)), || {
                vec![name(x), f.name(u).into()]
            });
            c.check("subspace of a trace on an open is an intersection", of(x & um) == l.inter(l.open_of(u), of(x)), || {
                vec![name(x), f.name(u).into()]
            });
            let closed = full & !um;
            c.check("subspace of a closed set is the closed sublocale", of(closed) == l.closed_of(u), || {
                vec![f.name(u).into()]
            });
            c.check("subspace of a trace on a closed is an intersection", of(x & closed) == l.inter(of(x), l.closed_of(u)), || {
                vec![name(x), f.name(u).into()]
            });
        }
        for &y in &subsets {
            c.check("subspace of a union is the union", of(x | y) == l.union(of(x), of(y)), || vec![name(x), name(y)]);
            let meet = l.inter(of(x), of(y));
            c.check("subspace of an intersection lies in the intersection", l.sub(of(x & y), meet), || {
                vec![name(x), name(y)]
            });
            if of(x & y) != meet && strict.is_none() {
                strict = Some((x, y));
            }
            if x & !y == 0 {
                c.check("inclusion of subspaces gives inclusion of sublocales", l.sub(of(x), of(y)), || vec![name(x), name(y)]);
            }
            if all_saturated {
                c.check(
                    "inclusion of sublocales reflects inclusion of subspaces",
                    l.sub(of(x), of(y)) == (x & !y == 0),
                    || vec![name(x), name(y)],
                );
            }
        }
        let sx = l.get(of(x));
        let ext = f.elements().find(|&u| t.open_mask(u) == t.interior_mask(full & !x)).expect("open");
        c.check("exterior of a subspace sublocale is the exterior of the subspace", sx.exterior() == ext, || vec![name(x)]);
        c.check(
            "closure of a subspace sublocale is the subspace of the closure",
            l.pos(&sx.closure()) == Some(of(t.closure_mask(x))),
            || vec![name(x)],
        );
        let int_x = t.interior_mask(x);
        let int_elem = f.elements().find(|&u| t.open_mask(u) == int_x).expect("open");
        c.check("interior of a subspace lies in the interior of its sublocale", f.leq(int_elem, sx.interior()), || {
            vec![name(x)]
        });
        let frontier = t.closure_mask(x) & !int_x;
        let boundary = l.pos(&sx.boundary()).expect("enumerated");
        c.check("boundary of a subspace sublocale lies in the subspace of the frontier", l.sub(boundary, of(frontier)), || {
            vec![name(x)]
        });
        if all_saturated {
            c.check(
                "interior and boundary match the subspace ones when subspaces are saturated",
                sx.interior() == int_elem && boundary == of(frontier),
                || vec![name(x)],
            );
        }
        let comp = l.pos(&complement_c(sx, f.len()).expect("enumerable")).expect("enumerated");
        c.check("complement of a subspace sublocale lies in the pointwise complement", l.sub(comp, of(full & !x)), || {
            vec![name(x)]
        });
        if t.is_t1() {
            c.check("in a T1 space the complement is the pointwise complement", comp == of(full & !x), || vec![name(x)]);
        }
    }
    for a in 0..l.len() {
        let s = l.get(a);
        let comp = l.inter_all((0..l.len()).filter(|&y| l.union(a, y) == l.whole));
        let complemented = l.inter(a, comp) == l.empty;
        let criterion = subsets.iter().any(|&x| {
            of(x) == a && entanglement(s, l.get(of(full & !x))).expect("same frame").is_empty()
        });
        c.check(
            "complemented iff a subspace not entangled with its pointwise complement",
            complemented == criterion,
            || vec![l.name(a)],
        );
    }
    match strict {
        Some((x, y)) => c.note(format!(
            "strict inclusion of the subspace of an intersection for masks {x:b} and {y:b} ({})",
            if t.is_t1() { "T1" } else { "not T1" }
        )),
        None if !t.is_t1() => c.note("not T1, but subspace sublocales commute with intersections here"),
        None => {}
    }
    let _ = union_on;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{boolean, chain, TopologySpec};

    fn run_lattice(f: Frame) -> RunReport {
        let f = Arc::new(f);
        let l = Lattice::new(&f, 10).unwrap();
        let mut c = Checker::new("t");
        check_lattice(&l, &mut c);
        c.finish()
    }

    #[test]
    fn chains_and_boolean_frames_pass() {
        for f in [chain(1), chain(2), chain(3), chain(5), boolean(2)] {
            let r = run_lattice(f);
            assert!(r.is_clean(), "{:?}", &r.violations[..r.violations.len().min(3)]);
        }
    }

    #[test]
    fn sierpinski_subspaces() {
        let spec = TopologySpec {
            points: vec!["1".into(), "2".into()],
            opens: vec![vec![], vec!["1".into()], vec!["1".into(), "2".into()]],
        };
        let t = Topology::new(&spec).unwrap();
        let l = Lattice::new(t.frame(), 10).unwrap();
        let mut c = Checker::new("sierpinski");
        check_subspaces(&t, &l, &mut c);
        let r = c.finish();
        assert!(r.is_clean(), "{:?}", r.violations);
    }

    #[test]
    fn standard_corpus_is_clean() {
        let r = run(&Corpus::standard(), &LawConfig::default());
        assert!(r.is_clean(), "{:?}", &r.violations[..r.violations.len().min(3)]);
    }
}
