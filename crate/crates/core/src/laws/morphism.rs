//! Frame morphisms with their images and inverse images, the decomposition
//! of a sublocale into open-or-closed pieces, atom algebras and sums of
//! sublocales.

use std::sync::Arc;

use rayon::prelude::*;

use super::{families, per_frame, LawConfig, Lattice};
use crate::corpus::Corpus;
use crate::frame::{Elem, Frame};
use crate::morphism::{
    atoms, compose, enumerate_morphisms, factors_through, image, preimage, sum_of_sublocales, FrameMorphism,
};
use crate::report::{Checker, RunReport};
use crate::sublocale::{closed_sublocale, intersect_all, open_sublocale, union_on, Sublocale};

/// Frames above this size are left out of the pairwise morphism checks.
const MORPHISM_FRAME_LIMIT: usize = 8;
/// Frames above this size are left out of the composition checks.
const COMPOSITION_FRAME_LIMIT: usize = 5;

pub fn run(corpus: &Corpus, config: &LawConfig) -> RunReport {
    let mut report = per_frame(corpus, config, |_, frame, c| match Lattice::new(frame, config.max_size) {
        Ok(l) => check_frame(&l, c),
        Err(e) => c.fail("operations stay inside the enumeration", vec![e]),
    });

    let limit = config.max_size.min(MORPHISM_FRAME_LIMIT);
    let reps: Vec<(String, Arc<Frame>)> = if config.up_to_isomorphism {
        representatives(corpus, limit)
    } else {
        corpus
            .frames(limit)
            .map(|e| (e.name.clone(), e.frame().expect("valid").clone()))
            .collect()
    };
    let lattices: Vec<(String, Lattice)> = reps
        .iter()
        .filter_map(|(name, f)| Lattice::new(f, config.max_size).ok().map(|l| (name.clone(), l)))
        .collect();
    report.notes.push(format!(
        "frame maps checked between {} frames{}, with at most {limit} elements",
        lattices.len(),
        if config.up_to_isomorphism { " up to isomorphism" } else { "" },
    ));
    let pairs: Vec<(usize, usize)> = (0..lattices.len())
        .flat_map(|i| (0..lattices.len()).map(move |j| (i, j)))
        .collect();
    let reports: Vec<RunReport> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (src_name, src) = &lattices[i];
            let (tgt_name, tgt) = &lattices[j];
            let mut c = Checker::new(&format!("{src_name} -> {tgt_name}"));
            for f in enumerate_morphisms(&src.frame, &tgt.frame) {
                check_morphism(&f, src, tgt, &mut c);
            }
            c.finish()
        })
        .collect();
    for r in reports {
        report.absorb(r);
    }

    let small: Vec<&Lattice> = lattices
        .iter()
        .map(|(_, l)| l)
        .filter(|l| l.frame.len() <= COMPOSITION_FRAME_LIMIT)
        .collect();
    let mut c = Checker::new("composition");
    for a in &small {
        for b in &small {
            for cc in &small {
                check_composition(a, b, cc, &mut c);
            }
        }
    }
    report.absorb(c.finish());
    report
}

/// One frame from each isomorphism class, in corpus order.
fn representatives(corpus: &Corpus, max_size: usize) -> Vec<(String, Arc<Frame>)> {
    let mut reps: Vec<(String, Arc<Frame>)> = Vec::new();
    for entry in corpus.frames(max_size) {
        let f = entry.frame().expect("valid");
        if !reps.iter().any(|(_, g)| isomorphic(f, g)) {
            reps.push((entry.name.clone(), f.clone()));
        }
    }
    reps
}

fn isomorphic(a: &Arc<Frame>, b: &Arc<Frame>) -> bool {
    if a.len() != b.len() || a.atoms().len() != b.atoms().len() || a.is_boolean() != b.is_boolean() {
        return false;
    }
    enumerate_morphisms(a, b).iter().any(|m| {
        let mut image: Vec<Elem> = m.map().to_vec();
        image.sort();
        image.dedup();
        image.len() == b.len()
    })
}

fn check_frame(l: &Lattice, c: &mut Checker) {
    let f = &l.frame;
    let els: Vec<Elem> = f.elements().collect();

    for x in 0..l.len() {
        let e = l.get(x);
        let pieces: Vec<Sublocale> = els
            .iter()
            .map(|&v| union_on(f, &[open_sublocale(f, v), closed_sublocale(f, e.apply(v))]).expect("same frame"))
            .collect();
        let meet = intersect_all(f, &pieces).expect("same frame");
        c.check("a sublocale is the intersection of its open-or-closed pieces", &meet == e, || vec![l.name(x)]);
        let id = FrameMorphism::identity(f);
        c.check("inverse image along the identity", preimage(&id, e).expect("same frame") == *e, || vec![l.name(x)]);
    }

    // unions distribute over arbitrary intersections
    let n = l.len();
    let fams = families(n);
    for a in 0..n {
        for fam in &fams {
            let lhs = l.union(a, l.inter_all(fam.iter().copied()));
            let rhs = l.inter_all(fam.iter().map(|&b| l.union(a, b)));
            c.check("union distributes over arbitrary intersections", lhs == rhs, || {
                vec![l.name(a), format!("family of {}", fam.len())]
            });
        }
    }
    // the same for the closed complement of a join of a family of opens
    for fam in families(els.len()) {
        let v = f.join_all(fam.iter().map(|&i| els[i]));
        let lhs = l.closed_of(v);
        let rhs = l.inter_all(fam.iter().map(|&i| l.closed_of(els[i])));
        c.check("closed complement of a join is the intersection of closed complements", lhs == rhs, || {
            vec![format!("family of {}", fam.len())]
        });
    }

    // atom algebras generated by opens
    let generators: Vec<Vec<Elem>> = if els.len() <= 6 {
        let mut g: Vec<Vec<Elem>> = els.iter().map(|&u| vec![u]).collect();
        g.push(els.clone());
        g
    } else {
        els.iter().map(|&u| vec![u]).collect()
    };
    for gens in generators {
        let d = atoms(f, &gens).expect("same frame");
        let k = d.atoms.len();
        c.check("atoms are pairwise disjoint", (0..k).all(|i| (0..i).all(|j| {
            l.inter(l.pos(&d.atoms[i].sublocale).expect("enumerated"), l.pos(&d.atoms[j].sublocale).expect("enumerated")) == l.empty
        })), || vec![super::names(f, &gens)]);
        if k >= 16 {
            continue;
        }
        let full = (1u64 << k) - 1;
        c.check("atoms cover the whole", l.pos(&d.element(full)) == Some(l.whole), || vec![super::names(f, &gens)]);
        for mask in 0..=full {
            let x = l.pos(&d.element(mask)).expect("enumerated");
            let y = l.pos(&d.complement(mask)).expect("enumerated");
            c.check(
                "unions of atoms form a Boolean algebra",
                l.union(x, y) == l.whole && l.inter(x, y) == l.empty,
                || vec![super::names(f, &gens), format!("mask {mask:b}")],
            );
        }
        for &u in &gens {
            let is_union = (0..=full).any(|m| l.pos(&d.element(m)) == Some(l.open_of(u)));
            c.check("generators are unions of atoms", is_union, || vec![f.name(u).into()]);
        }
    }

    // sums of sublocales
    let mut fams: Vec<Vec<usize>> = vec![vec![l.open_of(f.top())], vec![l.generic]];
    for &u in &els {
        fams.push(vec![l.open_of(u), l.closed_of(u)]);
    }
    if n <= 12 {
        for a in 0..n {
            for b in 0..a {
                fams.push(vec![a, b]);
            }
        }
    }
    for fam in fams {
        let members: Vec<Sublocale> = fam.iter().map(|&i| l.get(i).clone()).collect();
        match sum_of_sublocales(f, &members) {
            Ok((sum, m)) => {
                let union = l.union_all(fam.iter().copied());
                c.check("the sum of a family maps onto its union", l.pos(&m.image_sublocale()) == Some(union), || {
                    fam.iter().map(|&i| l.name(i)).collect()
                });
                for (k, inj) in sum.injections.iter().enumerate() {
                    let composite = compose(inj, &m).expect("composable");
                    let incl = FrameMorphism::inclusion(&members[k]);
                    c.check(
                        "sum injections recover the inclusions",
                        composite.target().len() == incl.target().len()
                            && l.pos(&composite.image_sublocale()) == Some(fam[k]),
                        || vec![l.name(fam[k])],
                    );
                }
            }
            Err(e) => c.note(format!("sum skipped: {e}")),
        }
    }
}

fn check_morphism(f: &FrameMorphism, src: &Lattice, tgt: &Lattice, c: &mut Checker) {
    let (a, b) = (f.source(), f.target());
    let desc = || format!("fstar = [{}]", f.map().iter().map(|&e| b.name(e)).collect::<Vec<_>>().join(", "));
    for v in a.elements() {
        for u in b.elements() {
            c.check(
                "frame map is left adjoint to its right adjoint",
                b.leq(f.apply(v), u) == a.leq(v, f.right_adjoint(u)),
                || vec![desc(), format!("V={}, U={}", a.name(v), b.name(u))],
            );
        }
    }
    let pre: Vec<usize> = (0..src.len())
        .map(|y| tgt.pos(&preimage(f, src.get(y)).expect("same frame")).expect("enumerated"))
        .collect();
    let img: Vec<usize> = (0..tgt.len())
        .map(|x| src.pos(&image(f, tgt.get(x)).expect("same frame")).expect("enumerated"))
        .collect();
    for v in a.elements() {
        c.check("inverse image of an open", pre[src.open_of(v)] == tgt.open_of(f.apply(v)), || {
            vec![desc(), a.name(v).into()]
        });
        c.check("inverse image of a closed", pre[src.closed_of(v)] == tgt.closed_of(f.apply(v)), || {
            vec![desc(), a.name(v).into()]
        });
    }
    c.check("inverse image of the whole", pre[src.whole] == tgt.whole, || vec![desc()]);
    c.check("image of the empty", img[tgt.empty] == src.empty, || vec![desc()]);
    c.check(
        "image of the whole is the image sublocale",
        src.pos(&f.image_sublocale()) == Some(img[tgt.whole]),
        || vec![desc()],
    );
    for y in 0..src.len() {
        for z in 0..src.len() {
            c.check(
                "inverse image preserves unions",
                pre[src.union(y, z)] == tgt.union(pre[y], pre[z]),
                || vec![desc(), src.name(y), src.name(z)],
            );
            c.check(
                "inverse image preserves intersections",
                pre[src.inter(y, z)] == tgt.inter(pre[y], pre[z]),
                || vec![desc(), src.name(y), src.name(z)],
            );
        }
        for x in 0..tgt.len() {
            c.check(
                "image is left adjoint to inverse image",
                src.sub(img[x], y) == tgt.sub(x, pre[y]),
                || vec![desc(), tgt.name(x), src.name(y)],
            );
        }
    }
    for x in 0..tgt.len() {
        for w in 0..tgt.len() {
            c.check("image preserves unions", img[tgt.union(x, w)] == src.union(img[x], img[w]), || {
                vec![desc(), tgt.name(x), tgt.name(w)]
            });
        }
    }
    let im = f.image_sublocale();
    let incl = FrameMorphism::inclusion(&im);
    match factors_through(f, &incl) {
        Ok(Some(g)) => {
            let back = compose(&g, &incl).expect("composable");
            c.check("a map factors through its image", back.map() == f.map(), || vec![desc()]);
        }
        Ok(None) => c.fail("a map factors through its image", vec![desc()]),
        Err(e) => c.fail("a map factors through its image", vec![desc(), e.to_string()]),
    }
    let embedding = f.is_embedding();
    c.check(
        "embeddings are the maps whose image is a copy of the domain",
        embedding == (im.fixpoints().len() == b.len()),
        || vec![desc()],
    );
    if embedding {
        let (inner, _) = im.fixpoint_frame();
        c.check("an embedding is an isomorphism onto its image", inner.len() == b.len(), || vec![desc()]);
    }
}

/// Inverse images and images along a composite are the composites.
fn check_composition(a: &Lattice, b: &Lattice, z: &Lattice, c: &mut Checker) {
    // f : locale of a -> locale of b, frame map b -> a; g : b -> z, frame map z -> b
    for f in enumerate_morphisms(&b.frame, &a.frame) {
        for g in enumerate_morphisms(&z.frame, &b.frame) {
            let gf = compose(&f, &g).expect("composable");
            for y in 0..z.len() {
                let direct = preimage(&gf, z.get(y)).expect("same frame");
                let stepwise = preimage(&f, &preimage(&g, z.get(y)).expect("same frame")).expect("same frame");
                c.check("inverse image along a composite", direct == stepwise, || vec![z.name(y)]);
            }
            for x in 0..a.len() {
                let direct = image(&gf, a.get(x)).expect("same frame");
                let stepwise = image(&g, &image(&f, a.get(x)).expect("same frame")).expect("same frame");
                c.check("image along a composite", direct == stepwise, || vec![a.name(x)]);
            }
        }
    }
}
