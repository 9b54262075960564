//! Frame axioms, Heyting implication, regularity and points.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;

use super::{names, LawConfig};
use crate::corpus::{Corpus, CorpusEntry};
use crate::frame::{Elem, Frame, Topology};
use crate::report::{Checker, RunReport};
use crate::sublocale::open_sublocale;

pub fn run(corpus: &Corpus, config: &LawConfig) -> RunReport {
    let reports: Vec<RunReport> = corpus
        .entries
        .par_iter()
        .map(|entry| {
            let mut c = Checker::new(&entry.name);
            check_entry(entry, config, &mut c);
            c.finish()
        })
        .collect();
    let mut out = RunReport::new("");
    for r in reports {
        out.absorb(r);
    }
    out
}

fn check_entry(entry: &CorpusEntry, config: &LawConfig, c: &mut Checker) {
    match (&entry.loaded, entry.negative) {
        (Err(e), true) => {
            c.check("negative case is rejected", true, Vec::new);
            c.note(format!("rejected as expected: {e}"));
        }
        (Ok(_), true) => c.fail("negative case is rejected", vec!["accepted as a frame".into()]),
        (Err(e), false) => c.fail("frame axioms", vec![e.clone()]),
        (Ok(loaded), false) => {
            c.check("frame axioms", true, Vec::new);
            if loaded.frame.len() > config.max_size {
                c.note(format!("skipped: {} elements", loaded.frame.len()));
                return;
            }
            check_frame(&loaded.frame, c);
            if let Some(t) = &loaded.topology {
                check_topology(t, c);
            }
        }
    }
}

pub(crate) fn check_frame(f: &Arc<Frame>, c: &mut Checker) {
    let els: Vec<Elem> = f.elements().collect();
    for &u in &els {
        for &h in &els {
            let imp = f.heyting(u, h);
            for &w in &els {
                c.check(
                    "implication is right adjoint to meet",
                    f.leq(w, imp) == f.leq(f.meet(w, u), h),
                    || vec![format!("U={}, H={}, W={}", f.name(u), f.name(h), f.name(w))],
                );
            }
        }
        c.check(
            "pseudo-complement is implication into bottom",
            f.pseudo_complement(u) == f.heyting(u, f.bottom()),
            || vec![f.name(u).to_string()],
        );
    }

    // meets distribute over joins of arbitrary subsets
    let n = els.len();
    if n <= 10 {
        for mask in 0u32..(1 << n) {
            let subset: Vec<Elem> = els.iter().copied().filter(|e| mask & (1 << e.index()) != 0).collect();
            let j = f.join_all(subset.iter().copied());
            for &w in &els {
                let lhs = f.meet(w, j);
                let rhs = f.join_all(subset.iter().map(|&s| f.meet(w, s)));
                c.check("meet distributes over arbitrary joins", lhs == rhs, || {
                    vec![format!("W={}, family [{}]", f.name(w), names(f, &subset))]
                });
            }
        }
    }

    let boolean = f.is_boolean();
    let regular = f.is_regular();
    c.check("Boolean frames are regular", !boolean || regular, Vec::new);
    c.check(
        "Boolean means every element has a complement",
        boolean == els.iter().all(|&u| f.join(u, f.pseudo_complement(u)) == f.top()),
        Vec::new,
    );

    // well-inside, read off closures of open sublocales
    let opens: Vec<_> = els.iter().map(|&u| open_sublocale(f, u)).collect();
    let mut regular_by_oracle = true;
    for &u in &els {
        let mut inside = Vec::new();
        for &w in &els {
            let oracle = opens[w.index()]
                .closure()
                .is_subsublocale_of(&opens[u.index()])
                .expect("same frame");
            c.check("well-inside means the closure lies in the open", f.well_inside(w, u) == oracle, || {
                vec![format!("W={}, U={}", f.name(w), f.name(u))]
            });
            if oracle {
                inside.push(w);
            }
        }
        regular_by_oracle &= f.join_all(inside) == u;
    }
    c.check("regularity agrees with the closure oracle", regular == regular_by_oracle, Vec::new);

    // points against brute force over all two-valued maps
    if n <= 12 {
        let pts = f.points();
        let mut brute = 0usize;
        for mask in 0u32..(1 << n) {
            let map: Vec<bool> = els.iter().map(|e| mask & (1 << e.index()) != 0).collect();
            if f.is_two_valued_homomorphism(&map) {
                brute += 1;
            }
        }
        c.check("points agree with brute force", pts.len() == brute, || {
            vec![format!("points() gave {}, brute force {brute}", pts.len())]
        });
        for p in &pts {
            c.check("points are frame maps to the two-element chain", f.is_two_valued_homomorphism(&p.map), Vec::new);
        }
    }
}

fn check_topology(t: &Topology, c: &mut Checker) {
    let pts = t.frame().points().len();
    let closures: HashSet<u64> = (0..t.points().len()).map(|i| t.closure_mask(1 << i)).collect();
    c.check(
        "points of the frame are the irreducible closed sets",
        pts == closures.len(),
        || vec![format!("{pts} frame points, {} distinct point closures", closures.len())],
    );
    if t.is_t0() {
        c.check("a T0 space has as many frame points as points", pts == t.points().len(), Vec::new);
    }
}
