//! Valuations: exact checks on the regular (hence Boolean) corpus frames and
//! certified-bound checks on `[0,1]`.

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{families, per_frame, LawConfig, Lattice};
use crate::corpus::Corpus;
use crate::frame::{Elem, Frame};
use crate::interval::presented::probe_opens;
use crate::interval::{Interval, PresentedSublocale, RatOpen, Q};
use crate::measure::finite::{mu_reduce, null_partner, reduced_algebra, Valuation};
use crate::measure::interval::{
    self as im, lebesgue_restricted_to_lower_half, measure_bounds, strict_additivity_check, unit_atom_at_half,
    Descriptor,
};
use crate::report::{Checker, RunReport};

pub fn run(corpus: &Corpus, config: &LawConfig) -> RunReport {
    let mut report = per_frame(corpus, config, |_, frame, c| {
        if !frame.is_regular() {
            c.note("not regular; no measure claims");
            return;
        }
        let l = match Lattice::new(frame, config.max_size) {
            Ok(l) => l,
            Err(e) => {
                c.fail("operations stay inside the enumeration", vec![e]);
                return;
            }
        };
        for (name, v) in valuations(frame) {
            check_valuation(&l, &v, &name, c);
        }
    });
    let mut c = Checker::new("[0,1]");
    check_interval(config, &mut c);
    report.absorb(c.finish());
    report
}

/// Uniform, skewed and null-atom valuations, deduplicated.
pub(crate) fn valuations(frame: &std::sync::Arc<Frame>) -> Vec<(String, Valuation)> {
    let n = frame.atoms().len();
    let candidates: [(&str, Vec<Q>); 3] = [
        ("uniform", vec![Q::one(); n]),
        ("skewed", (0..n).map(|k| Q::new((k as i64 + 1).into(), 2.into())).collect()),
        ("null atom", (0..n).map(|k| if k == 0 { Q::zero() } else { Q::one() }).collect()),
    ];
    let mut out: Vec<(String, Valuation)> = Vec::new();
    for (name, w) in candidates {
        let v = Valuation::from_atom_weights(frame, &w).expect("Boolean frame");
        if !out.iter().any(|(_, u)| u.values() == v.values()) {
            out.push((name.to_string(), v));
        }
    }
    out
}

fn check_valuation(l: &Lattice, v: &Valuation, name: &str, c: &mut Checker) {
    let f = &l.frame;
    let els: Vec<Elem> = f.elements().collect();
    let n = l.len();
    let mu: Vec<Q> = (0..n).map(|i| v.outer(l.get(i))).collect();
    let total = v.total().clone();
    let w = |parts: Vec<String>| {
        let mut out = vec![format!("valuation {name}")];
        out.extend(parts);
        out
    };

    c.check("measure of the whole is the total", mu[l.whole] == total, || w(vec![]));
    for &u in &els {
        c.check("outer measure of an open is its value", mu[l.open_of(u)] == *v.value(u), || {
            w(vec![f.name(u).into()])
        });
        c.check("an open and its closed complement add up", v.value(u) + &mu[l.closed_of(u)] == total, || {
            w(vec![f.name(u).into()])
        });
    }

    for a in 0..n {
        for b in 0..n {
            let residual = &mu[l.union(a, b)] - &mu[a] - &mu[b] + &mu[l.inter(a, b)];
            c.check("strict additivity", residual.is_zero(), || {
                w(vec![l.name(a), l.name(b), format!("residual {residual}")])
            });
        }
        for &u in &els {
            let split = &mu[l.inter(a, l.open_of(u))] + &mu[l.inter(a, l.closed_of(u))];
            c.check("an open splits the measure of a sublocale", split == mu[a], || {
                w(vec![l.name(a), f.name(u).into()])
            });
            for &x in &els {
                let lhs = &mu[l.inter(a, l.open_of(f.join(u, x)))];
                let rhs = &mu[l.inter(a, l.open_of(u))] + &mu[l.inter(a, l.open_of(x))]
                    - &mu[l.inter(a, l.open_of(f.meet(u, x)))];
                c.check("measure relative to a sublocale is modular", *lhs == rhs, || {
                    w(vec![l.name(a), f.name(u).into(), f.name(x).into()])
                });
            }
        }
    }

    // monotone chains of sublocales and directed families of opens
    let is_chain = |fam: &[usize]| fam.iter().all(|&i| fam.iter().all(|&j| l.sub(i, j) || l.sub(j, i)));
    for fam in families(n).iter().filter(|fam| !fam.is_empty() && is_chain(fam)) {
        let sup = fam.iter().map(|&i| &mu[i]).max().expect("nonempty");
        let inf = fam.iter().map(|&i| &mu[i]).min().expect("nonempty");
        c.check("measure of an increasing union is the supremum", mu[l.union_all(fam.iter().copied())] == *sup, || {
            w(fam.iter().map(|&i| l.name(i)).collect())
        });
        c.check("measure of a decreasing intersection is the infimum", mu[l.inter_all(fam.iter().copied())] == *inf, || {
            w(fam.iter().map(|&i| l.name(i)).collect())
        });
    }
    for fam in families(els.len()) {
        let opens: Vec<Elem> = fam.iter().map(|&i| els[i]).collect();
        if opens.is_empty() {
            continue;
        }
        let top = f.join_all(opens.iter().copied());
        let bottom = f.meet_all(opens.iter().copied());
        let directed = opens.contains(&top);
        let codirected = opens.contains(&bottom);
        if directed {
            for a in 0..n {
                let sup = opens.iter().map(|&u| &mu[l.inter(a, l.open_of(u))]).max().expect("nonempty");
                c.check("measure inside a directed join of opens is the supremum", mu[l.inter(a, l.open_of(top))] == *sup, || {
                    w(vec![l.name(a), super::names(f, &opens)])
                });
            }
        }
        if codirected {
            let meet = l.inter_all(opens.iter().map(|&u| l.open_of(u)));
            let inf = opens.iter().map(|&u| v.value(u)).min().expect("nonempty");
            c.check("measure of a filtered intersection of opens is the infimum", mu[meet] == *inf, || {
                w(vec![super::names(f, &opens)])
            });
        }
    }

    // reduction
    let mut reduced = Vec::new();
    for a in 0..n {
        let r = match mu_reduce(v, l.get(a)) {
            Ok(r) => r,
            Err(e) => {
                c.fail("reduction is defined", w(vec![l.name(a), e.to_string()]));
                continue;
            }
        };
        let ri = l.pos(&r.sublocale).expect("enumerated");
        let again = mu_reduce(v, &r.sublocale).map(|x| x.sublocale);
        c.check("reduction is idempotent", again.as_ref().ok() == Some(&r.sublocale), || w(vec![l.name(a)]));
        let full: Vec<usize> = (0..n).filter(|&x| l.sub(x, a) && mu[x] == mu[a]).collect();
        c.check(
            "reduction is the smallest sublocale of full measure",
            full.contains(&ri) && full.iter().all(|&x| l.sub(ri, x)),
            || w(vec![l.name(a), l.name(ri)]),
        );
        c.check("restriction is a valuation", v.restrict(l.get(a)).is_ok(), || w(vec![l.name(a)]));
        match null_partner(v, l.get(a)) {
            Ok(p) => c.check(
                "null partner covers with a null intersection",
                p.union_measure == total && p.intersection_measure.is_zero(),
                || w(vec![l.name(a), p.partner.describe()]),
            ),
            Err(e) => c.check("null partner covers with a null intersection", false, || w(vec![l.name(a), e.to_string()])),
        };
        if !reduced.contains(&ri) {
            reduced.push(ri);
        }
    }
    let restricted_whole = v.restrict(l.get(l.whole));
    c.check(
        "restriction to the whole is the valuation",
        restricted_whole.as_ref().is_ok_and(|r| r.values() == v.values()),
        || w(vec![]),
    );
    let is_reduced = |x: usize| reduced.contains(&x);
    for fam in families(reduced.len()) {
        let members: Vec<usize> = fam.iter().map(|&i| reduced[i]).collect();
        let u = l.union_all(members.iter().copied());
        c.check("unions of reduced sublocales are reduced", is_reduced(u), || {
            w(members.iter().map(|&i| l.name(i)).collect())
        });
        for a in 0..n {
            let lhs = l.inter(a, u);
            let rhs = l.union_all(members.iter().map(|&b| l.inter(a, b)));
            c.check("intersection distributes over unions of reduced sublocales", lhs == rhs, || {
                w(vec![l.name(a), format!("family of {}", members.len())])
            });
        }
    }
    match reduced_algebra(v, n.max(f.len())) {
        Ok(alg) => {
            c.check("reduced sublocales form a Boolean algebra", alg.is_boolean(), || w(vec![]));
            c.check("reduced algebra lists every reduction", alg.elements.len() == reduced.len(), || {
                w(vec![format!("{} listed, {} found", alg.elements.len(), reduced.len())])
            });
            let direct: Vec<Q> = alg.elements.iter().map(|x| v.outer(x)).collect();
            c.check("induced measure agrees with the outer measure", alg.measure.values() == direct.as_slice(), || w(vec![]));
        }
        Err(e) => c.fail("reduced sublocales form a Boolean algebra", w(vec![e.to_string()])),
    }
}

fn descriptors() -> Vec<(&'static str, Descriptor)> {
    vec![
        ("lebesgue", Descriptor::Lebesgue),
        ("restrict [0,1/2]", lebesgue_restricted_to_lower_half()),
        ("atoms [[1/2,1]]", unit_atom_at_half()),
        (
            "mix",
            Descriptor::Mixture(vec![
                (Q::new(1.into(), 2.into()), Descriptor::Lebesgue),
                (
                    Q::new(1.into(), 2.into()),
                    Descriptor::Atomic(vec![(Q::new(1.into(), 3.into()), Q::one())]),
                ),
            ]),
        ),
    ]
}

/// A random finite union of relatively open intervals with small
/// denominators, sometimes touching the ends of `[0,1]`.
pub fn random_ratopen<R: Rng>(rng: &mut R) -> RatOpen {
    let denominators = [2i64, 3, 4, 5, 7, 8, 16, 100];
    let parts = rng.gen_range(0..=4);
    let mut items = Vec::new();
    for _ in 0..parts {
        let d = denominators[rng.gen_range(0..denominators.len())];
        let a = rng.gen_range(0..d);
        let b = rng.gen_range(a + 1..=d);
        let lo = Q::new(a.into(), d.into());
        let hi = Q::new(b.into(), d.into());
        let lo_closed = lo.is_zero() && rng.gen_bool(0.5);
        let hi_closed = hi.is_one() && rng.gen_bool(0.5);
        items.push(Interval::new(lo, hi, lo_closed, hi_closed));
    }
    RatOpen::normalize(items).expect("relatively open by construction")
}

fn check_interval(config: &LawConfig, c: &mut Checker) {
    let tol = &config.tolerance;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let samples: Vec<RatOpen> = (0..config.random_cases).map(|_| random_ratopen(&mut rng)).collect();
    let probes = probe_opens();
    for (name, d) in descriptors() {
        let total = d.total();
        for u in &samples {
            let closed = d.measure(&u.complement());
            c.check("an open and its closed complement add up", d.measure_open(u) + closed == total, || {
                vec![name.into(), u.to_string()]
            });
        }
        let r = match im::mu_reduce(&d) {
            Ok(r) => r,
            Err(e) => {
                c.fail("reduction is defined", vec![name.into(), e.to_string()]);
                continue;
            }
        };
        for h in probes.iter().chain(&samples) {
            let once = r.apply(h);
            c.check(
                "reduction nucleus is inflationary, idempotent and measure-preserving",
                h.leq(&once) && r.apply(&once) == once && d.measure_open(&once) == d.measure_open(h),
                || vec![name.into(), h.to_string()],
            );
        }
    }

    let lebesgue = Descriptor::Lebesgue;
    let bounds = |x: &PresentedSublocale| measure_bounds(&lebesgue, x, tol);
    match bounds(&PresentedSublocale::rationals()) {
        Ok(b) => c.check("rationals are Lebesgue-null", b.lower.is_zero() && b.upper <= *tol, || vec![b.to_string()]),
        Err(e) => c.check("rationals are Lebesgue-null", false, || vec![e.to_string()]),
    };
    match bounds(&PresentedSublocale::Generic) {
        Ok(b) => c.check("the generic sublocale is Lebesgue-null", b.upper <= *tol, || vec![b.to_string()]),
        Err(e) => c.check("the generic sublocale is Lebesgue-null", false, || vec![e.to_string()]),
    };
    match bounds(&PresentedSublocale::irrationals()) {
        Ok(b) => c.check(
            "irrationals have full Lebesgue measure",
            b.upper <= Q::one() && b.lower >= Q::one() - tol,
            || vec![b.to_string()],
        ),
        Err(e) => c.check("irrationals have full Lebesgue measure", false, || vec![e.to_string()]),
    };
    let (a, b) = (PresentedSublocale::rationals(), PresentedSublocale::irrationals());
    match strict_additivity_check(&lebesgue, &a, &b, tol) {
        Ok(chk) => {
            let four_tol = tol * Q::from_integer(4.into());
            c.check(
                "strict additivity for rationals and irrationals",
                chk.contains_zero() && chk.width() <= four_tol,
                || vec![format!("[{}, {}]", chk.lower, chk.upper)],
            );
            c.residual("strict additivity, rationals and irrationals", chk.lower.to_string(), chk.upper.to_string());
        }
        Err(e) => c.fail("strict additivity for rationals and irrationals", vec![e.to_string()]),
    }

    // increasing unions stay between their members' bounds
    let pieces = [
        PresentedSublocale::open(RatOpen::open_interval(Q::zero(), Q::new(1.into(), 4.into())).expect("valid")),
        PresentedSublocale::rationals(),
        PresentedSublocale::Closed(RatOpen::open_interval(Q::zero(), Q::new(3.into(), 4.into())).expect("valid")),
    ];
    let mut acc: Vec<PresentedSublocale> = Vec::new();
    let mut previous_upper = Q::zero();
    for p in pieces {
        acc.push(p);
        let union = PresentedSublocale::Union(acc.clone());
        match bounds(&union) {
            Ok(bd) => {
                c.check("measure of an increasing union grows", &bd.upper + tol >= previous_upper, || {
                    vec![union.describe(), bd.to_string()]
                });
                previous_upper = bd.upper.clone();
            }
            Err(e) => c.fail("measure of an increasing union grows", vec![union.describe(), e.to_string()]),
        }
    }
    c.check("rational samples cover at least one nonempty open", samples.iter().any(|u| !u.is_empty()), Vec::new);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::boolean;
    use std::sync::Arc;

    #[test]
    fn boolean_frames_and_the_interval_pass() {
        for f in [boolean(1), boolean(2), boolean(3)] {
            let f = Arc::new(f);
            let l = Lattice::new(&f, 10).unwrap();
            let mut c = Checker::new("t");
            let vs = valuations(&f);
            assert_eq!(vs.len(), 3);
            for (name, v) in vs {
                check_valuation(&l, &v, &name, &mut c);
            }
            let r = c.finish();
            assert!(r.is_clean(), "{:?}", &r.violations[..r.violations.len().min(3)]);
        }
        let mut c = Checker::new("[0,1]");
        check_interval(&LawConfig::default(), &mut c);
        let r = c.finish();
        assert!(r.is_clean(), "{:?}", r.violations);
        assert_eq!(r.residuals.len(), 1);
    }

    #[test]
    fn non_regular_frames_get_a_note_only() {
        let mut corpus = Corpus::standard();
        corpus.entries.retain(|e| e.name == "chains/chain-3.json");
        let r = run(&corpus, &LawConfig::default());
        assert!(r.is_clean());
        assert!(r.notes.iter().any(|n| n.contains("no measure claims")));
    }
}
