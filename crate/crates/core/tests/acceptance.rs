//! Acceptance criteria 1 to 10. Runs without the test harness so every
//! criterion prints one pass/fail line; exits nonzero if any fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use locale_lab_core::corpus::Corpus;
use locale_lab_core::demo;
use locale_lab_core::frame::{boolean, chain, Frame};
use locale_lab_core::interval::presented::probe_opens;
use locale_lab_core::interval::{
    generic_is_nonempty, point_sublocale_meets_generic, Enumerator, PresentedSublocale, RatOpen, RoNucleus, Q,
};
use locale_lab_core::laws::measure::random_ratopen;
use locale_lab_core::laws::{self, LawConfig, Suite};
use locale_lab_core::measure::finite::{reduced_algebra, Valuation};
use locale_lab_core::measure::interval::{
    lebesgue_restricted_to_lower_half, measure_bounds, mu_reduce, strict_additivity_check, unit_atom_at_half,
    Descriptor,
};
use locale_lab_core::report::RunReport;
use locale_lab_core::sublocale::{enumerate_sublocales, generic, open_sublocale};
use locale_lab_core::validate_morphism;

const TOL_NUM: i64 = 1;
const TOL_DEN: i64 = 1000;
const FRAME_GATE_LIMIT: Duration = Duration::from_secs(1);
const SUBLOCALE_LIMIT: Duration = Duration::from_secs(5 * 60);
const MORPHISM_LIMIT: Duration = Duration::from_secs(10 * 60);
const FINITE_MEASURE_LIMIT: Duration = Duration::from_secs(5 * 60);
const INTERVAL_MEASURE_LIMIT: Duration = Duration::from_secs(30);
const MORPHISM_FRAME_SIZE: usize = 8;
const RANDOM_OPENS: usize = 100;
const SAMPLED_RATIONALS: usize = 100;
const ENUMERATION_BOUND: usize = 10;

fn tol() -> Q {
    Q::new(TOL_NUM.into(), TOL_DEN.into())
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            passed: true,
            detail: String::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.passed = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what.into());
        }
    }

    fn within(&mut self, started: Instant, limit: Duration) {
        let took = started.elapsed();
        self.require(took < limit, format!("took {took:?}, limit {limit:?}"));
    }

    fn report(&mut self, r: &RunReport) {
        let shown: Vec<String> = r
            .violations
            .iter()
            .take(3)
            .map(|v| format!("{} on {}: {}", v.law, v.case, v.witnesses.join(", ")))
            .collect();
        self.require(r.is_clean(), format!("{} violations: {}", r.violations.len(), shown.join(" | ")));
    }
}

fn shipped_corpus() -> Corpus {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    Corpus::load(&root).expect("shipped corpus")
}

fn criterion_1(o: &mut Outcome) {
    let started = Instant::now();
    let corpus = shipped_corpus();
    let three: Vec<_> = corpus.entries.iter().filter(|e| e.name.starts_with("topologies/top-3-")).collect();
    o.require(three.len() == 29, format!("{} topologies on 3 points", three.len()));
    for e in &three {
        o.require(e.loaded.is_ok(), format!("{} rejected", e.name));
    }
    for name in ["negative/m3.json", "negative/n5.json"] {
        match corpus.entries.iter().find(|e| e.name == name).map(|e| &e.loaded) {
            Some(Err(msg)) => o.require(msg.contains("not distributive"), format!("{name}: {msg}")),
            Some(Ok(_)) => o.require(false, format!("{name} accepted")),
            None => o.require(false, format!("{name} missing")),
        }
    }
    o.within(started, FRAME_GATE_LIMIT);
}

fn criterion_2(o: &mut Outcome) {
    let f = Arc::new(chain(3));
    let n = enumerate_sublocales(&f, ENUMERATION_BOUND).map(|v| v.len());
    o.require(n.as_ref().ok() == Some(&4), format!("3-chain: {n:?}"));
    for k in 0..=3 {
        let f = Arc::new(boolean(k));
        match enumerate_sublocales(&f, ENUMERATION_BOUND) {
            Ok(all) => {
                o.require(all.len() == 1 << k, format!("2^{k}: {} sublocales", all.len()));
                o.require(all.iter().all(|x| x.as_open().is_some()), format!("2^{k}: a sublocale is not open"));
            }
            Err(e) => o.require(false, format!("2^{k}: {e}")),
        }
    }
}

fn criterion_3(o: &mut Outcome) {
    let started = Instant::now();
    let r = laws::run(Suite::Sublocale, &shipped_corpus(), &LawConfig::default());
    o.report(&r);
    o.require(r.cases_run > 0, "no checks ran");
    o.within(started, SUBLOCALE_LIMIT);
}

fn criterion_4(o: &mut Outcome) {
    let started = Instant::now();
    let config = LawConfig {
        max_size: MORPHISM_FRAME_SIZE,
        up_to_isomorphism: false,
        ..LawConfig::default()
    };
    let r = laws::run(Suite::Morphism, &shipped_corpus(), &config);
    o.report(&r);
    o.require(r.cases_run > 0, "no checks ran");
    o.within(started, MORPHISM_LIMIT);
}

/// Double negation computed by brute force over the order.
fn double_negation_oracle(f: &Frame) -> Vec<usize> {
    let neg = |u| {
        f.elements()
            .filter(|&w| f.meet(w, u) == f.bottom())
            .fold(f.bottom(), |acc, w| f.join(acc, w))
    };
    f.elements().map(|u| neg(neg(u)).index()).collect()
}

fn criterion_5(o: &mut Outcome) {
    let corpus = shipped_corpus();
    for entry in corpus.frames(ENUMERATION_BOUND) {
        let f = entry.frame().expect("valid");
        let g = generic(f);
        let oracle = double_negation_oracle(f);
        let map: Vec<usize> = g.map().iter().map(|e| e.index()).collect();
        o.require(map == oracle, format!("{}: generic nucleus is not double negation", entry.name));
        for u in f.elements() {
            let int_cl = open_sublocale(f, u).closure().interior();
            o.require(g.apply(u) == int_cl, format!("{}: interior of closure differs at {}", entry.name, f.name(u)));
        }
        o.require(g.apply(f.bottom()) == f.bottom(), format!("{}: generic not dense", entry.name));
        match enumerate_sublocales(f, ENUMERATION_BOUND) {
            Ok(all) => {
                for x in all.iter().filter(|x| x.apply(f.bottom()) == f.bottom()) {
                    let inside = g.is_subsublocale_of(x).unwrap_or(false);
                    o.require(inside, format!("{}: generic not inside dense {}", entry.name, x.describe()));
                }
            }
            Err(e) => o.require(false, format!("{}: {e}", entry.name)),
        }
    }
}

fn criterion_6(o: &mut Outcome) {
    let started = Instant::now();
    let corpus = shipped_corpus();
    let config = LawConfig::default();
    let r = laws::run(Suite::Measure, &corpus, &config);
    let finite: Vec<_> = r.violations.iter().filter(|v| v.case != "[0,1]").collect();
    o.require(finite.is_empty(), format!("{} violations, first {:?}", finite.len(), finite.first()));
    o.require(
        r.notes.iter().any(|n| n.contains("no measure claims")),
        "no non-regular frame was gated out",
    );
    let mut boolean_frames = 0;
    for entry in corpus.frames(config.max_size) {
        let f = entry.frame().expect("valid");
        if !f.is_regular() || f.atoms().is_empty() {
            continue;
        }
        boolean_frames += 1;
        let n = f.atoms().len();
        let weights: [Vec<Q>; 3] = [
            vec![Q::one(); n],
            (0..n).map(|k| q(k as i64 + 1, 2)).collect(),
            (0..n).map(|k| if k == 0 { Q::zero() } else { Q::one() }).collect(),
        ];
        let mut distinct: Vec<Vec<Q>> = Vec::new();
        for w in &weights {
            let v = Valuation::from_atom_weights(f, w).expect("Boolean");
            if !distinct.contains(&v.values().to_vec()) {
                distinct.push(v.values().to_vec());
            }
            match reduced_algebra(&v, ENUMERATION_BOUND) {
                Ok(alg) => {
                    o.require(alg.is_boolean(), format!("{}: reduced algebra not Boolean", entry.name));
                    let quotient = validate_morphism(f, &alg.frame, alg.quotient.map().to_vec());
                    o.require(quotient.is_ok(), format!("{}: quotient is not a frame map", entry.name));
                }
                Err(e) => o.require(false, format!("{}: {e}", entry.name)),
            }
        }
        o.require(distinct.len() >= 3, format!("{}: {} distinct valuations", entry.name, distinct.len()));
    }
    o.require(boolean_frames > 0, "no Boolean frames in the corpus");
    o.within(started, FINITE_MEASURE_LIMIT);
}

fn criterion_7(o: &mut Outcome) {
    let started = Instant::now();
    let tol = tol();
    let leb = Descriptor::Lebesgue;
    match measure_bounds(&leb, &PresentedSublocale::rationals(), &tol) {
        Ok(b) => o.require(b.upper <= tol, format!("rationals: {b}")),
        Err(e) => o.require(false, format!("rationals: {e}")),
    }
    match measure_bounds(&leb, &PresentedSublocale::Generic, &tol) {
        Ok(b) => o.require(b.upper <= tol, format!("generic: {b}")),
        Err(e) => o.require(false, format!("generic: {e}")),
    }
    match measure_bounds(&leb, &PresentedSublocale::irrationals(), &tol) {
        Ok(b) => o.require(b.lower >= Q::one() - &tol && b.upper <= Q::one(), format!("irrationals: {b}")),
        Err(e) => o.require(false, format!("irrationals: {e}")),
    }
    let (a, b) = (PresentedSublocale::rationals(), PresentedSublocale::irrationals());
    match strict_additivity_check(&leb, &a, &b, &tol) {
        Ok(c) => o.require(
            c.contains_zero() && c.width() <= &tol * Q::from_integer(4.into()),
            format!("residual [{}, {}]", c.lower, c.upper),
        ),
        Err(e) => o.require(false, format!("residual: {e}")),
    }
    // an open and its closed complement, measured independently by interval lengths
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..RANDOM_OPENS {
        let u = random_ratopen(&mut rng);
        let inside: Q = u.parts().iter().map(|p| &p.hi - &p.lo).sum();
        let outside = leb.measure(&u.complement());
        o.require(leb.measure_open(&u) == inside, format!("length of {u}"));
        o.require(inside + outside == Q::one(), format!("{u} and its complement"));
    }
    o.within(started, INTERVAL_MEASURE_LIMIT);
}

fn criterion_8(o: &mut Outcome) {
    let probes = probe_opens();
    let ro = |s: &str| -> RatOpen { s.parse().expect("valid") };

    let leb = mu_reduce(&Descriptor::Lebesgue).expect("supported");
    // relative to [0,1] the largest open with the same measure as (0,1/2)u(1/2,1) also takes 0 and 1
    o.require(leb.apply(&ro("(0,1/2)|(1/2,1)")) == RatOpen::unit(), "Lebesgue: punctured interval not filled");
    o.require(leb.first_difference(&RoNucleus::Generic, &probes).is_none(), "Lebesgue: reduction is not generic");
    for h in &probes {
        o.require(leb.apply(h) == h.regularize(), format!("Lebesgue: not regularization at {h}"));
    }

    let atom = mu_reduce(&unit_atom_at_half()).expect("supported");
    let outside = ro("[0,1/2)|(1/2,1]");
    let mut fixed: Vec<RatOpen> = probes.iter().map(|h| atom.apply(h)).collect();
    fixed.sort_by_key(|u| u.to_string());
    fixed.dedup();
    o.require(fixed == vec![outside.clone(), RatOpen::unit()], format!("atom: fixpoints {fixed:?}"));
    o.require(
        atom.first_difference(&RoNucleus::Closed(outside), &probes).is_none(),
        "atom: reduction is not the closed point",
    );

    let half = mu_reduce(&lebesgue_restricted_to_lower_half()).expect("supported");
    let upper = ro("(1/2,1]");
    o.require(half.exterior() == upper, format!("restricted: exterior {}", half.exterior()));
    o.require(half.closure() == RoNucleus::Closed(upper.clone()), "restricted: closure is not closed [0,1/2]");
    let part = RoNucleus::GenericIn(Box::new(RoNucleus::Closed(upper)));
    o.require(half.first_difference(&part, &probes).is_none(), "restricted: not the generic part of closed [0,1/2]");
}

fn criterion_9(o: &mut Outcome) {
    let tol = tol();
    let d = demo::hidden_intersections(&tol);
    o.require(d.passed, d.lines.join(" / "));
    let meet = PresentedSublocale::Intersection(vec![PresentedSublocale::rationals(), PresentedSublocale::irrationals()]);
    o.require(meet.contains_generic().is_yes(), "intersection not certified dense");
    let leb = Descriptor::Lebesgue;
    let bound = |x: &PresentedSublocale| measure_bounds(&leb, x, &tol).expect("bounds");
    let (a, b) = (bound(&PresentedSublocale::rationals()), bound(&PresentedSublocale::irrationals()));
    let u = bound(&PresentedSublocale::Union(vec![PresentedSublocale::rationals(), PresentedSublocale::irrationals()]));
    let i = bound(&meet);
    // mu(A u B) = mu(A) + mu(B) - mu(A n B), as intervals
    let lo = &u.lower - &a.upper - &b.upper + &i.lower;
    let hi = &u.upper - &a.lower - &b.lower + &i.upper;
    o.require(lo <= Q::zero() && Q::zero() <= hi, format!("books do not balance: [{lo}, {hi}]"));
}

fn criterion_10(o: &mut Outcome) {
    let points = Enumerator::SternBrocot.first(SAMPLED_RATIONALS);
    o.require(points.len() == SAMPLED_RATIONALS, "too few rationals");
    for p in &points {
        // generic n {p} lies in the closed {p}, whose generic part is the open
        // of the pseudo-complement of [0,1] minus p, which is empty
        let oracle_empty = RatOpen::unit().remove_points([p]).pseudo_complement().is_empty();
        o.require(oracle_empty, format!("oracle: generic meets {p}"));
        o.require(!point_sublocale_meets_generic(p), format!("generic meets {p}"));
    }
    o.require(generic_is_nonempty(), "generic is empty");
    o.require(!RatOpen::empty().regularize().is_unit(), "oracle: generic is empty");
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(&mut Outcome)); 10] = [
        ("frame gate: 29 three-point topologies valid, M3 and N5 rejected", criterion_1),
        ("sublocale counts: 3-chain has 4, 2^n has 2^n, all open", criterion_2),
        ("sublocale law suite over the corpus", criterion_3),
        ("frame map law suite over frames of size at most 8", criterion_4),
        ("generic sublocale is double negation, dense, least dense", criterion_5),
        ("finite measure suite on Boolean frames", criterion_6),
        ("interval measure bounds at tolerance 1/1000", criterion_7),
        ("three reductions", criterion_8),
        ("hidden intersections of rationals and irrationals", criterion_9),
        ("generic misses the first 100 rationals yet is nonempty", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let mut o = Outcome::new();
        check(&mut o);
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {:>2} {verdict}: {name} ({:.2?})", i + 1, started.elapsed());
        if !o.passed {
            failed += 1;
            line.push_str(&format!(": {}", o.detail));
        }
        println!("{line}");
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
