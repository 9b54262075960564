//! Scripted scenarios on `[0,1]` under Lebesgue measure and two singular
//! measures. Each returns its printout and whether every certified claim in
//! it held.

use std::fmt::Write as _;

use num::{One, Zero};

use crate::interval::presented::probe_opens;
use crate::interval::{
    generic_is_nonempty, point_sublocale_meets_generic, Enumerator, PresentedSublocale, RatOpen, RoNucleus, Q,
};
use crate::measure::interval::{
    lebesgue_restricted_to_lower_half, measure_bounds, mu_reduce, strict_additivity_check, unit_atom_at_half,
    Descriptor, MeasureError,
};

/// Rationals sampled for pointwise claims.
pub const SAMPLED_RATIONALS: usize = 100;

#[derive(Clone, Debug)]
pub struct Demo {
    pub name: &'static str,
    pub lines: Vec<String>,
    pub passed: bool,
}

impl Demo {
    fn new(name: &'static str) -> Demo {
        Demo {
            name,
            lines: Vec::new(),
            passed: true,
        }
    }

    fn claim(&mut self, ok: bool, text: impl Into<String>) {
        self.passed &= ok;
        let mark = if ok { "ok" } else { "FAILED" };
        self.lines.push(format!("[{mark}] {}", text.into()));
    }

    fn say(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    fn error(&mut self, what: &str, e: MeasureError) {
        self.claim(false, format!("{what}: {e}"));
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("demo {}\n", self.name);
        for l in &self.lines {
            let _ = writeln!(out, "  {l}");
        }
        let _ = writeln!(out, "{}", if self.passed { "all claims certified" } else { "some claims FAILED" });
        out
    }
}

pub const NAMES: [&str; 4] = ["generic", "rationals", "reduction", "hidden-intersections"];

pub fn run(name: &str, tol: &Q) -> Option<Demo> {
    Some(match name {
        "generic" => generic(tol),
        "rationals" => rationals(tol),
        "reduction" => reduction(),
        "hidden-intersections" => hidden_intersections(tol),
        _ => return None,
    })
}

/// The generic sublocale: dense, nonempty, yet meeting no rational point.
pub fn generic(tol: &Q) -> Demo {
    let mut d = Demo::new("generic");
    let g = RoNucleus::Generic;
    d.claim(g.apply(&RatOpen::empty()).is_empty(), "double negation fixes the empty open, so the generic sublocale is dense");
    let verdict = PresentedSublocale::Generic.contains_generic();
    d.claim(verdict.is_yes(), format!("generic sublocale contains itself: {}", verdict.reason()));
    d.claim(generic_is_nonempty(), "the generic sublocale is nonempty: double negation does not send the empty open to [0,1]");
    let points = Enumerator::SternBrocot.first(SAMPLED_RATIONALS);
    let missed = points.iter().filter(|q| !point_sublocale_meets_generic(q)).count();
    d.claim(
        missed == points.len(),
        format!("generic meets none of the first {} rationals: {missed} empty intersections", points.len()),
    );
    d.say("so the generic sublocale is not the union of its points: intersection does not distribute over that union");
    match measure_bounds(&Descriptor::Lebesgue, &PresentedSublocale::Generic, tol) {
        Ok(b) => d.claim(b.upper <= *tol, format!("Lebesgue measure of generic: {b}")),
        Err(e) => d.error("Lebesgue measure of generic", e),
    }
    d
}

/// Rationals and irrationals: both dense, their sublocale intersection is
/// dense, and strict additivity holds up to the tolerance.
pub fn rationals(tol: &Q) -> Demo {
    let mut d = Demo::new("rationals");
    let (a, b) = (PresentedSublocale::rationals(), PresentedSublocale::irrationals());
    for x in [&a, &b] {
        let v = x.contains_generic();
        d.claim(v.is_yes(), format!("{x} is dense: {}", v.reason()));
    }
    let meet = PresentedSublocale::Intersection(vec![a.clone(), b.clone()]);
    let v = meet.contains_generic();
    d.claim(v.is_yes(), format!("the sublocale intersection of rationals and irrationals is dense: {}", v.reason()));
    additivity(&mut d, &a, &b, tol);
    d
}

fn additivity(d: &mut Demo, a: &PresentedSublocale, b: &PresentedSublocale, tol: &Q) {
    let leb = Descriptor::Lebesgue;
    match measure_bounds(&leb, a, tol) {
        Ok(m) => d.claim(m.lower.is_zero() && m.upper <= *tol, format!("measure of {a}: {m}")),
        Err(e) => d.error("measure of A", e),
    }
    match measure_bounds(&leb, b, tol) {
        Ok(m) => d.claim(m.upper <= Q::one() && m.lower >= Q::one() - tol, format!("measure of {b}: {m}")),
        Err(e) => d.error("measure of B", e),
    }
    match strict_additivity_check(&leb, a, b, tol) {
        Ok(c) => {
            d.say(format!("measure of the union: {}", c.union));
            d.say(format!("measure of the intersection: {}", c.intersection));
            let four_tol = tol * Q::from_integer(4.into());
            d.claim(
                c.contains_zero() && c.width() <= four_tol,
                format!("mu(A u B) - mu(A) - mu(B) + mu(A n B) lies in [{}, {}]", c.lower, c.upper),
            );
        }
        Err(e) => d.error("strict additivity", e),
    }
}

/// The reductions of the whole under three measures.
pub fn reduction() -> Demo {
    let mut d = Demo::new("reduction");
    let probes = probe_opens();
    let punctured: RatOpen = "(0,1/2)|(1/2,1)".parse().expect("valid");

    match mu_reduce(&Descriptor::Lebesgue) {
        Ok(r) => {
            let filled = r.apply(&punctured);
            d.claim(filled.is_unit(), format!("Lebesgue: e({punctured}) = {filled}"));
            d.claim(
                r.first_difference(&RoNucleus::Generic, &probes).is_none(),
                format!("Lebesgue: the reduction nucleus is double negation on all {} probes, so the reduction of [0,1] is generic", probes.len()),
            );
        }
        Err(e) => d.error("Lebesgue", e),
    }

    match mu_reduce(&unit_atom_at_half()) {
        Ok(r) => {
            let outside: RatOpen = "[0,1/2)|(1/2,1]".parse().expect("valid");
            let mut fixed: Vec<RatOpen> = probes.iter().map(|h| r.apply(h)).collect();
            fixed.sort_by_key(|u| u.to_string());
            fixed.dedup();
            let names: Vec<String> = fixed.iter().map(|u| u.to_string()).collect();
            d.claim(
                fixed == vec![outside.clone(), RatOpen::unit()],
                format!("unit atom at 1/2: fixpoints on the probes are {}", names.join(" and ")),
            );
            d.claim(
                r.first_difference(&RoNucleus::Closed(outside), &probes).is_none(),
                "unit atom at 1/2: the reduction of [0,1] is the closed point {1/2}",
            );
        }
        Err(e) => d.error("atom", e),
    }

    match mu_reduce(&lebesgue_restricted_to_lower_half()) {
        Ok(r) => {
            let upper: RatOpen = "(1/2,1]".parse().expect("valid");
            d.claim(r.exterior() == upper, format!("Lebesgue on [0,1/2]: the largest null open is {}", r.exterior()));
            let part = RoNucleus::GenericIn(Box::new(RoNucleus::Closed(upper.clone())));
            d.claim(
                r.first_difference(&part, &probes).is_none(),
                "Lebesgue on [0,1/2]: the reduction of [0,1] is the generic part of the closed [0,1/2]",
            );
            d.claim(
                r.first_difference(&r.closure(), &probes).is_some() && r.closure() == RoNucleus::Closed(upper),
                "Lebesgue on [0,1/2]: its closure is the closed [0,1/2], which is strictly larger",
            );
        }
        Err(e) => d.error("restricted Lebesgue", e),
    }
    d
}

/// A pointwise partition of `[0,1]` that is not a partition of sublocales.
pub fn hidden_intersections(tol: &Q) -> Demo {
    let mut d = Demo::new("hidden-intersections");
    let (a, b) = (PresentedSublocale::rationals(), PresentedSublocale::irrationals());
    let points = Enumerator::SternBrocot.first(SAMPLED_RATIONALS);
    let split = points
        .iter()
        .all(|q| a.contains_point(q) == Some(true) && b.contains_point(q) == Some(false));
    d.claim(split, format!("as sets, A = rationals and B = irrationals are disjoint: checked on {} rationals", points.len()));
    let cover = PresentedSublocale::Union(vec![a.clone(), b.clone()]);
    match measure_bounds(&Descriptor::Lebesgue, &cover, tol) {
        Ok(m) => d.claim(m.lower.is_one() && m.upper.is_one(), format!("A u B is all of [0,1]: measure {m}")),
        Err(e) => d.error("measure of the union", e),
    }
    let meet = PresentedSublocale::Intersection(vec![a.clone(), b.clone()]);
    let v = meet.contains_generic();
    d.claim(v.is_yes(), format!("as sublocales, A n B contains generic, hence is dense: {}", v.reason()));
    d.claim(generic_is_nonempty(), "generic is nonempty, so A and B do not partition [0,1] as a locale");
    additivity(&mut d, &a, &b, tol);
    d.say("the books balance because the hidden intersection is subtracted back, and it is null");
    d
}
