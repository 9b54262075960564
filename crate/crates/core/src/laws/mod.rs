//! Exhaustive law suites over a corpus of finite frames, plus the
//! certified-bounds checks on `[0,1]`.
//!
//! Each corpus entry is one case; cases run in parallel and their results
//! are merged in corpus order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{Corpus, CorpusEntry};
use crate::frame::{Elem, Frame};
use crate::interval::Q;
use crate::measure::interval::default_tolerance;
use crate::report::{Checker, RunReport};
use crate::sublocale::{closed_sublocale, enumerate_sublocales, generic, open_sublocale, Sublocale};

pub mod frame;
pub mod measure;
pub mod morphism;
pub mod sublocale;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Frame,
    Sublocale,
    Morphism,
    Measure,
    All,
}

#[derive(Debug, Error)]
#[error("unknown suite {0:?} (expected frame, sublocale, morphism, measure or all)")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Suite, UnknownSuite> {
        match s {
            "frame" => Ok(Suite::Frame),
            "sublocale" => Ok(Suite::Sublocale),
            "morphism" => Ok(Suite::Morphism),
            "measure" => Ok(Suite::Measure),
            "all" => Ok(Suite::All),
            other => Err(UnknownSuite(other.to_string())),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Frame => "frame",
            Suite::Sublocale => "sublocale",
            Suite::Morphism => "morphism",
            Suite::Measure => "measure",
            Suite::All => "all",
        })
    }
}

#[derive(Clone, Debug)]
pub struct LawConfig {
    /// Frames with more elements are skipped.
    pub max_size: usize,
    pub tolerance: Q,
    /// Random rational opens per descriptor in the interval checks.
    pub random_cases: usize,
    pub seed: u64,
    /// Check frame maps between one frame per isomorphism class only.
    pub up_to_isomorphism: bool,
}

impl Default for LawConfig {
    fn default() -> LawConfig {
        LawConfig {
            max_size: 10,
            tolerance: default_tolerance(),
            random_cases: 100,
            seed: 0x5eed,
            up_to_isomorphism: true,
        }
    }
}

pub fn run(suite: Suite, corpus: &Corpus, config: &LawConfig) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new(&suite.to_string());
    let parts: Vec<Suite> = match suite {
        Suite::All => vec![Suite::Frame, Suite::Sublocale, Suite::Morphism, Suite::Measure],
        s => vec![s],
    };
    for part in parts {
        let sub = match part {
            Suite::Frame => frame::run(corpus, config),
            Suite::Sublocale => sublocale::run(corpus, config),
            Suite::Morphism => morphism::run(corpus, config),
            Suite::Measure => measure::run(corpus, config),
            Suite::All => unreachable!(),
        };
        report.absorb(sub);
    }
    if suite == Suite::Measure || suite == Suite::All {
        report.tolerance = Some(config.tolerance.to_string());
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}

/// Runs `per_case` on every valid frame within the size limit, in parallel,
/// merging in corpus order.
pub(crate) fn per_frame<F>(corpus: &Corpus, config: &LawConfig, per_case: F) -> RunReport
where
    F: Fn(&CorpusEntry, &Arc<Frame>, &mut Checker) + Sync,
{
    let cases: Vec<&CorpusEntry> = corpus.frames(config.max_size).collect();
    let reports: Vec<RunReport> = cases
        .par_iter()
        .map(|entry| {
            let mut c = Checker::new(&entry.name);
            let frame = entry.frame().expect("filtered to valid frames");
            per_case(entry, frame, &mut c);
            c.finish()
        })
        .collect();
    let mut out = RunReport::new("");
    for r in reports {
        out.absorb(r);
    }
    out
}

/// All sublocales of a frame with precomputed order, union and intersection
/// tables. Union and intersection are the library operations under test;
/// the order is read off the nuclei.
pub(crate) struct Lattice {
    pub frame: Arc<Frame>,
    pub all: Vec<Sublocale>,
    index: HashMap<Vec<Elem>, usize>,
    sub: Vec<bool>,
    union: Vec<usize>,
    inter: Vec<usize>,
    pub open: Vec<usize>,
    pub closed: Vec<usize>,
    pub whole: usize,
    pub empty: usize,
    pub generic: usize,
}

impl Lattice {
    pub fn new(frame: &Arc<Frame>, bound: usize) -> Result<Lattice, String> {
        let all = enumerate_sublocales(frame, bound).map_err(|e| e.to_string())?;
        let index: HashMap<Vec<Elem>, usize> = all
            .iter()
            .enumerate()
            .map(|(i, x)| (x.map().to_vec(), i))
            .collect();
        let n = all.len();
        let find = |x: &Sublocale, what: &str| -> Result<usize, String> {
            index
                .get(x.map())
                .copied()
                .ok_or_else(|| format!("{what} {} is missing from the enumeration", x.describe()))
        };
        let mut sub = vec![false; n * n];
        let mut union = vec![0; n * n];
        let mut inter = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                sub[i * n + j] = all[i].is_subsublocale_of(&all[j]).map_err(|e| e.to_string())?;
                if j < i {
                    union[i * n + j] = union[j * n + i];
                    inter[i * n + j] = inter[j * n + i];
                    continue;
                }
                let u = all[i].union(&all[j]).map_err(|e| e.to_string())?;
                let m = all[i].intersect(&all[j]).map_err(|e| e.to_string())?;
                union[i * n + j] = find(&u, "union")?;
                inter[i * n + j] = find(&m, "intersection")?;
            }
        }
        let open = frame
            .elements()
            .map(|u| find(&open_sublocale(frame, u), "open sublocale"))
            .collect::<Result<_, _>>()?;
        let closed = frame
            .elements()
            .map(|v| find(&closed_sublocale(frame, v), "closed sublocale"))
            .collect::<Result<_, _>>()?;
        let whole = find(&Sublocale::whole(frame), "whole")?;
        let empty = find(&Sublocale::empty(frame), "empty")?;
        let generic = find(&generic(frame), "generic sublocale")?;
        Ok(Lattice {
            frame: frame.clone(),
            all,
            index,
            sub,
            union,
            inter,
            open,
            closed,
            whole,
            empty,
            generic,
        })
    }

    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn pos(&self, x: &Sublocale) -> Option<usize> {
        self.index.get(x.map()).copied()
    }

    pub fn get(&self, i: usize) -> &Sublocale {
        &self.all[i]
    }

    pub fn name(&self, i: usize) -> String {
        self.all[i].describe()
    }

    /// `all[i]` is contained in `all[j]`.
    pub fn sub(&self, i: usize, j: usize) -> bool {
        self.sub[i * self.len() + j]
    }

    pub fn union(&self, i: usize, j: usize) -> usize {
        self.union[i * self.len() + j]
    }

    pub fn inter(&self, i: usize, j: usize) -> usize {
        self.inter[i * self.len() + j]
    }

    pub fn union_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.empty, |acc, i| self.union(acc, i))
    }

    pub fn inter_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.whole, |acc, i| self.inter(acc, i))
    }

    pub fn open_of(&self, u: Elem) -> usize {
        self.open[u.index()]
    }

    pub fn closed_of(&self, v: Elem) -> usize {
        self.closed[v.index()]
    }
}

/// Families used for laws quantified over arbitrary families: every subset
/// when the lattice is small, otherwise every subset of size at most three.
pub(crate) fn families(n: usize) -> Vec<Vec<usize>> {
    if n <= 10 {
        return (0u32..(1 << n))
            .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
            .collect();
    }
    let mut out = vec![Vec::new()];
    for i in 0..n {
        out.push(vec![i]);
        for j in i + 1..n {
            out.push(vec![i, j]);
            for k in j + 1..n {
                out.push(vec![i, j, k]);
            }
        }
    }
    out
}

pub(crate) fn names(frame: &Frame, items: &[Elem]) -> String {
    let parts: Vec<&str> = items.iter().map(|&e| frame.name(e)).collect();
    parts.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::chain;

    #[test]
    fn lattice_of_the_three_chain() {
        let f = Arc::new(chain(3));
        let l = Lattice::new(&f, 10).unwrap();
        assert_eq!(l.len(), 4);
        assert!(l.sub(l.empty, l.whole));
        assert_eq!(l.union(l.open_of(Elem(1)), l.closed_of(Elem(1))), l.whole);
        assert_eq!(l.inter(l.open_of(Elem(1)), l.closed_of(Elem(1))), l.empty);
        assert_eq!(l.generic, l.open_of(Elem(1)));
    }

    #[test]
    fn family_counts() {
        assert_eq!(families(4).len(), 16);
        assert_eq!(families(12).len(), 1 + 12 + 66 + 220);
    }
}
