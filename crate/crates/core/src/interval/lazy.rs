//! Countable unions of rational opens, presented by increasing stages.

use std::fmt;
use std::sync::Arc;

use num::One;
use thiserror::Error;

use super::enumerate::Enumerator;
use super::ratopen::{q0, RatOpen, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LazyError {
    #[error("stage {later} of {name} does not contain stage {earlier}")]
    NotMonotone {
        name: String,
        earlier: usize,
        later: usize,
    },
}

type StageFn = dyn Fn(usize) -> RatOpen + Send + Sync;

/// An open `V = U_n stage(n)` with `stage(n) <= stage(n+1)`.
#[derive(Clone)]
pub enum LazyOpen {
    Constant(RatOpen),
    /// Union of the intervals of radius `epsilon * 2^-(i+3)` around the
    /// enumerated points, with finitely many points removed.
    Cover {
        points: Enumerator,
        epsilon: Q,
        excluded: Vec<Q>,
    },
    Join(Vec<LazyOpen>),
    Meet(Vec<LazyOpen>),
    /// Caller-supplied stages with no analytic information.
    Custom { name: String, stage: Arc<StageFn> },
}

impl fmt::Debug for LazyOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// `lazy_cover(points, epsilon)`: stage `n` covers the first `n` points and
/// every stage has Lebesgue measure below `epsilon / 2`.
pub fn lazy_cover(points: Enumerator, epsilon: Q) -> LazyOpen {
    LazyOpen::Cover {
        points,
        epsilon,
        excluded: Vec::new(),
    }
}

/// Radius of the `i`-th cover interval.
pub fn cover_radius(epsilon: &Q, i: usize) -> Q {
    epsilon / Q::from_integer(num::BigInt::one() << (i + 3))
}

impl LazyOpen {
    pub fn describe(&self) -> String {
        match self {
            LazyOpen::Constant(u) => u.to_string(),
            LazyOpen::Cover {
                points,
                epsilon,
                excluded,
            } => {
                let mut s = format!("cover({points}, {epsilon})");
                if !excluded.is_empty() {
                    let ex: Vec<String> = excluded.iter().map(|x| x.to_string()).collect();
                    s.push_str(&format!(" minus {{{}}}", ex.join(",")));
                }
                s
            }
            LazyOpen::Join(items) => {
                let parts: Vec<String> = items.iter().map(LazyOpen::describe).collect();
                format!("join({})", parts.join("; "))
            }
            LazyOpen::Meet(items) => {
                let parts: Vec<String> = items.iter().map(LazyOpen::describe).collect();
                format!("meet({})", parts.join("; "))
            }
            LazyOpen::Custom { name, .. } => name.clone(),
        }
    }

    /// The `n`-th stage, unchecked.
    pub fn stage(&self, n: usize) -> RatOpen {
        match self {
            LazyOpen::Constant(u) => u.clone(),
            LazyOpen::Cover {
                points,
                epsilon,
                excluded,
            } => {
                let pieces: Vec<RatOpen> = points
                    .first(n)
                    .into_iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let r = cover_radius(epsilon, i);
                        RatOpen::clipped(&p - &r, &p + &r)
                    })
                    .collect();
                RatOpen::join_all(&pieces).remove_points(excluded)
            }
            LazyOpen::Join(items) => {
                let stages: Vec<RatOpen> = items.iter().map(|l| l.stage(n)).collect();
                RatOpen::join_all(&stages)
            }
            LazyOpen::Meet(items) => items
                .iter()
                .map(|l| l.stage(n))
                .reduce(|a, b| a.meet(&b))
                .unwrap_or_else(RatOpen::unit),
            LazyOpen::Custom { stage, .. } => stage(n),
        }
    }

    /// The `n`-th stage, after checking that it contains stage `n - 1`.
    pub fn checked_stage(&self, n: usize) -> Result<RatOpen, LazyError> {
        let cur = self.stage(n);
        if n > 0 && !self.stage(n - 1).leq(&cur) {
            return Err(LazyError::NotMonotone {
                name: self.describe(),
                earlier: n - 1,
                later: n,
            });
        }
        Ok(cur)
    }

    /// Iterates stages in order, checking each against the last one seen.
    pub fn cursor(&self) -> StageCursor<'_> {
        StageCursor {
            lazy: self,
            last: None,
        }
    }

    /// Whether density of the limit is known without looking at stages:
    /// covers of dense enumerations are dense, and so are finite meets and
    /// joins involving them.
    pub fn certified_dense(&self) -> bool {
        match self {
            LazyOpen::Constant(u) => u.is_dense(),
            LazyOpen::Cover { points, .. } => points.is_dense(),
            LazyOpen::Join(items) => items.iter().any(LazyOpen::certified_dense),
            LazyOpen::Meet(items) => items.iter().all(LazyOpen::certified_dense),
            LazyOpen::Custom { .. } => false,
        }
    }

    /// Semi-decision: `true` once some stage up to `n` is already dense.
    pub fn dense_by_stage(&self, n: usize) -> bool {
        self.stage(n).is_dense()
    }

    /// Upper bound on the Lebesgue measure of the limit minus stage `n`, when
    /// the presentation carries one.
    pub fn lebesgue_tail(&self, n: usize) -> Option<Q> {
        match self {
            LazyOpen::Constant(_) => Some(q0()),
            LazyOpen::Cover { epsilon, .. } => {
                // sum over i >= n of 2 * epsilon * 2^-(i+3)
                Some(cover_radius(epsilon, n) * Q::from_integer(4.into()))
            }
            LazyOpen::Join(items) | LazyOpen::Meet(items) => {
                items.iter().map(|l| l.lebesgue_tail(n)).sum()
            }
            LazyOpen::Custom { .. } => None,
        }
    }
}

pub struct StageCursor<'a> {
    lazy: &'a LazyOpen,
    last: Option<(usize, RatOpen)>,
}

impl StageCursor<'_> {
    pub fn stage(&mut self, n: usize) -> Result<RatOpen, LazyError> {
        let cur = self.lazy.stage(n);
        if let Some((m, prev)) = &self.last {
            let (earlier, later, small, big) = if *m <= n {
                (*m, n, prev, &cur)
            } else {
                (n, *m, &cur, prev)
            };
            if !small.leq(big) {
                return Err(LazyError::NotMonotone {
                    name: self.lazy.describe(),
                    earlier,
                    later,
                });
            }
        }
        self.last = Some((n, cur.clone()));
        Ok(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::ratopen::q;

    #[test]
    fn cover_examples() {
        let c = lazy_cover(Enumerator::SternBrocot, q(1, 2));
        assert!(c.stage(0).is_empty());
        let mut cur = c.cursor();
        for n in 0..200 {
            let s = cur.stage(n).unwrap();
            assert!(s.lebesgue() < q(1, 4));
            for p in Enumerator::SternBrocot.first(n) {
                assert!(s.contains(&p));
            }
        }
        assert!(c.certified_dense());
    }

    #[test]
    fn tail_bounds_dominate_later_growth() {
        let eps = q(1, 3);
        let c = lazy_cover(Enumerator::SternBrocot, eps.clone());
        for n in [0usize, 1, 5, 20] {
            let later = c.stage(n + 60).lebesgue();
            assert!(later <= c.stage(n).lebesgue() + c.lebesgue_tail(n).unwrap());
        }
        assert_eq!(c.lebesgue_tail(0).unwrap(), eps / Q::from_integer(2.into()));
    }

    #[test]
    fn excluded_points_stay_out() {
        let c = LazyOpen::Cover {
            points: Enumerator::SternBrocot,
            epsilon: q(1, 8),
            excluded: vec![q(1, 2)],
        };
        for n in [4, 10, 50] {
            assert!(!c.stage(n).contains(&q(1, 2)));
            assert!(c.stage(n).contains(&q(1, 3)));
        }
        assert!(c.certified_dense());
    }

    #[test]
    fn monotonicity_violations_are_reported() {
        let shrinking = LazyOpen::Custom {
            name: "shrinking".into(),
            stage: Arc::new(|n| {
                RatOpen::open_interval(q0(), Q::new(1.into(), (n as i64 + 2).into())).unwrap()
            }),
        };
        assert!(shrinking.checked_stage(0).is_ok());
        assert!(matches!(
            shrinking.checked_stage(1),
            Err(LazyError::NotMonotone { .. })
        ));
        let mut cur = shrinking.cursor();
        cur.stage(0).unwrap();
        assert!(cur.stage(3).is_err());
        assert!(shrinking.lebesgue_tail(4).is_none());
    }
}
