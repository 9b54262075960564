//! Enumerations of countable subsets of `[0,1]`.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, Integer, One, Zero};
use thiserror::Error;

use super::ratopen::{parse_rational, q0, q1, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown enumerator {0:?} (expected rationals-stern-brocot, dyadics or a point list)")]
pub struct UnknownEnumerator(pub String);

/// A fixed enumeration `q_0, q_1, ...` of a countable subset of `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Enumerator {
    /// `0, 1`, then the Stern-Brocot tree on `(0,1)` level by level:
    /// `1/2, 1/3, 2/3, 1/4, 2/5, 3/5, 3/4, ...`. Every rational of `[0,1]`
    /// appears exactly once.
    SternBrocot,
    /// `0, 1, 1/2, 1/4, 3/4, 1/8, 3/8, ...`.
    Dyadics,
    /// A finite list of points.
    Finite(Vec<Q>),
}

impl Enumerator {
    pub fn name(&self) -> String {
        match self {
            Enumerator::SternBrocot => "rationals-stern-brocot".into(),
            Enumerator::Dyadics => "dyadics".into(),
            Enumerator::Finite(pts) => {
                let parts: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
                format!("points[{}]", parts.join(","))
            }
        }
    }

    pub fn point(&self, i: usize) -> Option<Q> {
        match self {
            Enumerator::Finite(pts) => pts.get(i).cloned(),
            _ if i == 0 => Some(q0()),
            _ if i == 1 => Some(q1()),
            Enumerator::SternBrocot => Some(stern_brocot(i - 2)),
            Enumerator::Dyadics => Some(dyadic(i - 2)),
        }
    }

    pub fn first(&self, n: usize) -> Vec<Q> {
        (0..n).map_while(|i| self.point(i)).collect()
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            Enumerator::Finite(pts) => Some(pts.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Membership, decided exactly.
    pub fn contains(&self, x: &Q) -> bool {
        if *x < q0() || *x > q1() {
            return false;
        }
        match self {
            Enumerator::SternBrocot => true,
            Enumerator::Dyadics => {
                let mut d = x.denom().clone();
                let two = BigInt::from(2);
                while d.is_even() {
                    d /= &two;
                }
                d.is_one()
            }
            Enumerator::Finite(pts) => pts.contains(x),
        }
    }

    /// Whether the enumerated set is dense in `[0,1]`.
    pub fn is_dense(&self) -> bool {
        !matches!(self, Enumerator::Finite(_))
    }
}

impl fmt::Display for Enumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Enumerator {
    type Err = UnknownEnumerator;

    fn from_str(s: &str) -> Result<Enumerator, UnknownEnumerator> {
        let t = s.trim();
        match t {
            "rationals-stern-brocot" | "rationals" => Ok(Enumerator::SternBrocot),
            "dyadics" => Ok(Enumerator::Dyadics),
            _ => {
                let inner = t
                    .strip_prefix("points[")
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| UnknownEnumerator(t.to_string()))?;
                if inner.trim().is_empty() {
                    return Ok(Enumerator::Finite(Vec::new()));
                }
                let pts = inner
                    .split(',')
                    .map(parse_rational)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| UnknownEnumerator(t.to_string()))?;
                if pts.iter().any(|p| *p < q0() || *p > q1()) {
                    return Err(UnknownEnumerator(t.to_string()));
                }
                Ok(Enumerator::Finite(pts))
            }
        }
    }
}

/// Position of `j` within level-order numbering of a complete binary tree:
/// (level, offset within level).
fn level_of(j: usize) -> (u32, usize) {
    let level = (j + 1).ilog2();
    (level, j + 1 - (1usize << level))
}

fn stern_brocot(j: usize) -> Q {
    let (level, pos) = level_of(j);
    let (mut ln, mut ld) = (BigInt::zero(), BigInt::one());
    let (mut rn, mut rd) = (BigInt::one(), BigInt::one());
    for b in (0..level).rev() {
        let mn = &ln + &rn;
        let md = &ld + &rd;
        if pos >> b & 1 == 0 {
            rn = mn;
            rd = md;
        } else {
            ln = mn;
            ld = md;
        }
    }
    Q::new(ln + rn, ld + rd)
}

fn dyadic(j: usize) -> Q {
    let (level, pos) = level_of(j);
    let denom = BigInt::one() << (level + 1);
    Q::new(BigInt::from(2 * pos + 1), denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::ratopen::q;

    #[test]
    fn stern_brocot_prefix() {
        let expected = [
            q(0, 1),
            q(1, 1),
            q(1, 2),
            q(1, 3),
            q(2, 3),
            q(1, 4),
            q(2, 5),
            q(3, 5),
            q(3, 4),
        ];
        assert_eq!(Enumerator::SternBrocot.first(9), expected);
    }

    #[test]
    fn stern_brocot_hits_every_small_rational_once() {
        let pts = Enumerator::SternBrocot.first((1 << 12) + 1);
        let mut seen = std::collections::HashSet::new();
        for p in &pts {
            assert!(seen.insert(p.clone()), "repeat {p}");
        }
        // every reduced fraction with denominator <= 12 lies within 12 tree levels
        for d in 1..=12i64 {
            for n in 0..=d {
                let x = q(n, d);
                assert!(seen.contains(&x), "missing {x}");
            }
        }
    }

    #[test]
    fn dyadic_prefix() {
        let expected = [q(0, 1), q(1, 1), q(1, 2), q(1, 4), q(3, 4), q(1, 8), q(3, 8)];
        assert_eq!(Enumerator::Dyadics.first(7), expected);
        assert!(Enumerator::Dyadics.contains(&q(3, 8)));
        assert!(!Enumerator::Dyadics.contains(&q(1, 3)));
    }

    #[test]
    fn names_round_trip() {
        for e in [
            Enumerator::SternBrocot,
            Enumerator::Dyadics,
            Enumerator::Finite(vec![q(1, 2), q(1, 3)]),
        ] {
            assert_eq!(e.name().parse::<Enumerator>().unwrap(), e);
        }
        assert!("primes".parse::<Enumerator>().is_err());
    }
}
