//! Birational sequences: wall labels realizing simple congruences.
//!
//! A sequence assigns each point of `[n]` an above-label and a below-label
//! (exact nonnegative rationals). An up arc is forbidden when the
//! above-labels of its interior sum to at least 1, a down arc when the
//! below-labels do. The resulting congruence is always simple and essential,
//! and conversely every simple essential congruence is realized by some
//! sequence.

use crate::arc::Arc;
use crate::error::{Error, Result};
use crate::ideal::ArcIdeal;
use num::{BigRational, One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// `n` pairs `(above-label, below-label)` of nonnegative rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct BirationalSequence {
    pairs: Vec<(BigRational, BigRational)>,
}

impl BirationalSequence {
    pub fn new(pairs: Vec<(BigRational, BigRational)>) -> Result<Self> {
        if pairs.iter().any(|(a, b)| a.is_negative() || b.is_negative()) {
            return Err(Error::NegativeLabel);
        }
        Ok(BirationalSequence { pairs })
    }

    pub fn zeros(n: usize) -> Self {
        BirationalSequence {
            pairs: (0..n)
                .map(|_| (BigRational::zero(), BigRational::zero()))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(BigRational, BigRational)] {
        &self.pairs
    }

    /// Above-label of point `v` (1-indexed).
    pub fn above(&self, v: u8) -> &BigRational {
        &self.pairs[v as usize - 1].0
    }

    /// Below-label of point `v` (1-indexed).
    pub fn below(&self, v: u8) -> &BigRational {
        &self.pairs[v as usize - 1].1
    }

    fn sum(&self, i: u8, j: u8, above: bool) -> BigRational {
        (i + 1..j)
            .map(|v| if above { self.above(v) } else { self.below(v) })
            .sum()
    }
}

impl fmt::Display for BirationalSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, (a, b)) in self.pairs.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for BirationalSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for BirationalSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::parse(0, "expected ((a1,b1),(a2,b2),...)"))?;
        let mut pairs = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::parse(pairs.len(), "expected `(`"))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::parse(pairs.len(), "missing `)`"))?;
            let (pair, tail) = body.split_at(close);
            rest = tail[1..].trim_start();
            let mut halves = pair.split(',');
            let parse_label = |t: Option<&str>| -> Result<BigRational> {
                let t = t.ok_or_else(|| Error::parse(pairs.len(), "expected a pair"))?;
                BigRational::from_str(t.trim())
                    .map_err(|_| Error::parse(pairs.len(), format!("invalid rational `{t}`")))
            };
            let a = parse_label(halves.next())?;
            let b = parse_label(halves.next())?;
            if halves.next().is_some() {
                return Err(Error::parse(pairs.len(), "pair has too many entries"));
            }
            pairs.push((a, b));
        }
        BirationalSequence::new(pairs)
    }
}

/// Subarc-minimal intervals `(i, j)` whose label sums reach 1 on the given
/// side.
fn minimal_saturated(seq: &BirationalSequence, above: bool) -> Vec<(u8, u8)> {
    let n = seq.n() as u8;
    let one = BigRational::one();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 2..=n {
            if seq.sum(i, j, above) >= one
                && seq.sum(i + 1, j, above) < one
                && seq.sum(i, j - 1, above) < one
            {
                out.push((i, j));
            }
        }
    }
    out
}

/// The congruence defined by a birational sequence: forbid each up arc whose
/// interior above-labels sum to >= 1, and dually for down arcs.
pub fn birational_congruence(seq: &BirationalSequence) -> Result<ArcIdeal> {
    let n = seq.n();
    let forbidden: Vec<Arc> = minimal_saturated(seq, true)
        .into_iter()
        .map(|(i, j)| Arc::up(i, j))
        .chain(
            minimal_saturated(seq, false)
                .into_iter()
                .map(|(i, j)| Arc::down(i, j)),
        )
        .collect();
    Ok(ArcIdeal::from_forbidden(n, forbidden))
}

/// Realizes a simple essential congruence by a birational sequence, so that
/// `birational_congruence(realize_birational(a)) = a`.
///
/// Follows the inductive scheme: walk the nonnesting minimal forbidden up
/// arcs left to right, spread a small weight `eps` over each interior and top
/// up the point `j - 1` so the interval sums to exactly 1; dually below. If
/// `eps` is too coarse some unwanted interval also saturates, in which case
/// retry with `eps / 2` (saturating only the chosen intervals is an open
/// condition, so this terminates).
pub fn realize_birational(ideal: &ArcIdeal) -> Result<BirationalSequence> {
    ideal.require_essential()?;
    ideal.require_simple()?;
    let minimal = ideal.minimal_non_arcs();
    let ups: Vec<(u8, u8)> = minimal
        .iter()
        .filter(|a| a.is_up() && !a.is_basic())
        .map(|a| (a.left(), a.right()))
        .collect();
    let downs: Vec<(u8, u8)> = minimal
        .iter()
        .filter(|a| a.is_down() && !a.is_basic())
        .map(|a| (a.left(), a.right()))
        .collect();
    let quarter = BigRational::new(1.into(), 4.into());
    let mut base = BigRational::new(1.into(), 2.into());
    for _ in 0..64 {
        let mut above = vec![BigRational::zero(); ideal.n() + 1];
        let mut below = vec![BigRational::zero(); ideal.n() + 1];
        let mut feasible = true;
        for (intervals, labels) in [(&ups, &mut above), (&downs, &mut below)] {
            // the increment must shrink from one interval to the next: the
            // balancing weight of an interval may sit inside the following
            // one, leaving ever less headroom below 1
            let mut eps = base.clone();
            for (i, j) in intervals.iter().copied() {
                for v in i + 1..j {
                    labels[v as usize] += &eps;
                }
                let total: BigRational =
                    (i + 1..j).map(|v| labels[v as usize].clone()).sum();
                if total > BigRational::one() {
                    feasible = false;
                    break;
                }
                let deficit = BigRational::one() - total;
                labels[j as usize - 1] += deficit;
                eps *= &quarter;
            }
        }
        if feasible {
            let seq = BirationalSequence::new(
                (1..=ideal.n())
                    .map(|v| (above[v].clone(), below[v].clone()))
                    .collect(),
            )?;
            if &birational_congruence(&seq)? == ideal {
                return Ok(seq);
            }
        }
        base *= &quarter;
    }
    Err(Error::NoPreimage)
}
