//! Arcs `(i, j, A, B)` and their crossing and subarc relations.
//!
//! An arc joins `i < j` and splits the interior `]i,j[` into the set `A` of
//! points it passes above and the set `B` of points it passes below. Only `A`
//! is stored (as a bitmask over values); `B` is the complement of `A` in the
//! interior.

use crate::error::{Error, Result};
use crate::MAX_N;
use std::fmt;
use std::str::FromStr;

/// Bitmask over values: bit `v - 1` stands for the value `v`.
pub type ValSet = u32;

/// Mask of the open interval `]i,j[`.
pub fn interval_mask(i: u8, j: u8) -> ValSet {
    debug_assert!(i < j);
    ((1 << (j - 1)) as ValSet).wrapping_sub((1 << i) as ValSet)
}

/// Sorted values of a mask.
pub fn mask_values(mask: ValSet) -> Vec<u8> {
    (1..=32u8).filter(|v| mask & (1 << (v - 1)) != 0).collect()
}

pub fn values_mask<I: IntoIterator<Item = u8>>(values: I) -> ValSet {
    values.into_iter().fold(0, |m, v| m | (1 << (v - 1)))
}

/// An arc `(i, j, A, B)` with `A` stored as a bitmask and `B` derived.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    i: u8,
    j: u8,
    above: ValSet,
}

impl Arc {
    pub fn new(i: u8, j: u8, above: ValSet) -> Result<Self> {
        if i == 0 || i >= j || j as usize > MAX_N {
            return Err(Error::InvalidArc(format!(
                "endpoints must satisfy 1 <= i < j <= {MAX_N}, got ({i},{j})"
            )));
        }
        if above & !interval_mask(i, j) != 0 {
            return Err(Error::InvalidArc(format!(
                "above set must be contained in ]{i},{j}["
            )));
        }
        Ok(Arc { i, j, above })
    }

    /// The up arc `u(i,j)` passing above all interior points.
    pub fn up(i: u8, j: u8) -> Self {
        Arc {
            i,
            j,
            above: interval_mask(i, j),
        }
    }

    /// The down arc `d(i,j)` passing below all interior points.
    pub fn down(i: u8, j: u8) -> Self {
        Arc { i, j, above: 0 }
    }

    /// The basic arc `(i, i+1, {}, {})`.
    pub fn basic(i: u8) -> Self {
        Arc {
            i,
            j: i + 1,
            above: 0,
        }
    }

    pub fn left(&self) -> u8 {
        self.i
    }

    pub fn right(&self) -> u8 {
        self.j
    }

    pub fn above(&self) -> ValSet {
        self.above
    }

    pub fn below(&self) -> ValSet {
        interval_mask(self.i, self.j) & !self.above
    }

    pub fn is_up(&self) -> bool {
        self.below() == 0
    }

    pub fn is_down(&self) -> bool {
        self.above == 0
    }

    pub fn is_basic(&self) -> bool {
        self.j == self.i + 1
    }

    /// Number of interior points, `j - i - 1`.
    pub fn interior_len(&self) -> u8 {
        self.j - self.i - 1
    }

    /// Shifts both endpoints and the above set by `offset`.
    pub fn shift(&self, offset: u8) -> Self {
        Arc {
            i: self.i + offset,
            j: self.j + offset,
            above: self.above << offset,
        }
    }

    /// `true` iff `self` is a subarc of `other`: the endpoints of `self` lie
    /// between those of `other` and the two arcs agree in between.
    pub fn is_subarc(&self, other: &Arc) -> bool {
        other.i <= self.i
            && self.j <= other.j
            && self.above & !other.above == 0
            && self.below() & !other.below() == 0
    }

    /// `true` iff the two arcs cross, i.e. the corresponding curves intersect
    /// in their interior.
    pub fn crosses(&self, other: &Arc) -> bool {
        let ends = |a: &Arc| values_mask([a.i, a.j]);
        let first = (self.above & other.below())
            | (ends(self) & other.below())
            | (self.above & ends(other));
        let second = (self.below() & other.above)
            | (ends(self) & other.above)
            | (self.below() & ends(other));
        first != 0 && second != 0
    }
}

/// All arcs on `[n]` in canonical order (lexicographic by `(i, j, A)`).
pub fn all_arcs(n: usize) -> Vec<Arc> {
    let mut arcs = Vec::new();
    for i in 1..=n as u8 {
        for j in i + 1..=n as u8 {
            for above in 0..(1u64 << (j - i - 1)) {
                arcs.push(Arc {
                    i,
                    j,
                    above: (above as ValSet) << i,
                });
            }
        }
    }
    arcs.sort();
    arcs
}

/// `Sum over i < j of 2^(j-i-1)`, the number of arcs on `[n]`.
pub fn arc_count(n: usize) -> usize {
    let mut c = 0usize;
    for i in 1..=n {
        for j in i + 1..=n {
            c += 1 << (j - i - 1);
        }
    }
    c
}

impl fmt::Display for Arc {
    /// `u(i,j)` and `d(i,j)` shorthands where they apply (basic arcs print as
    /// `u(i,j)`), the explicit `arc(i,j;A=..;B=..)` form otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_up() {
            write!(f, "u({},{})", self.i, self.j)
        } else if self.is_down() {
            write!(f, "d({},{})", self.i, self.j)
        } else {
            let fmt_set = |m: ValSet| {
                mask_values(m)
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            write!(
                f,
                "arc({},{};A={};B={})",
                self.i,
                self.j,
                fmt_set(self.above),
                fmt_set(self.below())
            )
        }
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Arc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_pair = |body: &str| -> Result<(u8, u8)> {
            let mut parts = body.split(',');
            let i = parts
                .next()
                .and_then(|t| t.trim().parse().ok())
                .ok_or_else(|| Error::parse(0, "expected left endpoint"))?;
            let j = parts
                .next()
                .and_then(|t| t.trim().parse().ok())
                .ok_or_else(|| Error::parse(0, "expected right endpoint"))?;
            if parts.next().is_some() {
                return Err(Error::parse(0, "too many endpoints"));
            }
            if i == 0 || i >= j {
                return Err(Error::parse(0, format!("endpoints must satisfy i < j, got ({i},{j})")));
            }
            Ok((i, j))
        };
        if let Some(body) = s.strip_prefix("u(").and_then(|t| t.strip_suffix(')')) {
            let (i, j) = parse_pair(body)?;
            Arc::new(i, j, interval_mask(i, j))
        } else if let Some(body) = s.strip_prefix("d(").and_then(|t| t.strip_suffix(')')) {
            let (i, j) = parse_pair(body)?;
            Arc::new(i, j, 0)
        } else if let Some(body) = s.strip_prefix("arc(").and_then(|t| t.strip_suffix(')')) {
            let sections: Vec<&str> = body.split(';').collect();
            if sections.len() != 3 {
                return Err(Error::parse(0, "expected arc(i,j;A=..;B=..)"));
            }
            let (i, j) = parse_pair(sections[0])?;
            let parse_set = |sec: &str, tag: &str| -> Result<ValSet> {
                let body = sec
                    .trim()
                    .strip_prefix(tag)
                    .ok_or_else(|| Error::parse(0, format!("expected `{tag}` section")))?;
                let mut mask = 0;
                for part in body.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    let v: u8 = part
                        .parse()
                        .map_err(|_| Error::parse(0, format!("invalid value `{part}`")))?;
                    mask |= 1 << (v - 1);
                }
                Ok(mask)
            };
            let above = parse_set(sections[1], "A=")?;
            let below = parse_set(sections[2], "B=")?;
            let arc = Arc::new(i, j, above)?;
            if arc.below() != below {
                return Err(Error::parse(0, "A and B do not partition the interior"));
            }
            Ok(arc)
        } else {
            Err(Error::parse(0, format!("unrecognized arc syntax `{s}`")))
        }
    }
}
