//! Noncrossing arc diagrams and the bijections with permutations.
//!
//! A permutation maps to a diagram by attaching an arc to each ascent (up
//! map) or each descent (down map). The inverse is computed through canonical
//! join/meet representations: each single arc corresponds to a permutation
//! with a single descent (resp. ascent), and the diagram is their join
//! (resp. meet) in the weak order.

use crate::arc::{interval_mask, mask_values, Arc, ValSet};
use crate::error::{Error, Result};
use crate::perm::{Direction, Permutation};
use std::collections::BTreeSet;
use std::fmt;

/// A set of pairwise noncrossing arcs with distinct left endpoints and
/// distinct right endpoints.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ArcDiagram {
    n: usize,
    arcs: BTreeSet<Arc>,
}

impl ArcDiagram {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        let arcs: BTreeSet<Arc> = arcs.into_iter().collect();
        let list: Vec<&Arc> = arcs.iter().collect();
        for (idx, a) in list.iter().enumerate() {
            if a.right() as usize > n {
                return Err(Error::InvalidDiagram(format!("arc {a} exceeds [{n}]")));
            }
            for b in &list[idx + 1..] {
                if a.left() == b.left() || a.right() == b.right() {
                    return Err(Error::InvalidDiagram(format!(
                        "arcs {a} and {b} share an endpoint on the same side"
                    )));
                }
                if a.crosses(b) {
                    return Err(Error::InvalidDiagram(format!("arcs {a} and {b} cross")));
                }
            }
        }
        Ok(ArcDiagram { n, arcs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> impl Iterator<Item = &Arc> {
        self.arcs.iter()
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }
}

impl fmt::Display for ArcDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.arcs.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// The arc attached to an increasing pair of positions `p < q` in the table
/// of `s`: endpoints are the values, the above set collects values inside the
/// span appearing before `p`, the below set those appearing after `q`.
pub fn alpha_up(p: usize, q: usize, s: &Permutation) -> Arc {
    let (lo, hi) = (s.at(p), s.at(q));
    debug_assert!(lo < hi);
    arc_from_context(p, q, lo, hi, s)
}

/// Symmetric map for a decreasing pair of positions `p < q`.
pub fn alpha_down(p: usize, q: usize, s: &Permutation) -> Arc {
    let (hi, lo) = (s.at(p), s.at(q));
    debug_assert!(lo < hi);
    arc_from_context(p, q, lo, hi, s)
}

fn arc_from_context(p: usize, q: usize, lo: u8, hi: u8, s: &Permutation) -> Arc {
    let span = interval_mask(lo, hi);
    debug_assert!(
        (p + 1..q).all(|k| span & (1 << (s.at(k) - 1)) == 0),
        "no value of the span may sit between the two positions"
    );
    let mut above: ValSet = 0;
    for k in 1..p {
        let v = s.at(k);
        if span & (1 << (v - 1)) != 0 {
            above |= 1 << (v - 1);
        }
    }
    Arc::new(lo, hi, above).expect("arc from permutation context is valid")
}

/// The noncrossing arc diagram of `s`: one arc per ascent (up) or per descent
/// (down).
pub fn delta(s: &Permutation, direction: Direction) -> ArcDiagram {
    let arcs: Vec<Arc> = match direction {
        Direction::Up => s.ascents().iter().map(|&p| alpha_up(p, p + 1, s)).collect(),
        Direction::Down => s
            .descents()
            .iter()
            .map(|&p| alpha_down(p, p + 1, s))
            .collect(),
    };
    ArcDiagram::new(s.n(), arcs).expect("delta always yields a valid diagram")
}

/// The permutation with a single descent whose down diagram is `{arc}`.
pub fn single_descent_permutation(n: usize, arc: &Arc) -> Permutation {
    let (i, j) = (arc.left(), arc.right());
    let mut prefix: Vec<u8> = (1..i).collect();
    prefix.extend(mask_values(arc.above()));
    prefix.push(j);
    prefix.sort_unstable();
    let mut suffix: Vec<u8> = vec![i];
    suffix.extend(mask_values(arc.below()));
    suffix.extend(j + 1..=n as u8);
    suffix.sort_unstable();
    prefix.extend(suffix);
    Permutation::new(prefix).expect("single-descent word is a permutation")
}

/// The permutation with a single ascent whose up diagram is `{arc}`.
pub fn single_ascent_permutation(n: usize, arc: &Arc) -> Permutation {
    let (i, j) = (arc.left(), arc.right());
    let mut prefix: Vec<u8> = (j + 1..=n as u8).collect();
    prefix.extend(mask_values(arc.above()));
    prefix.push(i);
    prefix.sort_unstable_by(|a, b| b.cmp(a));
    let mut suffix: Vec<u8> = vec![j];
    suffix.extend(mask_values(arc.below()));
    suffix.extend(1..i);
    suffix.sort_unstable_by(|a, b| b.cmp(a));
    prefix.extend(suffix);
    Permutation::new(prefix).expect("single-ascent word is a permutation")
}

/// The unique permutation whose diagram under `delta(_, direction)` is `d`.
///
/// Computed as the join of the single-descent permutations of the arcs (down)
/// or the meet of the single-ascent ones (up), then checked by a forward
/// round trip; fails with [`Error::NoPreimage`] if the diagram is not in the
/// image of the bijection.
pub fn diagram_to_permutation(d: &ArcDiagram, direction: Direction) -> Result<Permutation> {
    let n = d.n();
    let candidate = match direction {
        Direction::Down => d
            .arcs()
            .map(|a| single_descent_permutation(n, a))
            .fold(Permutation::identity(n), |acc, p| acc.weak_join(&p)),
        Direction::Up => d
            .arcs()
            .map(|a| single_ascent_permutation(n, a))
            .fold(Permutation::identity(n).reverse(), |acc, p| acc.weak_meet(&p)),
    };
    if &delta(&candidate, direction) == d {
        Ok(candidate)
    } else {
        Err(Error::NoPreimage)
    }
}
