//! Arc ideals: downward-closed arc sets encoding lattice congruences of the
//! weak order.
//!
//! The congruence lattice operations are pointwise on the allowed sets
//! (meet = intersection, join = union). A congruence is essential when all
//! basic arcs are allowed, and simple when its subarc-minimal missing arcs
//! are all up arcs or down arcs.

use crate::arc::{all_arcs, Arc};
use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

/// A downward-closed set of arcs on `[n]` under the subarc order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcIdeal {
    n: usize,
    allowed: BTreeSet<Arc>,
}

impl ArcIdeal {
    /// Wraps an arc set that is already known to be downward closed;
    /// validates the closure property.
    pub fn new(n: usize, allowed: BTreeSet<Arc>) -> Result<Self> {
        let ideal = ArcIdeal { n, allowed };
        if let Some(witness) = ideal.closure_violation() {
            return Err(Error::InvalidArc(format!(
                "not downward closed: {} is missing below {}",
                witness.0, witness.1
            )));
        }
        Ok(ideal)
    }

    fn closure_violation(&self) -> Option<(Arc, Arc)> {
        for a in all_arcs(self.n) {
            if !self.allowed.contains(&a) {
                continue;
            }
            for b in all_arcs(self.n) {
                if b.is_subarc(&a) && !self.allowed.contains(&b) {
                    return Some((b, a));
                }
            }
        }
        None
    }

    /// The smallest ideal containing `generators`: downward closure under the
    /// subarc order.
    pub fn from_allowed(n: usize, generators: impl IntoIterator<Item = Arc>) -> Self {
        let gens: Vec<Arc> = generators.into_iter().collect();
        let allowed = all_arcs(n)
            .into_iter()
            .filter(|a| gens.iter().any(|g| a.is_subarc(g)))
            .collect();
        ArcIdeal { n, allowed }
    }

    /// The largest ideal avoiding `forbidden`: the complement of the upward
    /// closure of the generators.
    pub fn from_forbidden(n: usize, forbidden: impl IntoIterator<Item = Arc>) -> Self {
        let gens: Vec<Arc> = forbidden.into_iter().collect();
        let allowed = all_arcs(n)
            .into_iter()
            .filter(|a| !gens.iter().any(|g| g.is_subarc(a)))
            .collect();
        ArcIdeal { n, allowed }
    }

    pub fn trivial(n: usize) -> Self {
        ArcIdeal {
            n,
            allowed: all_arcs(n).into_iter().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, arc: &Arc) -> bool {
        self.allowed.contains(arc)
    }

    /// Allowed arcs in canonical order.
    pub fn arcs(&self) -> impl Iterator<Item = &Arc> {
        self.allowed.iter()
    }

    pub fn len(&self) -> usize {
        self.allowed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.is_empty()
    }

    pub fn is_subideal_of(&self, other: &ArcIdeal) -> bool {
        self.allowed.is_subset(&other.allowed)
    }

    pub fn meet(&self, other: &ArcIdeal) -> Result<ArcIdeal> {
        self.check_size(other)?;
        Ok(ArcIdeal {
            n: self.n,
            allowed: self.allowed.intersection(&other.allowed).cloned().collect(),
        })
    }

    pub fn join(&self, other: &ArcIdeal) -> Result<ArcIdeal> {
        self.check_size(other)?;
        Ok(ArcIdeal {
            n: self.n,
            allowed: self.allowed.union(&other.allowed).cloned().collect(),
        })
    }

    fn check_size(&self, other: &ArcIdeal) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    /// The subarc-minimal arcs of the complement, in canonical order.
    pub fn minimal_non_arcs(&self) -> Vec<Arc> {
        let missing: Vec<Arc> = all_arcs(self.n)
            .into_iter()
            .filter(|a| !self.allowed.contains(a))
            .collect();
        missing
            .iter()
            .filter(|a| !missing.iter().any(|b| b != *a && b.is_subarc(a)))
            .cloned()
            .collect()
    }

    /// A congruence is simple when every minimal missing arc is an up arc or
    /// a down arc.
    pub fn is_simple(&self) -> bool {
        self.minimal_non_arcs()
            .iter()
            .all(|a| a.is_up() || a.is_down())
    }

    /// A congruence is essential when all basic arcs are allowed.
    pub fn is_essential(&self) -> bool {
        (1..self.n as u8).all(|i| self.allowed.contains(&Arc::basic(i)))
    }

    pub fn require_essential(&self) -> Result<()> {
        if self.is_essential() {
            Ok(())
        } else {
            Err(Error::NotEssential)
        }
    }

    pub fn require_simple(&self) -> Result<()> {
        if self.is_simple() {
            Ok(())
        } else {
            Err(Error::NotSimple)
        }
    }
}

impl fmt::Display for ArcIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.allowed.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

impl fmt::Debug for ArcIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArcIdeal(n={}, {})", self.n, self)
    }
}

/// Cap guarding the exhaustive enumerations below.
pub const ENUMERATION_CAP: usize = 8;

/// All pairwise-nonnesting collections of intervals `[i,j] <= [1,n]` with
/// `j - i >= 2`, each given by its interval list sorted by left endpoint.
///
/// These are exactly the possible sets of minimal forbidden up (or down) arcs
/// of an essential simple congruence; there are `Catalan(n-1)` of them.
fn nonnesting_interval_sets(n: usize) -> Vec<Vec<(u8, u8)>> {
    // intervals sorted by left endpoint; nonnesting forces right endpoints
    // increasing as well
    let mut out = vec![vec![]];
    fn extend(n: usize, current: &mut Vec<(u8, u8)>, out: &mut Vec<Vec<(u8, u8)>>) {
        let (min_i, min_j) = match current.last() {
            Some(&(i, j)) => (i + 1, j + 1),
            None => (1, 1),
        };
        for i in min_i..=n as u8 {
            for j in (i + 2).max(min_j)..=n as u8 {
                current.push((i, j));
                out.push(current.clone());
                extend(n, current, out);
                current.pop();
            }
        }
    }
    extend(n, &mut Vec::new(), &mut out);
    out
}

/// All essential simple congruences on `[n]`: one per pair of nonnesting
/// interval collections (forbidden up arcs, forbidden down arcs).
pub fn enumerate_essential_simple(n: usize) -> Result<Vec<ArcIdeal>> {
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    let sets = nonnesting_interval_sets(n);
    let mut out = Vec::with_capacity(sets.len() * sets.len());
    for ups in &sets {
        for downs in &sets {
            let forbidden = ups
                .iter()
                .map(|&(i, j)| Arc::up(i, j))
                .chain(downs.iter().map(|&(i, j)| Arc::down(i, j)));
            out.push(ArcIdeal::from_forbidden(n, forbidden));
        }
    }
    out.sort();
    out
        .windows(2)
        .for_each(|w| debug_assert!(w[0] != w[1], "generator sets must be distinct"));
    Ok(out)
}

/// All simple congruences on `[n]`, essential or not.
///
/// A non-essential simple congruence is a composition of `[n]` into
/// consecutive blocks carrying independent essential simple congruences; arcs
/// spanning a block boundary are all missing.
pub fn enumerate_simple(n: usize, essential_only: bool) -> Result<Vec<ArcIdeal>> {
    if essential_only {
        return enumerate_essential_simple(n);
    }
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    let per_size: Vec<Vec<ArcIdeal>> = (0..=n)
        .map(|s| {
            if s == 0 {
                Ok(vec![])
            } else {
                enumerate_essential_simple(s)
            }
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    // compositions of n as bitmasks of inner boundaries
    for boundaries in 0..(1u32 << (n.saturating_sub(1))) {
        let mut blocks = Vec::new();
        let mut start = 1u8;
        for b in 1..n as u8 {
            if boundaries & (1 << (b - 1)) != 0 {
                blocks.push((start, b));
                start = b + 1;
            }
        }
        blocks.push((start, n as u8));
        let mut partials: Vec<BTreeSet<Arc>> = vec![BTreeSet::new()];
        for &(lo, hi) in &blocks {
            let size = (hi - lo + 1) as usize;
            let mut next = Vec::new();
            for block_ideal in &per_size[size] {
                for partial in &partials {
                    let mut arcs = partial.clone();
                    arcs.extend(block_ideal.arcs().map(|a| a.shift(lo - 1)));
                    next.push(arcs);
                }
            }
            partials = next;
        }
        for allowed in partials {
            out.push(ArcIdeal { n, allowed });
        }
    }
    out.sort();
    Ok(out)
}

/// All essential arc ideals on `[n]` (every downset of the subarc poset that
/// contains the basic arcs). Exhaustive; intended for small `n`.
pub fn enumerate_essential_ideals(n: usize) -> Result<Vec<ArcIdeal>> {
    if n > 5 {
        return Err(Error::CapExceeded { n, cap: 5 });
    }
    let arcs = all_arcs(n);
    let optional: Vec<Arc> = arcs.iter().filter(|a| !a.is_basic()).cloned().collect();
    let mut out = Vec::new();
    for mask in 0..(1u64 << optional.len()) {
        let mut allowed: BTreeSet<Arc> = (1..n as u8).map(Arc::basic).collect();
        for (k, a) in optional.iter().enumerate() {
            if mask & (1 << k) != 0 {
                allowed.insert(*a);
            }
        }
        let candidate = ArcIdeal { n, allowed };
        if candidate.closure_violation().is_none() {
            out.push(candidate);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn a(s: &str) -> Arc {
        s.parse().unwrap()
    }

    #[test]
    fn from_allowed_examples() {
        assert!(ArcIdeal::from_allowed(1, []).is_empty());
        let gen = ArcIdeal::from_allowed(3, [Arc::up(1, 3)]);
        let expected: BTreeSet<Arc> = [Arc::up(1, 3), Arc::basic(1), Arc::basic(2)]
            .into_iter()
            .collect();
        assert_eq!(gen.arcs().cloned().collect::<BTreeSet<_>>(), expected);
        // generated by the basic arcs: the recoil ideal
        let basic = ArcIdeal::from_allowed(4, (1..4).map(Arc::basic));
        assert_eq!(basic, catalog::recoil(4));
    }

    #[test]
    fn from_forbidden_examples() {
        assert_eq!(ArcIdeal::from_forbidden(4, []), ArcIdeal::trivial(4));
        assert!(ArcIdeal::from_forbidden(3, (1..3).map(Arc::basic)).is_empty());
        // forbidding the minimal down arcs keeps every up arc
        let ideal = ArcIdeal::from_forbidden(4, [Arc::down(1, 3), Arc::down(2, 4)]);
        for arc in all_arcs(4) {
            if arc.is_up() {
                assert!(ideal.contains(&arc), "up arc {arc} should remain");
            }
        }
    }

    #[test]
    fn meet_join_examples() {
        let sylv = catalog::sylvester(4);
        let anti = catalog::antisylvester(4);
        assert_eq!(sylv.join(&anti).unwrap(), catalog::baxter(4));
        assert_eq!(sylv.meet(&sylv).unwrap(), sylv);
        let sylv3 = catalog::sylvester(3);
        let anti3 = catalog::antisylvester(3);
        assert_eq!(sylv3.meet(&anti3).unwrap(), catalog::recoil(3));
        assert!(sylv.meet(&sylv3).is_err());
    }

    #[test]
    fn minimal_non_arcs_examples() {
        assert!(ArcIdeal::trivial(4).minimal_non_arcs().is_empty());
        assert_eq!(
            catalog::sylvester(3).minimal_non_arcs(),
            vec![Arc::down(1, 3)]
        );
        // minimal missing arcs of the baxter ideal cross the axis once with
        // one point on each side
        let min = catalog::baxter(5).minimal_non_arcs();
        assert_eq!(min.len(), 4);
        for arc in &min {
            assert_eq!(arc.interior_len(), 2);
            assert_eq!(arc.above().count_ones(), 1);
        }
        assert!(min.contains(&a("arc(1,4;A=2;B=3)")));
    }

    #[test]
    fn simplicity_examples() {
        assert!(catalog::sylvester(5).is_simple());
        assert!(!catalog::baxter(4).is_simple());
        assert!(ArcIdeal::trivial(4).is_simple());
        assert!(catalog::baxter(3).is_simple());
    }

    #[test]
    fn essential_examples() {
        assert!(catalog::recoil(4).is_essential());
        assert!(!ArcIdeal::from_allowed(2, []).is_essential());
        assert!(catalog::sylvester(4).is_essential());
    }

    #[test]
    fn enumerate_essential_simple_counts() {
        // Catalan(n-1)^2
        for (n, expected) in [(1, 1), (2, 1), (3, 4), (4, 25), (5, 196)] {
            let ideals = enumerate_essential_simple(n).unwrap();
            assert_eq!(ideals.len(), expected, "n = {n}");
            for ideal in &ideals {
                assert!(ideal.is_essential());
                assert!(ideal.is_simple());
            }
        }
        let ideals = enumerate_essential_simple(3).unwrap();
        let named = [
            ArcIdeal::trivial(3),
            catalog::sylvester(3),
            catalog::antisylvester(3),
            catalog::recoil(3),
        ];
        for ideal in &named {
            assert!(ideals.contains(ideal));
        }
    }

    #[test]
    fn enumerate_simple_counts() {
        for (n, expected) in [(1, 1), (2, 2), (3, 7), (4, 38), (5, 274)] {
            let ideals = enumerate_simple(n, false).unwrap();
            assert_eq!(ideals.len(), expected, "n = {n}");
            for ideal in &ideals {
                assert!(ideal.is_simple());
            }
        }
    }

    #[test]
    fn enumerate_essential_ideals_closed() {
        let ideals = enumerate_essential_ideals(4).unwrap();
        assert!(ideals.len() > 25);
        for ideal in &ideals {
            assert!(ideal.is_essential());
            assert!(ideal.closure_violation().is_none());
        }
    }
}
