//! Insertion of permutations into congruence posets, congruence classes, and
//! the quotient lattice.
//!
//! For an essential congruence given by its arc ideal, each permutation maps
//! to a poset on the values of `[n]` whose linear extensions form its
//! congruence class. Classes are weak order intervals; contracting them
//! yields the Hasse diagram of the lattice quotient.

use crate::arc::{interval_mask, Arc};
use crate::diagram::{alpha_down, alpha_up};
use crate::error::{Error, Result};
use crate::ideal::ArcIdeal;
use crate::perm::{all_permutations, Direction, Permutation};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// Default size cap for the brute-force operations over all of `S_n`.
pub const DEFAULT_CAP: usize = 8;

/// Hasse diagram of a poset on the values `1..=n`. Edges are cover relations
/// `u -> v` meaning `u` precedes `v`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosetDiagram {
    n: usize,
    edges: BTreeSet<(u8, u8)>,
}

impl PosetDiagram {
    /// Validates acyclicity and that the edge set is its own transitive
    /// reduction.
    pub fn new(n: usize, edges: BTreeSet<(u8, u8)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u == 0 || v == 0 || u as usize > n || v as usize > n || u == v {
                return Err(Error::InvalidDiagram(format!(
                    "edge {u}>{v} out of range for [{n}]"
                )));
            }
        }
        let d = PosetDiagram { n, edges };
        if d.topological_order().is_none() {
            return Err(Error::InvalidDiagram("diagram has a cycle".into()));
        }
        for &(u, v) in &d.edges {
            if d.reachable_avoiding(u, v) {
                return Err(Error::InvalidDiagram(format!(
                    "edge {u}>{v} is implied by transitivity"
                )));
            }
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(u8, u8)> {
        &self.edges
    }

    fn successors(&self, u: u8) -> impl Iterator<Item = u8> + '_ {
        self.edges
            .range((u, 0)..(u + 1, 0))
            .map(|&(_, v)| v)
    }

    /// `true` iff `target` is reachable from `u` by a path of length >= 2
    /// (the direct edge `u -> target` is skipped).
    fn reachable_avoiding(&self, u: u8, target: u8) -> bool {
        let mut stack: Vec<u8> = self
            .successors(u)
            .filter(|&v| v != target)
            .collect();
        let mut seen = vec![false; self.n + 1];
        while let Some(v) = stack.pop() {
            if v == target {
                return true;
            }
            if seen[v as usize] {
                continue;
            }
            seen[v as usize] = true;
            stack.extend(self.successors(v));
        }
        false
    }

    fn topological_order(&self) -> Option<Vec<u8>> {
        let mut indeg = vec![0usize; self.n + 1];
        for &(_, v) in &self.edges {
            indeg[v as usize] += 1;
        }
        let mut ready: Vec<u8> = (1..=self.n as u8).filter(|&v| indeg[v as usize] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for w in self.successors(v) {
                indeg[w as usize] -= 1;
                if indeg[w as usize] == 0 {
                    ready.push(w);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    /// `true` iff the underlying undirected graph is a tree (or forest with
    /// one component).
    pub fn is_tree(&self) -> bool {
        if self.edges.len() + 1 != self.n {
            return false;
        }
        // acyclic directed + n-1 edges: connected iff undirected-connected
        let mut adj: Vec<Vec<u8>> = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![1u8];
        let mut count = 0;
        while let Some(v) = stack.pop() {
            if seen[v as usize] {
                continue;
            }
            seen[v as usize] = true;
            count += 1;
            stack.extend(&adj[v as usize]);
        }
        count == self.n
    }

    /// All linear extensions, as permutations whose word lists the values in
    /// a compatible order. Sorted.
    pub fn linear_extensions(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut indeg = vec![0usize; self.n + 1];
        for &(_, v) in &self.edges {
            indeg[v as usize] += 1;
        }
        let mut word = Vec::with_capacity(self.n);
        self.extend_rec(&mut indeg, &mut word, &mut out);
        out.sort();
        out
    }

    fn extend_rec(&self, indeg: &mut Vec<usize>, word: &mut Vec<u8>, out: &mut Vec<Permutation>) {
        if word.len() == self.n {
            out.push(Permutation::new(word.clone()).unwrap());
            return;
        }
        for v in 1..=self.n as u8 {
            if indeg[v as usize] == 0 && !word.contains(&v) {
                word.push(v);
                for w in self.successors(v).collect::<Vec<_>>() {
                    indeg[w as usize] -= 1;
                }
                self.extend_rec(indeg, word, out);
                for w in self.successors(v).collect::<Vec<_>>() {
                    indeg[w as usize] += 1;
                }
                word.pop();
            }
        }
    }
}

impl fmt::Display for PosetDiagram {
    /// `n;u1>v1,u2>v2,...` with edges in sorted order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.n)?;
        let parts: Vec<String> = self.edges.iter().map(|(u, v)| format!("{u}>{v}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for PosetDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PosetDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = s
            .trim()
            .split_once(';')
            .ok_or_else(|| Error::parse(0, "expected `n;edges`"))?;
        let n: usize = head
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("invalid size `{head}`")))?;
        let mut edges = BTreeSet::new();
        for (k, part) in tail.split(',').enumerate() {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (u, v) = part
                .split_once('>')
                .ok_or_else(|| Error::parse(k, format!("expected `u>v`, got `{part}`")))?;
            let u: u8 = u
                .trim()
                .parse()
                .map_err(|_| Error::parse(k, format!("invalid value `{u}`")))?;
            let v: u8 = v
                .trim()
                .parse()
                .map_err(|_| Error::parse(k, format!("invalid value `{v}`")))?;
            edges.insert((u, v));
        }
        PosetDiagram::new(n, edges)
    }
}

/// `true` iff the open rectangle between table points `(i, s_i)` and
/// `(j, s_j)` is empty.
fn rectangle_empty(s: &Permutation, i: usize, j: usize) -> bool {
    let (a, b) = (s.at(i), s.at(j));
    let span = interval_mask(a.min(b), a.max(b));
    (i + 1..j).all(|k| span & (1 << (s.at(k) - 1)) == 0)
}

/// The slope-`up` pairs of `s`: positions `i < j` with `s_i < s_j` (resp.
/// `s_i > s_j` for down) whose rectangle contains no other point, together
/// with their arcs.
pub fn box_pairs(s: &Permutation, slope: Direction) -> Vec<((usize, usize), Arc)> {
    let n = s.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let increasing = s.at(i) < s.at(j);
            let wanted = match slope {
                Direction::Up => increasing,
                Direction::Down => !increasing,
            };
            if wanted && rectangle_empty(s, i, j) {
                let arc = match slope {
                    Direction::Up => alpha_up(i, j, s),
                    Direction::Down => alpha_down(i, j, s),
                };
                out.push(((i, j), arc));
            }
        }
    }
    out
}

/// `(i, j)` is dominated by `(k, l)` when the latter's positions nest inside
/// and its values extend beyond. For the down slope the value comparisons
/// flip along with the slope.
fn dominates(s: &Permutation, slope: Direction, ij: (usize, usize), kl: (usize, usize)) -> bool {
    let (i, j) = ij;
    let (k, l) = kl;
    if ij == kl || !(i <= k && k < l && l <= j) {
        return false;
    }
    match slope {
        Direction::Up => s.at(k) <= s.at(i) && s.at(i) < s.at(j) && s.at(j) <= s.at(l),
        Direction::Down => s.at(k) >= s.at(i) && s.at(i) > s.at(j) && s.at(j) >= s.at(l),
    }
}

/// The maximal pairs among the box pairs whose arc the ideal allows.
pub fn restricted_maxima(s: &Permutation, a: &ArcIdeal, slope: Direction) -> Vec<(usize, usize)> {
    let admitted: Vec<(usize, usize)> = box_pairs(s, slope)
        .into_iter()
        .filter(|(_, arc)| a.contains(arc))
        .map(|(p, _)| p)
        .collect();
    admitted
        .iter()
        .filter(|&&p| !admitted.iter().any(|&q| dominates(s, slope, p, q)))
        .cloned()
        .collect()
}

/// The congruence poset of `s`: cover relations `s_i -> s_j` over the
/// restricted maxima of both slopes. `s` is a linear extension of the result.
pub fn eq_poset(s: &Permutation, a: &ArcIdeal) -> Result<PosetDiagram> {
    a.require_essential()?;
    let mut edges = BTreeSet::new();
    for slope in [Direction::Up, Direction::Down] {
        for (i, j) in restricted_maxima(s, a, slope) {
            edges.insert((s.at(i), s.at(j)));
        }
    }
    PosetDiagram::new(s.n(), edges)
}

/// One congruence class: the fiber of `eq_poset` over a common poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceClass {
    pub poset: PosetDiagram,
    pub members: Vec<Permutation>,
    pub bottom: Permutation,
    pub top: Permutation,
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// All congruence classes of `S_n`, ordered by bottom permutation.
pub fn classes(n: usize, a: &ArcIdeal) -> Result<Vec<CongruenceClass>> {
    classes_with_cap(n, a, DEFAULT_CAP)
}

pub fn classes_with_cap(n: usize, a: &ArcIdeal, cap: usize) -> Result<Vec<CongruenceClass>> {
    a.require_essential()?;
    check_cap(n, cap)?;
    let keyed: Vec<(String, Permutation, PosetDiagram)> = all_permutations(n)
        .into_par_iter()
        .map(|s| {
            let poset = eq_poset(&s, a).expect("ideal already checked essential");
            (poset.to_string(), s, poset)
        })
        .collect();
    let mut groups: BTreeMap<String, (PosetDiagram, Vec<Permutation>)> = BTreeMap::new();
    for (key, s, poset) in keyed {
        groups.entry(key).or_insert_with(|| (poset, Vec::new())).1.push(s);
    }
    let mut out: Vec<CongruenceClass> = groups
        .into_values()
        .map(|(poset, mut members)| {
            members.sort();
            let bottom = members
                .iter()
                .min_by_key(|s| s.inversion_count())
                .unwrap()
                .clone();
            let top = members
                .iter()
                .max_by_key(|s| s.inversion_count())
                .unwrap()
                .clone();
            CongruenceClass {
                poset,
                members,
                bottom,
                top,
            }
        })
        .collect();
    out.sort_by(|x, y| x.bottom.cmp(&y.bottom));
    Ok(out)
}

/// Independent oracle for the class partition: contract each weak order
/// cover whose exchanged ascent yields an arc outside the ideal, and take
/// connected components.
pub fn classes_by_contraction(n: usize, a: &ArcIdeal) -> Result<Vec<Vec<Permutation>>> {
    a.require_essential()?;
    check_cap(n, DEFAULT_CAP)?;
    let perms = all_permutations(n);
    let index: BTreeMap<&Permutation, usize> =
        perms.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let mut parent: Vec<usize> = (0..perms.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for (k, s) in perms.iter().enumerate() {
        for p in s.ascents() {
            if !a.contains(&alpha_up(p, p + 1, s)) {
                let other = index[&s.swap_positions(p)];
                let (ra, rb) = (find(&mut parent, k), find(&mut parent, other));
                parent[ra] = rb;
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<Permutation>> = BTreeMap::new();
    for (k, s) in perms.iter().enumerate() {
        blocks
            .entry(find(&mut parent, k))
            .or_default()
            .push(s.clone());
    }
    let mut out: Vec<Vec<Permutation>> = blocks.into_values().collect();
    for block in &mut out {
        block.sort();
    }
    out.sort();
    Ok(out)
}

/// The quotient lattice Hasse diagram: one node per class, one edge per pair
/// of classes joined by a weak order cover.
#[derive(Debug, Clone)]
pub struct QuotientGraph {
    pub classes: Vec<CongruenceClass>,
    /// Directed edges between class indices, deduplicated.
    pub edges: BTreeSet<(usize, usize)>,
}

pub fn quotient_hasse(n: usize, a: &ArcIdeal) -> Result<QuotientGraph> {
    quotient_hasse_with_cap(n, a, DEFAULT_CAP)
}

pub fn quotient_hasse_with_cap(n: usize, a: &ArcIdeal, cap: usize) -> Result<QuotientGraph> {
    let classes = classes_with_cap(n, a, cap)?;
    let mut class_of: BTreeMap<&Permutation, usize> = BTreeMap::new();
    for (k, class) in classes.iter().enumerate() {
        for s in &class.members {
            class_of.insert(s, k);
        }
    }
    let mut edges = BTreeSet::new();
    for (k, class) in classes.iter().enumerate() {
        for s in &class.members {
            for t in s.weak_covers(Direction::Up) {
                let other = class_of[&t];
                if other != k {
                    edges.insert((k, other));
                }
            }
        }
    }
    Ok(QuotientGraph { classes, edges })
}

/// `true` iff every node of the quotient Hasse diagram has total degree
/// `n - 1`.
pub fn is_hasse_regular(n: usize, a: &ArcIdeal) -> Result<bool> {
    let graph = quotient_hasse(n, a)?;
    let mut degree = vec![0usize; graph.classes.len()];
    for &(u, v) in &graph.edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    Ok(degree.iter().all(|&d| d == n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::diagram::delta;
    use crate::ideal::enumerate_essential_ideals;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn poset_diagram_validation() {
        assert!("3;2>3,3>1".parse::<PosetDiagram>().is_ok());
        assert!("3;1>2,2>1".parse::<PosetDiagram>().is_err());
        // transitive edge rejected
        assert!("3;1>2,2>3,1>3".parse::<PosetDiagram>().is_err());
        let d: PosetDiagram = "4;1>2".parse().unwrap();
        assert_eq!(d.to_string(), "4;1>2");
        assert_eq!(d.linear_extensions().len(), 12);
    }

    #[test]
    fn box_pairs_identity() {
        let pairs = box_pairs(&Permutation::identity(3), Direction::Up);
        let positions: Vec<_> = pairs.iter().map(|(p, _)| *p).collect();
        // (1,3) is excluded: 2 sits in the rectangle
        assert_eq!(positions, vec![(1, 2), (2, 3)]);
        assert_eq!(pairs[0].1, Arc::basic(1));
        assert!(box_pairs(&p("4321"), Direction::Up).is_empty());
    }

    #[test]
    fn box_pairs_231_down() {
        let pairs = box_pairs(&p("231"), Direction::Down);
        let expected = vec![
            ((1, 3), "d(1,2)".parse().unwrap()),
            ((2, 3), "u(1,3)".parse().unwrap()),
        ];
        assert_eq!(pairs, expected);
    }

    #[test]
    fn restricted_maxima_trivial_is_adjacent() {
        for n in 1..=5 {
            let trivial = catalog::trivial(n);
            for s in all_permutations(n) {
                for slope in [Direction::Up, Direction::Down] {
                    let maxima = restricted_maxima(&s, &trivial, slope);
                    let expected: Vec<(usize, usize)> = match slope {
                        Direction::Up => s.ascents(),
                        Direction::Down => s.descents(),
                    }
                    .into_iter()
                    .map(|p| (p, p + 1))
                    .collect();
                    assert_eq!(maxima, expected, "{s} {slope:?}");
                }
            }
        }
    }

    #[test]
    fn eq_poset_trivial_is_chain() {
        let s = p("2413");
        let poset = eq_poset(&s, &catalog::trivial(4)).unwrap();
        assert_eq!(poset.to_string(), "4;1>3,2>4,4>1");
        assert_eq!(poset.linear_extensions(), vec![s]);
    }

    #[test]
    fn eq_poset_rejects_non_essential() {
        let empty = crate::ideal::ArcIdeal::from_allowed(3, []);
        assert!(matches!(
            eq_poset(&p("123"), &empty),
            Err(Error::NotEssential)
        ));
    }

    /// Right-to-left binary search tree insertion; edges child -> parent.
    fn bst_edges(s: &Permutation) -> BTreeSet<(u8, u8)> {
        let mut root: Option<u8> = None;
        let mut left: BTreeMap<u8, u8> = BTreeMap::new();
        let mut right: BTreeMap<u8, u8> = BTreeMap::new();
        let mut edges = BTreeSet::new();
        for &v in s.word().iter().rev() {
            match root {
                None => root = Some(v),
                Some(r) => {
                    let mut at = r;
                    loop {
                        let branch = if v < at { &mut left } else { &mut right };
                        match branch.get(&at) {
                            Some(&next) => at = next,
                            None => {
                                branch.insert(at, v);
                                edges.insert((v, at));
                                break;
                            }
                        }
                    }
                }
            }
        }
        edges
    }

    #[test]
    fn eq_poset_sylvester_is_bst() {
        for n in 1..=6 {
            let sylv = catalog::sylvester(n);
            for s in all_permutations(n) {
                let poset = eq_poset(&s, &sylv).unwrap();
                assert_eq!(poset.edges(), &bst_edges(&s), "{s}");
            }
        }
    }

    #[test]
    fn class_counts() {
        assert_eq!(classes(4, &catalog::trivial(4)).unwrap().len(), 24);
        assert_eq!(classes(4, &catalog::sylvester(4)).unwrap().len(), 14);
        assert_eq!(classes(4, &catalog::recoil(4)).unwrap().len(), 8);
        assert_eq!(classes_by_contraction(5, &catalog::recoil(5)).unwrap().len(), 16);
    }

    #[test]
    fn classes_match_contraction_oracle() {
        for n in 1..=4 {
            for ideal in enumerate_essential_ideals(n).unwrap() {
                let by_poset: Vec<Vec<Permutation>> = {
                    let mut blocks: Vec<Vec<Permutation>> = classes(n, &ideal)
                        .unwrap()
                        .into_iter()
                        .map(|c| c.members)
                        .collect();
                    blocks.sort();
                    blocks
                };
                assert_eq!(
                    by_poset,
                    classes_by_contraction(n, &ideal).unwrap(),
                    "n={n} ideal={ideal}"
                );
            }
        }
    }

    #[test]
    fn class_structure() {
        for ideal in [catalog::sylvester(4), catalog::baxter(4), catalog::genrect(4)] {
            for class in classes(4, &ideal).unwrap() {
                assert_eq!(class.members, class.poset.linear_extensions());
                // members form the weak order interval [bottom, top]
                for s in all_permutations(4) {
                    let inside = class.bottom.weak_le(&s) && s.weak_le(&class.top);
                    assert_eq!(inside, class.members.contains(&s), "{s}");
                }
            }
        }
    }

    #[test]
    fn delta_compatibility() {
        // the down diagram of the bottom uses exactly the allowed down-slope
        // arcs of every member, and dually for the top
        let ideal = catalog::sylvester(4);
        for class in classes(4, &ideal).unwrap() {
            for s in &class.members {
                let down_arcs: BTreeSet<Arc> = restricted_maxima(s, &ideal, Direction::Down)
                    .into_iter()
                    .map(|(i, j)| alpha_down(i, j, s))
                    .collect();
                let bottom_arcs: BTreeSet<Arc> = delta(&class.bottom, Direction::Down)
                    .arcs()
                    .cloned()
                    .collect();
                assert_eq!(down_arcs, bottom_arcs);
                let up_arcs: BTreeSet<Arc> = restricted_maxima(s, &ideal, Direction::Up)
                    .into_iter()
                    .map(|(i, j)| alpha_up(i, j, s))
                    .collect();
                let top_arcs: BTreeSet<Arc> =
                    delta(&class.top, Direction::Up).arcs().cloned().collect();
                assert_eq!(up_arcs, top_arcs);
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let tamari = quotient_hasse(4, &catalog::sylvester(4)).unwrap();
        assert_eq!(tamari.classes.len(), 14);
        assert_eq!(tamari.edges.len(), 21);
        let hexagon = quotient_hasse(3, &catalog::trivial(3)).unwrap();
        assert_eq!((hexagon.classes.len(), hexagon.edges.len()), (6, 6));
        let boolean = quotient_hasse(3, &catalog::recoil(3)).unwrap();
        assert_eq!((boolean.classes.len(), boolean.edges.len()), (4, 4));
    }

    #[test]
    fn regularity_examples() {
        assert!(is_hasse_regular(4, &catalog::sylvester(4)).unwrap());
        assert!(!is_hasse_regular(4, &catalog::baxter(4)).unwrap());
        assert!(is_hasse_regular(3, &catalog::trivial(3)).unwrap());
    }

    #[test]
    fn minimal_representatives_use_allowed_arcs() {
        // class bottoms are exactly the permutations whose down diagram only
        // uses allowed arcs
        let ideal = catalog::genrect(4);
        let bottoms: BTreeSet<Permutation> = classes(4, &ideal)
            .unwrap()
            .into_iter()
            .map(|c| c.bottom)
            .collect();
        for s in all_permutations(4) {
            let all_allowed = delta(&s, Direction::Down)
                .arcs()
                .all(|arc| ideal.contains(arc));
            assert_eq!(all_allowed, bottoms.contains(&s), "{s}");
        }
    }
}
