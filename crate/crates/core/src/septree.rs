//! Separating trees: the Hasse diagrams of congruence posets of simple
//! essential congruences.
//!
//! A separating tree is a directed tree on `[n]` where every node has at most
//! two parents and two children, and any branching node splits the two
//! attached subtrees by value. Each tree carries mandatory arcs (one per
//! edge) and forbidden arcs (one per branching); a congruence admits the tree
//! exactly when it allows the former and omits the latter.

use crate::arc::{all_arcs, values_mask, Arc, ValSet};
use crate::error::{Error, Result};
use crate::ideal::ArcIdeal;
use crate::insertion::PosetDiagram;
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Default cap for the exhaustive tree enumeration.
pub const TREE_CAP: usize = 9;

/// A directed tree on `[n]`; edges are `child > parent` pairs sorted by
/// `(child, parent)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeparatingTree {
    n: usize,
    edges: Vec<(u8, u8)>,
}

impl SeparatingTree {
    pub fn new(n: usize, mut edges: Vec<(u8, u8)>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        if !is_separating_tree(n, &edges) {
            return Err(Error::InvalidTree(format!(
                "not a separating tree on [{n}]"
            )));
        }
        Ok(SeparatingTree { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    /// Parents (targets of outgoing edges) of `v`.
    pub fn parents(&self, v: u8) -> Vec<u8> {
        self.edges
            .iter()
            .filter(|&&(c, _)| c == v)
            .map(|&(_, p)| p)
            .collect()
    }

    /// Children (sources of incoming edges) of `v`.
    pub fn children(&self, v: u8) -> Vec<u8> {
        self.edges
            .iter()
            .filter(|&&(_, p)| p == v)
            .map(|&(c, _)| c)
            .collect()
    }

    /// Edges `j > i` with `i < j`, the descents of the tree.
    pub fn descent_count(&self) -> usize {
        self.edges.iter().filter(|&&(c, p)| c > p).count()
    }

    /// Reachability closure following edge directions: bit `w - 1` of entry
    /// `v` is set iff there is a directed path from `v` to `w` (including
    /// `v` itself).
    pub fn reachability(&self) -> Vec<ValSet> {
        directed_closure(self.n, &self.edges)
    }

    /// The tree as a poset Hasse diagram (`u -> v` meaning `u` below `v`).
    pub fn to_poset(&self) -> PosetDiagram {
        PosetDiagram::new(self.n, self.edges.iter().cloned().collect())
            .expect("a separating tree is a Hasse diagram")
    }
}

impl fmt::Display for SeparatingTree {
    /// `n:1>2,3>2` with edges `child>parent` in sorted order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        let parts: Vec<String> = self.edges.iter().map(|(c, p)| format!("{c}>{p}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for SeparatingTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for SeparatingTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::parse(0, "expected `n:edges`"))?;
        let n: usize = head
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("invalid size `{head}`")))?;
        let mut edges = Vec::new();
        for (k, part) in tail.split(',').enumerate() {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (c, p) = part
                .split_once('>')
                .ok_or_else(|| Error::parse(k, format!("expected `child>parent`, got `{part}`")))?;
            let c: u8 = c
                .trim()
                .parse()
                .map_err(|_| Error::parse(k, format!("invalid node `{c}`")))?;
            let p: u8 = p
                .trim()
                .parse()
                .map_err(|_| Error::parse(k, format!("invalid node `{p}`")))?;
            edges.push((c, p));
        }
        SeparatingTree::new(n, edges)
    }
}

fn directed_closure(n: usize, edges: &[(u8, u8)]) -> Vec<ValSet> {
    let mut reach: Vec<ValSet> = (0..=n).map(|v| if v == 0 { 0 } else { 1 << (v - 1) }).collect();
    loop {
        let mut changed = false;
        for &(c, p) in edges {
            let merged = reach[c as usize] | reach[p as usize];
            if merged != reach[c as usize] {
                reach[c as usize] = merged;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    reach
}

fn undirected_tree(n: usize, edges: &[(u8, u8)]) -> bool {
    if edges.len() + 1 != n {
        return false;
    }
    let mut pairs = BTreeSet::new();
    for &(u, v) in edges {
        if u == 0 || v == 0 || u as usize > n || v as usize > n || u == v {
            return false;
        }
        if !pairs.insert((u.min(v), u.max(v))) {
            return false;
        }
    }
    let mut adj: Vec<Vec<u8>> = vec![Vec::new(); n + 1];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut seen = vec![false; n + 1];
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
    count == n
}

/// Values in the component of the tree minus `cut` containing `start`.
fn component_without(n: usize, edges: &[(u8, u8)], cut: u8, start: u8) -> ValSet {
    let mut adj: Vec<Vec<u8>> = vec![Vec::new(); n + 1];
    for &(u, v) in edges {
        if u != cut && v != cut {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
    }
    let mut mask: ValSet = 0;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        if mask & (1 << (v - 1)) != 0 {
            continue;
        }
        mask |= 1 << (v - 1);
        stack.extend(&adj[v as usize]);
    }
    mask
}

fn below_mask(j: u8) -> ValSet {
    (1 << (j - 1)) - 1
}

fn separates(n: usize, edges: &[(u8, u8)], j: u8, nbrs: &[u8]) -> bool {
    debug_assert_eq!(nbrs.len(), 2);
    let a = component_without(n, edges, j, nbrs[0]);
    let b = component_without(n, edges, j, nbrs[1]);
    let below = below_mask(j);
    let above = !below & !(1 << (j - 1));
    (a & above == 0 && b & below == 0) || (a & below == 0 && b & above == 0)
}

/// Direct check of the definition: directed tree, branching caps, and the
/// separation property at every two-parent and two-child node.
pub fn is_separating_tree(n: usize, edges: &[(u8, u8)]) -> bool {
    if !undirected_tree(n, edges) {
        return false;
    }
    for j in 1..=n as u8 {
        let parents: Vec<u8> = edges.iter().filter(|&&(c, _)| c == j).map(|&(_, p)| p).collect();
        let children: Vec<u8> = edges.iter().filter(|&&(_, p)| p == j).map(|&(c, _)| c).collect();
        if parents.len() > 2 || children.len() > 2 {
            return false;
        }
        for nbrs in [parents, children] {
            if nbrs.len() == 2 && !separates(n, edges, j, &nbrs) {
                return false;
            }
        }
    }
    true
}

/// The walls characterization: (i) at most one in/out-neighbor on each side
/// of every node; (ii) every edge spanning a two-parent node passes below it,
/// and every edge spanning a two-child node passes above it, sides read off
/// the fallen-down drawing via directed paths.
pub fn is_separating_tree_walls(n: usize, edges: &[(u8, u8)]) -> bool {
    if !undirected_tree(n, edges) {
        return false;
    }
    for j in 1..=n as u8 {
        let out: Vec<u8> = edges.iter().filter(|&&(c, _)| c == j).map(|&(_, p)| p).collect();
        let inc: Vec<u8> = edges.iter().filter(|&&(_, p)| p == j).map(|&(c, _)| c).collect();
        for nbrs in [&out, &inc] {
            if nbrs.iter().filter(|&&v| v < j).count() > 1
                || nbrs.iter().filter(|&&v| v > j).count() > 1
            {
                return false;
            }
        }
    }
    let reach = directed_closure(n, edges);
    let reaches = |from: u8, to: u8| reach[from as usize] & (1 << (to - 1)) != 0;
    for j in 1..=n as u8 {
        let two_parents = edges.iter().filter(|&&(c, _)| c == j).count() == 2;
        let two_children = edges.iter().filter(|&&(_, p)| p == j).count() == 2;
        if !two_parents && !two_children {
            continue;
        }
        for &(u, v) in edges {
            let (i, k) = (u.min(v), u.max(v));
            if !(i < j && j < k) {
                continue;
            }
            // the edge passes below j iff the drawing puts j above it, i.e.
            // there is a directed path from the edge to j; above is dual
            let passes_below = reaches(i, j) || reaches(k, j);
            let passes_above = reaches(j, i) || reaches(j, k);
            if passes_below == passes_above {
                return false;
            }
            if (two_parents && !passes_below) || (two_children && !passes_above) {
                return false;
            }
        }
    }
    true
}

/// Labeled undirected trees on `[n]` from Prüfer sequences.
fn undirected_trees(n: usize) -> Vec<Vec<(u8, u8)>> {
    if n == 1 {
        return vec![vec![]];
    }
    if n == 2 {
        return vec![vec![(1, 2)]];
    }
    let mut out = Vec::new();
    let mut seq = vec![1u8; n - 2];
    loop {
        out.push(prufer_decode(n, &seq));
        // next sequence in base-n counting
        let mut k = 0;
        loop {
            if k == seq.len() {
                return out;
            }
            if seq[k] < n as u8 {
                seq[k] += 1;
                break;
            }
            seq[k] = 1;
            k += 1;
        }
    }
}

fn prufer_decode(n: usize, seq: &[u8]) -> Vec<(u8, u8)> {
    let mut degree = vec![1usize; n + 1];
    for &v in seq {
        degree[v as usize] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaf_set: BTreeSet<u8> = (1..=n as u8).filter(|&v| degree[v as usize] == 1).collect();
    for &v in seq {
        let leaf = *leaf_set.iter().next().unwrap();
        leaf_set.remove(&leaf);
        edges.push((leaf.min(v), leaf.max(v)));
        degree[v as usize] -= 1;
        if degree[v as usize] == 1 {
            leaf_set.insert(v);
        }
    }
    let mut last: Vec<u8> = leaf_set.into_iter().collect();
    debug_assert_eq!(last.len(), 2);
    last.sort_unstable();
    edges.push((last[0], last[1]));
    edges
}

/// All orientations of an undirected tree that yield separating trees.
fn orientations(n: usize, undirected: &[(u8, u8)]) -> Vec<SeparatingTree> {
    let mut out = Vec::new();
    // side-degree counters: [out-left, out-right, in-left, in-right] per node
    let mut deg = vec![[0u8; 4]; n + 1];
    let mut chosen: Vec<(u8, u8)> = Vec::with_capacity(n - 1);
    orient_rec(n, undirected, 0, &mut deg, &mut chosen, &mut out);
    out
}

fn orient_rec(
    n: usize,
    undirected: &[(u8, u8)],
    k: usize,
    deg: &mut Vec<[u8; 4]>,
    chosen: &mut Vec<(u8, u8)>,
    out: &mut Vec<SeparatingTree>,
) {
    if k == undirected.len() {
        if is_separating_tree(n, chosen) {
            let mut edges = chosen.clone();
            edges.sort_unstable();
            out.push(SeparatingTree { n, edges });
        }
        return;
    }
    let (a, b) = undirected[k];
    debug_assert!(a < b);
    for (child, parent) in [(a, b), (b, a)] {
        // child gains parent on one side, parent gains child on the other;
        // prune as soon as any node sees two neighbors of one kind per side
        let cs = if parent > child { 1 } else { 0 };
        let ps = if child > parent { 3 } else { 2 };
        if deg[child as usize][cs] == 1 || deg[parent as usize][ps] == 1 {
            continue;
        }
        deg[child as usize][cs] += 1;
        deg[parent as usize][ps] += 1;
        chosen.push((child, parent));
        orient_rec(n, undirected, k + 1, deg, chosen, out);
        chosen.pop();
        deg[child as usize][cs] -= 1;
        deg[parent as usize][ps] -= 1;
    }
}

/// All separating trees on `[n]`, sorted by edge list.
pub fn enumerate_separating_trees(n: usize) -> Result<Vec<SeparatingTree>> {
    enumerate_separating_trees_with_cap(n, TREE_CAP)
}

pub fn enumerate_separating_trees_with_cap(n: usize, cap: usize) -> Result<Vec<SeparatingTree>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let skeletons = undirected_trees(n);
    let mut out: Vec<SeparatingTree> = skeletons
        .par_iter()
        .flat_map_iter(|t| orientations(n, t))
        .collect();
    out.sort();
    Ok(out)
}

/// One mandatory arc per tree edge `{i, k}`: interior points reaching the
/// edge go above, points reached from the edge go below.
pub fn mandatory_arcs(t: &SeparatingTree) -> Vec<Arc> {
    let reach = t.reachability();
    let mut arcs: Vec<Arc> = t
        .edges()
        .iter()
        .map(|&(c, p)| {
            let (i, k) = (c.min(p), c.max(p));
            let ends = values_mask([i, k]);
            let mut above: ValSet = 0;
            for j in i + 1..k {
                if reach[j as usize] & ends != 0 {
                    above |= 1 << (j - 1);
                } else {
                    debug_assert!(
                        (reach[i as usize] | reach[k as usize]) & (1 << (j - 1)) != 0,
                        "every interior point must be joined to the edge"
                    );
                }
            }
            Arc::new(i, k, above).expect("mandatory arc is valid")
        })
        .collect();
    arcs.sort();
    arcs
}

/// One forbidden arc per branching node: `u(max L, min R)` for two parents,
/// `d(max L, min R)` for two children.
pub fn forbidden_arcs(t: &SeparatingTree) -> Vec<Arc> {
    let mut arcs = Vec::new();
    for j in 1..=t.n() as u8 {
        for (nbrs, up) in [(t.parents(j), true), (t.children(j), false)] {
            if nbrs.len() != 2 {
                continue;
            }
            let a = component_without(t.n(), t.edges(), j, nbrs[0]);
            let b = component_without(t.n(), t.edges(), j, nbrs[1]);
            let (left, right) = if a < b { (a, b) } else { (b, a) };
            let big_m = 32 - left.leading_zeros() as u8;
            let small_m = right.trailing_zeros() as u8 + 1;
            arcs.push(if up {
                Arc::up(big_m, small_m)
            } else {
                Arc::down(big_m, small_m)
            });
        }
    }
    arcs.sort();
    arcs
}

/// `true` iff the ideal contains every mandatory arc and no forbidden arc of
/// the tree.
pub fn is_admissible(t: &SeparatingTree, a: &ArcIdeal) -> Result<bool> {
    a.require_essential()?;
    a.require_simple()?;
    Ok(mandatory_arcs(t).iter().all(|arc| a.contains(arc))
        && !forbidden_arcs(t).iter().any(|arc| a.contains(arc)))
}

/// All admissible separating trees of the ideal, in canonical order.
pub fn admissible_trees(n: usize, a: &ArcIdeal) -> Result<Vec<SeparatingTree>> {
    let trees = enumerate_separating_trees(n)?;
    let mut out = Vec::new();
    for t in trees {
        if is_admissible(&t, a)? {
            out.push(t);
        }
    }
    Ok(out)
}

/// The interval `[min, max]` of simple essential congruences admitting the
/// tree: the min forbids every up and down arc not below a mandatory arc,
/// the max forbids exactly the tree's forbidden arcs.
pub fn congruence_interval(t: &SeparatingTree) -> (ArcIdeal, ArcIdeal) {
    let mandatory = mandatory_arcs(t);
    let stranded: Vec<Arc> = all_arcs(t.n())
        .into_iter()
        .filter(|arc| {
            (arc.is_up() || arc.is_down()) && !mandatory.iter().any(|m| arc.is_subarc(m))
        })
        .collect();
    let min = ArcIdeal::from_forbidden(t.n(), stranded);
    let max = ArcIdeal::from_forbidden(t.n(), forbidden_arcs(t));
    (min, max)
}
