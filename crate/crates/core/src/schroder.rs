//! Schröder separating trees: directed trees on the blocks of a set
//! partition, describing all faces of the simple quotientopes.
//!
//! They are exactly the edge contractions of separating trees; the
//! contraction-minimal ones (all blocks singletons) are the separating trees
//! themselves.

use crate::arc::{mask_values, Arc, ValSet};
use crate::error::{Error, Result};
use crate::ideal::ArcIdeal;
use crate::septree::{enumerate_separating_trees_with_cap, SeparatingTree};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// Default cap for the exhaustive Schröder tree enumeration.
pub const SCHRODER_CAP: usize = 7;

/// A directed tree on the blocks of a set partition of `[n]`.
///
/// Blocks are value bitmasks, listed ascending by minimum element; edges are
/// `child > parent` pairs of block indices, sorted. This is the canonical
/// form used for deduplication.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchroderTree {
    n: usize,
    blocks: Vec<ValSet>,
    edges: Vec<(u8, u8)>,
}

impl SchroderTree {
    pub fn new(n: usize, blocks: Vec<ValSet>, edges: Vec<(u8, u8)>) -> Result<Self> {
        let t = Self::assemble(n, blocks, edges)?;
        if !t.is_separating() {
            return Err(Error::InvalidTree(format!(
                "not a Schroder separating tree on [{n}]"
            )));
        }
        Ok(t)
    }

    /// Builds the canonical form and checks everything except separation.
    fn assemble(n: usize, mut blocks: Vec<ValSet>, edges: Vec<(u8, u8)>) -> Result<Self> {
        let full: ValSet = if n == 0 { 0 } else { (1u64 << n) as ValSet - 1 };
        let mut union: ValSet = 0;
        for &b in &blocks {
            if b == 0 || b & !full != 0 || union & b != 0 {
                return Err(Error::InvalidTree("blocks must partition [n]".into()));
            }
            union |= b;
        }
        if union != full {
            return Err(Error::InvalidTree("blocks must partition [n]".into()));
        }
        // sort blocks by minimum and renumber the edges accordingly
        let mut order: Vec<u8> = (0..blocks.len() as u8).collect();
        order.sort_by_key(|&k| blocks[k as usize].trailing_zeros());
        let mut rank = vec![0u8; blocks.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old as usize] = new as u8;
        }
        blocks.sort_by_key(|b| b.trailing_zeros());
        let mut edges: Vec<(u8, u8)> = edges
            .into_iter()
            .map(|(c, p)| (rank[c as usize], rank[p as usize]))
            .collect();
        edges.sort_unstable();
        let k = blocks.len();
        if edges.len() + 1 != k {
            return Err(Error::InvalidTree("edge count must be #blocks - 1".into()));
        }
        // connectivity of the undirected block graph
        let mut adj: Vec<Vec<u8>> = vec![Vec::new(); k];
        let mut pairs = BTreeSet::new();
        for &(c, p) in &edges {
            if c as usize >= k || p as usize >= k || c == p {
                return Err(Error::InvalidTree("edge endpoints out of range".into()));
            }
            if !pairs.insert((c.min(p), c.max(p))) {
                return Err(Error::InvalidTree("parallel edges".into()));
            }
            adj[c as usize].push(p);
            adj[p as usize].push(c);
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0u8];
        let mut count = 0;
        while let Some(v) = stack.pop() {
            if seen[v as usize] {
                continue;
            }
            seen[v as usize] = true;
            count += 1;
            stack.extend(&adj[v as usize]);
        }
        if count != k {
            return Err(Error::InvalidTree("block graph is not connected".into()));
        }
        Ok(SchroderTree { n, blocks, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[ValSet] {
        &self.blocks
    }

    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing value `v`.
    pub fn block_of(&self, v: u8) -> u8 {
        self.blocks
            .iter()
            .position(|b| b & (1 << (v - 1)) != 0)
            .expect("blocks partition [n]") as u8
    }

    fn neighbors(&self, j: u8) -> Vec<(u8, bool)> {
        // (neighbor, true when the neighbor is a parent of j)
        let mut out = Vec::new();
        for &(c, p) in &self.edges {
            if c == j {
                out.push((p, true));
            } else if p == j {
                out.push((c, false));
            }
        }
        out
    }

    /// Union of the block values in the component of the tree minus `cut`
    /// containing `start`.
    fn subtree_values(&self, cut: u8, start: u8) -> ValSet {
        let mut mask: ValSet = 0;
        let mut stack = vec![start];
        let mut seen = vec![false; self.block_count()];
        seen[cut as usize] = true;
        while let Some(b) = stack.pop() {
            if seen[b as usize] {
                continue;
            }
            seen[b as usize] = true;
            mask |= self.blocks[b as usize];
            for (nb, _) in self.neighbors(b) {
                stack.push(nb);
            }
        }
        mask
    }

    fn is_separating(&self) -> bool {
        for j in 0..self.block_count() as u8 {
            let block = self.blocks[j as usize];
            for parents in [true, false] {
                let subtrees: Vec<ValSet> = self
                    .neighbors(j)
                    .into_iter()
                    .filter(|&(_, is_parent)| is_parent == parents)
                    .map(|(nb, _)| self.subtree_values(j, nb))
                    .collect();
                for (x, &a) in subtrees.iter().enumerate() {
                    for &b in &subtrees[x + 1..] {
                        if !separated_by(a, b, block) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Contracts the edge, merging its endpoint blocks.
    pub fn contract_edge(&self, edge: (u8, u8)) -> Result<SchroderTree> {
        if !self.edges.contains(&edge) {
            return Err(Error::EdgeNotFound);
        }
        let (c, p) = edge;
        let mut blocks = self.blocks.clone();
        blocks[c.min(p) as usize] |= blocks[c.max(p) as usize];
        blocks.remove(c.max(p) as usize);
        let relabel = |b: u8| {
            let b = if b == c.max(p) { c.min(p) } else { b };
            if b > c.max(p) {
                b - 1
            } else {
                b
            }
        };
        let edges: Vec<(u8, u8)> = self
            .edges
            .iter()
            .filter(|&&e| e != edge)
            .map(|&(x, y)| (relabel(x), relabel(y)))
            .collect();
        // contraction preserves separation, but reassemble defensively
        SchroderTree::new(self.n, blocks, edges)
    }

    /// The block-index reachability closure following edge directions.
    fn block_closure(&self) -> Vec<u32> {
        let k = self.block_count();
        let mut reach: Vec<u32> = (0..k).map(|b| 1 << b).collect();
        loop {
            let mut changed = false;
            for &(c, p) in &self.edges {
                let merged = reach[c as usize] | reach[p as usize];
                if merged != reach[c as usize] {
                    reach[c as usize] = merged;
                    changed = true;
                }
            }
            if !changed {
                return reach;
            }
        }
    }
}

/// `true` iff some `j` in `block` separates the value sets `a` and `b`:
/// everything in one set below `j`, everything in the other above.
fn separated_by(a: ValSet, b: ValSet, block: ValSet) -> bool {
    if a == 0 || b == 0 {
        return true;
    }
    let fits = |lo: ValSet, hi: ValSet| {
        let max_lo = 32 - lo.leading_zeros() as u8;
        let min_hi = hi.trailing_zeros() as u8 + 1;
        (max_lo + 1..min_hi).any(|j| block & (1 << (j - 1)) != 0)
    };
    fits(a, b) || fits(b, a)
}

impl fmt::Display for SchroderTree {
    /// `n:{1 3|2};(2)>(1 3)` — blocks pipe-separated, edges between
    /// parenthesized blocks.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |b: ValSet| {
            mask_values(b)
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "{}:{{", self.n)?;
        let parts: Vec<String> = self.blocks.iter().map(|&b| show(b)).collect();
        write!(f, "{}}};", parts.join("|"))?;
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|&(c, p)| {
                format!(
                    "({})>({})",
                    show(self.blocks[c as usize]),
                    show(self.blocks[p as usize])
                )
            })
            .collect();
        write!(f, "{}", edges.join(","))
    }
}

impl fmt::Debug for SchroderTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for SchroderTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::parse(0, "expected `n:{blocks};edges`"))?;
        let n: usize = head
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("invalid size `{head}`")))?;
        let (block_part, edge_part) = rest
            .split_once(';')
            .ok_or_else(|| Error::parse(0, "expected `;` after blocks"))?;
        let block_body = block_part
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::parse(0, "blocks must be braced"))?;
        let parse_values = |body: &str| -> Result<ValSet> {
            let mut mask = 0;
            for tok in body.split_whitespace() {
                let v: u8 = tok
                    .parse()
                    .map_err(|_| Error::parse(0, format!("invalid value `{tok}`")))?;
                if v == 0 {
                    return Err(Error::parse(0, "values are 1-indexed"));
                }
                mask |= 1 << (v - 1);
            }
            Ok(mask)
        };
        let blocks: Vec<ValSet> = block_body
            .split('|')
            .map(parse_values)
            .collect::<Result<_>>()?;
        let find_block = |mask: ValSet| -> Result<u8> {
            blocks
                .iter()
                .position(|&b| b == mask)
                .map(|k| k as u8)
                .ok_or_else(|| Error::parse(0, "edge endpoint is not a block"))
        };
        let mut edges = Vec::new();
        for part in edge_part.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (c, p) = part
                .split_once(">")
                .ok_or_else(|| Error::parse(0, format!("expected `(..)>(..)`, got `{part}`")))?;
            let strip = |t: &str| -> Result<ValSet> {
                let body = t
                    .trim()
                    .strip_prefix('(')
                    .and_then(|u| u.strip_suffix(')'))
                    .ok_or_else(|| Error::parse(0, "edge blocks must be parenthesized"))?;
                parse_values(body)
            };
            edges.push((find_block(strip(c)?)?, find_block(strip(p)?)?));
        }
        SchroderTree::new(n, blocks, edges)
    }
}

impl From<&SeparatingTree> for SchroderTree {
    fn from(t: &SeparatingTree) -> Self {
        let blocks: Vec<ValSet> = (1..=t.n() as u8).map(|v| 1 << (v - 1)).collect();
        let edges: Vec<(u8, u8)> = t.edges().iter().map(|&(c, p)| (c - 1, p - 1)).collect();
        SchroderTree::new(t.n(), blocks, edges).expect("separating trees are Schroder trees")
    }
}

/// Recognition entry point mirroring [`SchroderTree::new`].
pub fn is_schroder_separating(n: usize, blocks: Vec<ValSet>, edges: Vec<(u8, u8)>) -> bool {
    SchroderTree::new(n, blocks, edges).is_ok()
}

/// All Schröder separating trees on `[n]`: every edge-subset contraction of
/// every separating tree, deduplicated by canonical form.
pub fn enumerate_schroder_trees(n: usize) -> Result<Vec<SchroderTree>> {
    enumerate_schroder_trees_with_cap(n, SCHRODER_CAP)
}

pub fn enumerate_schroder_trees_with_cap(n: usize, cap: usize) -> Result<Vec<SchroderTree>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let trees = enumerate_separating_trees_with_cap(n, cap.max(crate::septree::TREE_CAP))?;
    let mut out: Vec<SchroderTree> = trees
        .par_iter()
        .flat_map_iter(|t| contractions(&SchroderTree::from(t)))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// All contractions of edge subsets of `s` (including `s` itself).
fn contractions(s: &SchroderTree) -> Vec<SchroderTree> {
    let m = s.edges().len();
    let mut out = Vec::with_capacity(1 << m);
    for mask in 0u32..(1 << m) {
        let mut t = s.clone();
        // contract the chosen edges one at a time; indices shift, so track
        // the original edges by their endpoint blocks' value masks
        let chosen: Vec<(ValSet, ValSet)> = (0..m)
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| {
                let (c, p) = s.edges()[k];
                (s.blocks()[c as usize], s.blocks()[p as usize])
            })
            .collect();
        let mut ok = true;
        for (cmask, pmask) in chosen {
            let c = t
                .blocks()
                .iter()
                .position(|&b| b & cmask != 0)
                .unwrap() as u8;
            let p = t
                .blocks()
                .iter()
                .position(|&b| b & pmask != 0)
                .unwrap() as u8;
            match t.contract_edge((c, p)) {
                Ok(next) => t = next,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push(t);
        }
    }
    out
}

/// Counts of Schröder separating trees by number of blocks.
pub fn count_by_blocks(n: usize) -> Result<BTreeMap<usize, usize>> {
    let mut counts = BTreeMap::new();
    for t in enumerate_schroder_trees(n)? {
        *counts.entry(t.block_count()).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Mandatory arcs of a Schröder tree: one arc per pair `i < k` whose blocks
/// coincide or form an edge and whose gap avoids both blocks; sides of the
/// gap values by directed block paths.
pub fn mandatory_arcs_schroder(s: &SchroderTree) -> Vec<Arc> {
    let reach = s.block_closure();
    let mut arcs = Vec::new();
    for i in 1..=s.n() as u8 {
        for k in i + 1..=s.n() as u8 {
            let bi = s.block_of(i);
            let bk = s.block_of(k);
            let linked = bi == bk
                || s.edges().contains(&(bi, bk))
                || s.edges().contains(&(bk, bi));
            if !linked {
                continue;
            }
            let gap = crate::arc::interval_mask(i, k);
            if gap & (s.blocks()[bi as usize] | s.blocks()[bk as usize]) != 0 {
                continue;
            }
            let ends = (1u32 << bi) | (1u32 << bk);
            let mut above: ValSet = 0;
            for j in i + 1..k {
                let bj = s.block_of(j);
                if reach[bj as usize] & ends != 0 {
                    above |= 1 << (j - 1);
                } else {
                    debug_assert!(
                        (reach[bi as usize] | reach[bk as usize]) & (1 << bj) != 0,
                        "every gap block must be joined to the edge"
                    );
                }
            }
            arcs.push(Arc::new(i, k, above).expect("mandatory arc is valid"));
        }
    }
    arcs.sort();
    arcs
}

/// Forbidden arcs: `u(max L, min R)` per pair of ancestor subtrees `L < R`,
/// `d(max L, min R)` per pair of descendant subtrees.
pub fn forbidden_arcs_schroder(s: &SchroderTree) -> Vec<Arc> {
    let mut arcs = Vec::new();
    for j in 0..s.block_count() as u8 {
        for parents in [true, false] {
            let subtrees: Vec<ValSet> = s
                .neighbors(j)
                .into_iter()
                .filter(|&(_, is_parent)| is_parent == parents)
                .map(|(nb, _)| s.subtree_values(j, nb))
                .collect();
            for (x, &a) in subtrees.iter().enumerate() {
                for &b in &subtrees[x + 1..] {
                    let (left, right) = if a < b { (a, b) } else { (b, a) };
                    let big_m = (32 - left.leading_zeros()) as u8;
                    let small_m = right.trailing_zeros() as u8 + 1;
                    arcs.push(if parents {
                        Arc::up(big_m, small_m)
                    } else {
                        Arc::down(big_m, small_m)
                    });
                }
            }
        }
    }
    arcs.sort();
    arcs.dedup();
    arcs
}

/// `true` iff the ideal contains every mandatory arc and no forbidden arc of
/// the tree.
pub fn is_admissible_schroder(s: &SchroderTree, a: &ArcIdeal) -> Result<bool> {
    a.require_essential()?;
    a.require_simple()?;
    Ok(mandatory_arcs_schroder(s).iter().all(|arc| a.contains(arc))
        && !forbidden_arcs_schroder(s).iter().any(|arc| a.contains(arc)))
}

pub fn admissible_schroder_trees(n: usize, a: &ArcIdeal) -> Result<Vec<SchroderTree>> {
    let mut out = Vec::new();
    for t in enumerate_schroder_trees(n)? {
        if is_admissible_schroder(&t, a)? {
            out.push(t);
        }
    }
    Ok(out)
}

/// Face counts of the quotientope of a simple essential congruence, keyed by
/// block count (`n` gives vertices, `1` the full polytope).
pub fn face_vector(n: usize, a: &ArcIdeal) -> Result<BTreeMap<usize, usize>> {
    let mut counts = BTreeMap::new();
    for t in admissible_schroder_trees(n, a)? {
        *counts.entry(t.block_count()).or_insert(0) += 1;
    }
    Ok(counts)
}
