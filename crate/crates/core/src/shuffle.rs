//! The decorated separating tree algebra: shifted shuffles, concatenation of
//! birational sequences, products of congruence classes, and a probe showing
//! why deconcatenation fails to be a coproduct.

use crate::birational::{birational_congruence, BirationalSequence};
use crate::error::{Error, Result};
use crate::insertion::eq_poset;
use crate::perm::Permutation;
use crate::septree::{is_admissible, SeparatingTree};
use std::collections::{BTreeMap, BTreeSet};

/// All interleavings of `r` with `s` shifted by `m = |r|`.
pub fn shifted_shuffle(r: &Permutation, s: &Permutation) -> BTreeSet<Permutation> {
    let m = r.n() as u8;
    let shifted: Vec<u8> = s.word().iter().map(|&v| v + m).collect();
    let mut out = BTreeSet::new();
    let mut word = Vec::with_capacity(r.n() + s.n());
    interleave(r.word(), &shifted, &mut word, &mut out);
    out
}

fn interleave(a: &[u8], b: &[u8], word: &mut Vec<u8>, out: &mut BTreeSet<Permutation>) {
    if a.is_empty() && b.is_empty() {
        out.insert(Permutation::new(word.clone()).unwrap());
        return;
    }
    if let Some((&x, rest)) = a.split_first() {
        word.push(x);
        interleave(rest, b, word, out);
        word.pop();
    }
    if let Some((&y, rest)) = b.split_first() {
        word.push(y);
        interleave(a, rest, word, out);
        word.pop();
    }
}

pub fn concat_sequences(r: &BirationalSequence, s: &BirationalSequence) -> BirationalSequence {
    let mut pairs = r.pairs().to_vec();
    pairs.extend(s.pairs().iter().cloned());
    BirationalSequence::new(pairs).expect("labels stay nonnegative")
}

/// A congruence class of a sequence-defined congruence, carried by its
/// separating tree; members are the tree's linear extensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedClass {
    seq: BirationalSequence,
    tree: SeparatingTree,
}

impl DecoratedClass {
    pub fn new(seq: BirationalSequence, tree: SeparatingTree) -> Result<Self> {
        let ideal = birational_congruence(&seq)?;
        if tree.n() != seq.n() {
            return Err(Error::SizeMismatch {
                expected: seq.n(),
                got: tree.n(),
            });
        }
        if !is_admissible(&tree, &ideal)? {
            return Err(Error::InvalidTree(format!(
                "{tree} is not admissible for the congruence of {seq}"
            )));
        }
        Ok(DecoratedClass { seq, tree })
    }

    /// The class of `s` under the congruence of `seq`.
    pub fn of_permutation(seq: BirationalSequence, s: &Permutation) -> Result<Self> {
        let ideal = birational_congruence(&seq)?;
        let poset = eq_poset(s, &ideal)?;
        let tree = SeparatingTree::new(s.n(), poset.edges().iter().cloned().collect())?;
        Ok(DecoratedClass { seq, tree })
    }

    pub fn seq(&self) -> &BirationalSequence {
        &self.seq
    }

    pub fn tree(&self) -> &SeparatingTree {
        &self.tree
    }

    pub fn members(&self) -> Vec<Permutation> {
        self.tree.to_poset().linear_extensions()
    }
}

/// The product `(R, r) . (S, s)`: the classes of the concatenated congruence
/// partitioning the shifted shuffle of the two member sets. Sorted by tree.
pub fn product_classes(r: &DecoratedClass, s: &DecoratedClass) -> Result<Vec<DecoratedClass>> {
    let rs = concat_sequences(r.seq(), s.seq());
    let ideal = birational_congruence(&rs)?;
    let mut trees: BTreeSet<SeparatingTree> = BTreeSet::new();
    for rho in r.members() {
        for sigma in s.members() {
            for pi in shifted_shuffle(&rho, &sigma) {
                let poset = eq_poset(&pi, &ideal)?;
                trees.insert(SeparatingTree::new(
                    pi.n(),
                    poset.edges().iter().cloned().collect(),
                )?);
            }
        }
    }
    trees
        .into_iter()
        .map(|tree| DecoratedClass::new(rs.clone(), tree))
        .collect()
}

/// The subsequence of pairs attached to the given values, in increasing
/// value order.
pub fn restrict_sequence(seq: &BirationalSequence, values: &[u8]) -> BirationalSequence {
    let pairs = values
        .iter()
        .map(|&v| seq.pairs()[v as usize - 1].clone())
        .collect();
    BirationalSequence::new(pairs).expect("labels stay nonnegative")
}

/// One incoherence witness: a class whose deconcatenation at `k` is not a
/// union of products of factor classes.
#[derive(Debug, Clone)]
pub struct Incoherence {
    /// Bottom permutation of the offending class.
    pub class_bottom: Permutation,
    /// Value set of the prefix group where the failure occurs.
    pub prefix_values: Vec<u8>,
    /// A deconcatenated pair observed in the class...
    pub observed: (Permutation, Permutation),
    /// ... whose factor-class product also contains this missing pair.
    pub missing: (Permutation, Permutation),
}

/// Outcome of probing deconcatenation at one split point.
#[derive(Debug, Clone)]
pub struct DeconcatenationReport {
    pub k: usize,
    pub incoherences: Vec<Incoherence>,
    /// Caveat attached to every report: the factor congruences are obtained
    /// by restricting the sequence to the value set of each factor, the
    /// reading of "pairs of rationals attached to values".
    pub note: &'static str,
}

impl DeconcatenationReport {
    pub fn coherent(&self) -> bool {
        self.incoherences.is_empty()
    }
}

const RESTRICTION_NOTE: &str = "factor congruences use the subsequence of label pairs \
attached to the values of each factor (interpretation; the construction is only \
specified by example)";

/// Tests whether deconcatenation at position `k` behaves as a coproduct for
/// the congruence of `seq`: every class, cut at `k` and standardized, must
/// split into full products of factor classes.
pub fn deconcatenation_probe(seq: &BirationalSequence, k: usize) -> Result<DeconcatenationReport> {
    let n = seq.n();
    if k > n {
        return Err(Error::SizeMismatch { expected: n, got: k });
    }
    let ideal = birational_congruence(seq)?;
    let classes = crate::insertion::classes(n, &ideal)?;
    let mut incoherences = Vec::new();
    for class in &classes {
        // group the cut members by the value set of their prefix
        let mut groups: BTreeMap<Vec<u8>, BTreeSet<(Permutation, Permutation)>> = BTreeMap::new();
        for member in &class.members {
            let (pre, suf) = member.word().split_at(k);
            let mut values: Vec<u8> = pre.to_vec();
            values.sort_unstable();
            groups.entry(values).or_default().insert((
                Permutation::standardize(pre),
                Permutation::standardize(suf),
            ));
        }
        for (values, pairs) in groups {
            let co_values: Vec<u8> = (1..=n as u8).filter(|v| !values.contains(v)).collect();
            let pre_ideal = birational_congruence(&restrict_sequence(seq, &values))?;
            let suf_ideal = birational_congruence(&restrict_sequence(seq, &co_values))?;
            'outer: for (p, q) in &pairs {
                let pre_class = crate::insertion::eq_poset(p, &pre_ideal)?.linear_extensions();
                let suf_class = crate::insertion::eq_poset(q, &suf_ideal)?.linear_extensions();
                for p2 in &pre_class {
                    for q2 in &suf_class {
                        if !pairs.contains(&(p2.clone(), q2.clone())) {
                            incoherences.push(Incoherence {
                                class_bottom: class.bottom.clone(),
                                prefix_values: values.clone(),
                                observed: (p.clone(), q.clone()),
                                missing: (p2.clone(), q2.clone()),
                            });
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    Ok(DeconcatenationReport {
        k,
        incoherences,
        note: RESTRICTION_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::enumerate_simple;
    use crate::birational::realize_birational;
    use crate::catalog;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn seq(s: &str) -> BirationalSequence {
        s.parse().unwrap()
    }

    #[test]
    fn shuffle_worked_example() {
        let result = shifted_shuffle(&p("12"), &p("231"));
        let expected: BTreeSet<Permutation> = [
            "12453", "14253", "14523", "14532", "41253", "41523", "41532", "45123", "45132",
            "45312",
        ]
        .iter()
        .map(|s| p(s))
        .collect();
        assert_eq!(result, expected);
        assert_eq!(
            shifted_shuffle(&p("1"), &p("1")),
            ["12", "21"].iter().map(|s| p(s)).collect()
        );
    }

    #[test]
    fn shuffle_counts() {
        fn binom(a: usize, b: usize) -> usize {
            (1..=b).fold(1, |acc, k| acc * (a - b + k) / k)
        }
        for m in 1..=4 {
            for n in 1..=4 {
                let r = Permutation::identity(m);
                let s = p(&"4321"[4 - n..]);
                assert_eq!(shifted_shuffle(&r, &s).len(), binom(m + n, m));
            }
        }
    }

    #[test]
    fn concat_basics() {
        let r = seq("((0,0),(1,1))");
        assert_eq!(
            concat_sequences(&r, &BirationalSequence::zeros(0)),
            r
        );
        assert_eq!(
            concat_sequences(&BirationalSequence::zeros(1), &BirationalSequence::zeros(1)),
            BirationalSequence::zeros(2)
        );
    }

    #[test]
    fn concat_restriction_property() {
        // forbidden arcs of r.s supported in [m] are exactly those of r, and
        // those in the shifted window are the shifted ones of s
        let r = realize_birational(&catalog::sylvester(3)).unwrap();
        let s = realize_birational(&catalog::recoil(3)).unwrap();
        let m = 3u8;
        let joint = birational_congruence(&concat_sequences(&r, &s)).unwrap();
        let left = birational_congruence(&r).unwrap();
        let right = birational_congruence(&s).unwrap();
        for arc in joint.minimal_non_arcs() {
            if arc.right() <= m {
                assert!(left.minimal_non_arcs().contains(&arc));
            } else if arc.left() > m {
                assert!(right
                    .minimal_non_arcs()
                    .iter()
                    .any(|a| a.shift(m) == arc));
            } else {
                panic!("forbidden arc {arc} straddles the boundary");
            }
        }
        assert_eq!(
            joint.minimal_non_arcs().len(),
            left.minimal_non_arcs().len() + right.minimal_non_arcs().len()
        );
    }

    #[test]
    fn product_is_disjoint_union_of_classes() {
        // exhaustive over simple essential congruences with m + n <= 5
        for (m, n) in [(1usize, 1usize), (1, 3), (2, 2), (2, 3)] {
            for a in enumerate_simple(m, true).unwrap() {
                for b in enumerate_simple(n, true).unwrap() {
                    let ra = realize_birational(&a).unwrap();
                    let rb = realize_birational(&b).unwrap();
                    for ca in crate::insertion::classes(m, &a).unwrap() {
                        for cb in crate::insertion::classes(n, &b).unwrap() {
                            let dr =
                                DecoratedClass::of_permutation(ra.clone(), &ca.bottom).unwrap();
                            let ds =
                                DecoratedClass::of_permutation(rb.clone(), &cb.bottom).unwrap();
                            let mut shuffle: BTreeSet<Permutation> = BTreeSet::new();
                            for x in &ca.members {
                                for y in &cb.members {
                                    shuffle.extend(shifted_shuffle(x, y));
                                }
                            }
                            let mut covered = BTreeSet::new();
                            for term in product_classes(&dr, &ds).unwrap() {
                                for member in term.members() {
                                    assert!(
                                        covered.insert(member.clone()),
                                        "classes overlap at {member}"
                                    );
                                }
                            }
                            assert_eq!(covered, shuffle, "m={m} n={n} {a} {b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn product_matches_binary_tree_oracle() {
        // sylvester-realizing sequences: shuffles of sylvester classes group
        // by BST shape (independent of the insertion machinery)
        let m = 2;
        let n = 2;
        let a = catalog::sylvester(m);
        let b = catalog::sylvester(n);
        let joint = catalog::sylvester(m + n);
        for ca in crate::insertion::classes(m, &a).unwrap() {
            for cb in crate::insertion::classes(n, &b).unwrap() {
                let mut shuffle: BTreeSet<Permutation> = BTreeSet::new();
                for x in &ca.members {
                    for y in &cb.members {
                        shuffle.extend(shifted_shuffle(x, y));
                    }
                }
                let shapes: BTreeSet<String> = shuffle
                    .iter()
                    .map(|s| eq_poset(s, &joint).unwrap().to_string())
                    .collect();
                // the shuffle is a disjoint union of sylvester classes
                let mut covered = 0;
                for class in crate::insertion::classes(m + n, &joint).unwrap() {
                    if shapes.contains(&class.poset.to_string()) {
                        assert!(class.members.iter().all(|s| shuffle.contains(s)));
                        covered += class.members.len();
                    }
                }
                assert_eq!(covered, shuffle.len());
            }
        }
    }

    #[test]
    fn product_associative() {
        let r = realize_birational(&catalog::sylvester(2)).unwrap();
        let s = realize_birational(&catalog::recoil(2)).unwrap();
        let t = realize_birational(&catalog::trivial(2)).unwrap();
        let dr = DecoratedClass::of_permutation(r, &p("21")).unwrap();
        let ds = DecoratedClass::of_permutation(s, &p("12")).unwrap();
        let dt = DecoratedClass::of_permutation(t, &p("21")).unwrap();
        let left: Vec<_> = product_classes(&dr, &ds)
            .unwrap()
            .iter()
            .flat_map(|x| product_classes(x, &dt).unwrap())
            .map(|x| x.tree().to_string())
            .collect();
        let right: Vec<_> = product_classes(&ds, &dt)
            .unwrap()
            .iter()
            .flat_map(|x| product_classes(&dr, x).unwrap())
            .map(|x| x.tree().to_string())
            .collect();
        let (mut l, mut r) = (left, right);
        l.sort();
        r.sort();
        assert_eq!(l, r);
    }

    #[test]
    fn deconcatenation_counterexample() {
        let s = seq("((0,0),(1/2,0),(1/3,0),(1/2,0),(0,0))");
        let report = deconcatenation_probe(&s, 4).unwrap();
        assert!(!report.coherent());
        let hit = report
            .incoherences
            .iter()
            .find(|w| w.class_bottom == p("24153"))
            .expect("the lone class {24153} must be incoherent");
        assert_eq!(hit.observed, (p("2314"), p("1")));
        assert_eq!(hit.missing, (p("2341"), p("1")));
    }

    #[test]
    fn deconcatenation_trivial_splits() {
        let s = seq("((0,0),(1/2,0),(1/3,0),(1/2,0),(0,0))");
        assert!(deconcatenation_probe(&s, 0).unwrap().coherent());
        assert!(deconcatenation_probe(&s, 5).unwrap().coherent());
    }

    #[test]
    fn bibinary_sequences_are_coherent() {
        // 0/1 labels: the phenomenon disappears
        for n in 1..=4usize {
            for mask in 0u32..(1 << (2 * n)) {
                let pairs = (0..n)
                    .map(|k| {
                        let a = (mask >> (2 * k)) & 1;
                        let b = (mask >> (2 * k + 1)) & 1;
                        (
                            num::BigRational::from_integer((a as i64).into()),
                            num::BigRational::from_integer((b as i64).into()),
                        )
                    })
                    .collect();
                let s = BirationalSequence::new(pairs).unwrap();
                for k in 0..=n {
                    assert!(
                        deconcatenation_probe(&s, k).unwrap().coherent(),
                        "{s} at {k}"
                    );
                }
            }
        }
    }
}
