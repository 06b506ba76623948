//! Permutations in one-line notation and the weak order.
//!
//! Values are 1-indexed throughout, matching the usual combinatorial
//! conventions. The weak order compares permutations by inclusion of
//! inversion sets; covers exchange adjacent entries.

use crate::error::{Error, Result};
use crate::MAX_N;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Direction of a weak order cover, or of one of the two arc diagram maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

/// A permutation of `[n]` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u8>,
}

impl Permutation {
    /// Builds a permutation from its one-line word (values `1..=n`).
    pub fn new(word: Vec<u8>) -> Result<Self> {
        let n = word.len();
        if n > MAX_N {
            return Err(Error::SizeTooLarge(n));
        }
        let mut seen = vec![false; n + 1];
        for &v in &word {
            if v == 0 || v as usize > n || seen[v as usize] {
                return Err(Error::InvalidDiagram(format!(
                    "word is not a permutation of [{n}]"
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { word })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n as u8).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// Value at 1-indexed position `p`.
    pub fn at(&self, p: usize) -> u8 {
        self.word[p - 1]
    }

    /// 1-indexed position of value `v`.
    pub fn position_of(&self, v: u8) -> usize {
        self.word.iter().position(|&x| x == v).unwrap() + 1
    }

    /// The inversion set `{ (s_p, s_q) : p < q, s_p > s_q }` as value pairs.
    pub fn inversion_set(&self) -> BTreeSet<(u8, u8)> {
        let mut inv = BTreeSet::new();
        for p in 0..self.word.len() {
            for q in p + 1..self.word.len() {
                if self.word[p] > self.word[q] {
                    inv.insert((self.word[p], self.word[q]));
                }
            }
        }
        inv
    }

    pub fn inversion_count(&self) -> usize {
        let mut c = 0;
        for p in 0..self.word.len() {
            for q in p + 1..self.word.len() {
                if self.word[p] > self.word[q] {
                    c += 1;
                }
            }
        }
        c
    }

    /// 1-indexed positions `p` with `s_p < s_{p+1}`.
    pub fn ascents(&self) -> Vec<usize> {
        (1..self.word.len())
            .filter(|&p| self.word[p - 1] < self.word[p])
            .collect()
    }

    /// 1-indexed positions `p` with `s_p > s_{p+1}`.
    pub fn descents(&self) -> Vec<usize> {
        (1..self.word.len())
            .filter(|&p| self.word[p - 1] > self.word[p])
            .collect()
    }

    /// Exchanges the entries at positions `p` and `p+1`.
    pub fn swap_positions(&self, p: usize) -> Self {
        let mut word = self.word.clone();
        word.swap(p - 1, p);
        Permutation { word }
    }

    /// Weak order covers of this permutation: up-covers reverse each ascent,
    /// down-covers reverse each descent. Sorted lexicographically.
    pub fn weak_covers(&self, direction: Direction) -> Vec<Permutation> {
        let positions = match direction {
            Direction::Up => self.ascents(),
            Direction::Down => self.descents(),
        };
        let mut covers: Vec<Permutation> =
            positions.into_iter().map(|p| self.swap_positions(p)).collect();
        covers.sort();
        covers
    }

    /// `true` iff `self <= other` in the weak order.
    pub fn weak_le(&self, other: &Permutation) -> bool {
        self.inversion_set().is_subset(&other.inversion_set())
    }

    /// Reverses the word. This is the weak order anti-automorphism
    /// `s -> s . w_0` swapping joins and meets.
    pub fn reverse(&self) -> Self {
        let mut word = self.word.clone();
        word.reverse();
        Permutation { word }
    }

    /// Join in the weak order, computed by transitively closing the union of
    /// inversion sets and reading off the sorted order it induces.
    pub fn weak_join(&self, other: &Permutation) -> Permutation {
        let n = self.n();
        let mut inv: BTreeSet<(u8, u8)> = self.inversion_set();
        inv.extend(other.inversion_set());
        // close under (a,b),(b,c) => (a,c) for a > b > c
        loop {
            let mut added = false;
            let pairs: Vec<_> = inv.iter().cloned().collect();
            for &(a, b) in &pairs {
                for &(b2, c) in &pairs {
                    if b == b2 && !inv.contains(&(a, c)) {
                        inv.insert((a, c));
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        permutation_from_inversions(n, &inv)
    }

    pub fn weak_meet(&self, other: &Permutation) -> Permutation {
        self.reverse().weak_join(&other.reverse()).reverse()
    }

    /// Order-isomorphic relabeling of an arbitrary word of distinct letters
    /// onto `[k]`.
    pub fn standardize(letters: &[u8]) -> Permutation {
        let mut sorted: Vec<u8> = letters.to_vec();
        sorted.sort_unstable();
        let word = letters
            .iter()
            .map(|v| (sorted.iter().position(|x| x == v).unwrap() + 1) as u8)
            .collect();
        Permutation { word }
    }
}

/// Rebuilds the permutation whose inversion set is `inv`: `u` comes before `v`
/// iff they are not inverted.
fn permutation_from_inversions(n: usize, inv: &BTreeSet<(u8, u8)>) -> Permutation {
    let mut values: Vec<u8> = (1..=n as u8).collect();
    values.sort_by(|&u, &v| {
        let before = if u < v {
            !inv.contains(&(v, u))
        } else {
            inv.contains(&(u, v))
        };
        if before {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    Permutation { word: values }
}

/// All permutations of `[n]` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut word: Vec<u8> = (1..=n as u8).collect();
    loop {
        out.push(Permutation { word: word.clone() });
        if !next_lex(&mut word) {
            break;
        }
    }
    out
}

fn next_lex(word: &mut [u8]) -> bool {
    let n = word.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && word[i - 1] >= word[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while word[j] <= word[i - 1] {
        j -= 1;
    }
    word.swap(i - 1, j);
    word[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    /// Digits for `n <= 9`, comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for v in &self.word {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::parse(0, "empty permutation"));
        }
        let word: Vec<u8> = if s.contains(',') {
            s.split(',')
                .enumerate()
                .map(|(i, part)| {
                    part.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::parse(i, format!("invalid value `{part}`")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .enumerate()
                .map(|(i, c)| {
                    c.to_digit(10)
                        .filter(|&d| d > 0)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::parse(i, format!("invalid digit `{c}`")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(word)
    }
}
