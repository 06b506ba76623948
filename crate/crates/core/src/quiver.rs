//! Generators of the quiver algebra ideal attached to a simple congruence.
//!
//! The double path quiver on `n` vertices has forward arrows `a1..a(n-1)` and
//! backward arrows `b1..b(n-1)`. Each minimal non-arc of a simple congruence
//! contributes a path word: `u(i,j)` gives the up path `ai...a(j-1)`, `d(i,j)`
//! the down path `b(j-1)...bi`; a basic arc gives both.

use crate::error::Result;
use crate::ideal::ArcIdeal;
use std::fmt;

/// A path word in the double path quiver.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum QuiverWord {
    /// `ai.a(i+1)...a(j-1)` for the up path of `u(i,j)`.
    Up { i: u8, j: u8 },
    /// `b(j-1)...b(i+1).bi` for the down path of `d(i,j)`.
    Down { i: u8, j: u8 },
}

impl fmt::Display for QuiverWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            QuiverWord::Up { i, j } => {
                let parts: Vec<String> = (i..j).map(|k| format!("a{k}")).collect();
                write!(f, "{}", parts.join("."))
            }
            QuiverWord::Down { i, j } => {
                let parts: Vec<String> = (i..j).rev().map(|k| format!("b{k}")).collect();
                write!(f, "{}", parts.join("."))
            }
        }
    }
}

/// The words generating the quiver ideal of a simple congruence, one or two
/// per minimal non-arc, in canonical (minimal non-arc) order.
pub fn quiver_generators(ideal: &ArcIdeal) -> Result<Vec<QuiverWord>> {
    ideal.require_simple()?;
    let mut out = Vec::new();
    for arc in ideal.minimal_non_arcs() {
        let (i, j) = (arc.left(), arc.right());
        if arc.is_up() {
            out.push(QuiverWord::Up { i, j });
        }
        if arc.is_down() {
            out.push(QuiverWord::Down { i, j });
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ideal::ArcIdeal;

    fn words(ideal: &ArcIdeal) -> Vec<String> {
        quiver_generators(ideal)
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect()
    }

    #[test]
    fn trivial_has_no_generators() {
        assert!(words(&catalog::trivial(4)).is_empty());
    }

    #[test]
    fn sylvester_n4() {
        assert_eq!(words(&catalog::sylvester(4)), vec!["b2.b1", "b3.b2"]);
    }

    #[test]
    fn recoil_n3() {
        assert_eq!(words(&catalog::recoil(3)), vec!["a1.a2", "b2.b1"]);
    }

    #[test]
    fn non_simple_rejected() {
        assert!(quiver_generators(&catalog::baxter(4)).is_err());
    }
}
