//! Lattice congruences of the weak order on permutations, represented by arc
//! ideals, together with the combinatorics of their quotients: congruence
//! classes and quotient lattices through poset insertion, separating trees
//! describing the vertices of simple quotientopes, Schröder separating trees
//! describing all their faces, birational sequences, the shifted shuffle
//! product, and the translation to path algebra ideal generators.

pub mod arc;
pub mod birational;
pub mod catalog;
pub mod diagram;
pub mod error;
pub mod ideal;
pub mod insertion;
pub mod perm;
pub mod quiver;
pub mod schroder;
pub mod septree;
pub mod shuffle;

pub use arc::{all_arcs, arc_count, Arc};
pub use diagram::{delta, diagram_to_permutation, ArcDiagram};
pub use error::{Error, Result};
pub use perm::{all_permutations, Direction, Permutation};

/// Every ground set is capped so value sets fit in machine words.
pub const MAX_N: usize = 16;
