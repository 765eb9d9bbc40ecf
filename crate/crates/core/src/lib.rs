//! Multiplicity tree automata over exact fields.
//!
//! The crate covers evaluation of automata on trees and hash-consed DAGs,
//! products and equivalence checking with small DAG counterexamples, exact
//! learning from membership and equivalence queries, reductions between
//! automaton equivalence and arithmetic circuit identity testing, and a
//! family of hard targets for measuring learner query counts.

pub mod adversary;
pub mod algebra;
pub mod automaton;
pub mod circuits;
pub mod equivalence;
pub mod learner;
pub mod text;
pub mod trees;

pub use algebra::{Field, Matrix, Scalar};
pub use automaton::Mta;
pub use trees::{Dag, RankedAlphabet, Tree};
