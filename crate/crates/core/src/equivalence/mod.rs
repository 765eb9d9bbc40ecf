//! Equivalence checking with small DAG counterexamples.
//!
//! [`forward_basis`] spans the reachable state space `{μ(t)}` with a basis
//! whose witness trees are subtree-closed, and [`check_equiv`] runs it on the
//! difference automaton. [`brute_force_equiv`] is an independent
//! height-bounded oracle.

mod brute;
mod forward;

use thiserror::Error;

use crate::algebra::Scalar;
use crate::automaton::{difference, AutomatonError, Mta};
use crate::trees::Dag;

pub use brute::brute_force_equiv;
pub use forward::{forward_basis, ForwardBasis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("enumeration needs more than {0} tree combinations")]
    Budget(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivResult {
    Equivalent,
    /// A tree on which the two automata disagree, with both weights.
    Counterexample { dag: Dag, left: Scalar, right: Scalar },
}

impl EquivResult {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivResult::Equivalent)
    }
}

/// Decides `‖a‖ ≡ ‖b‖`.
///
/// The difference automaton has dimension `n₁ + n₂`, so its forward basis
/// has at most that many witnesses, and each witness has at most as many
/// DAG nodes as its position in the basis. The counterexample is the first
/// witness whose state is not orthogonal to the final vector.
pub fn check_equiv(a: &Mta, b: &Mta) -> Result<EquivResult, EquivError> {
    let d = difference(a, b)?;
    let basis = forward_basis(&d);
    for (state, witness) in basis.vectors().iter().zip(basis.witnesses()) {
        if !d.output(state).is_zero() {
            let dag = witness.clone();
            let left = a.weight(&dag)?;
            let right = b.weight(&dag)?;
            return Ok(EquivResult::Counterexample { dag, left, right });
        }
    }
    Ok(EquivResult::Equivalent)
}
