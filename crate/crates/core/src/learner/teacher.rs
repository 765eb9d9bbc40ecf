use super::LearnError;
use crate::algebra::{Field, Scalar};
use crate::automaton::Mta;
use crate::equivalence::{check_equiv, EquivResult};
use crate::trees::{Dag, RankedAlphabet};

/// The two query kinds of exact learning, answered on DAGs.
pub trait Teacher {
    fn field(&self) -> Field;

    fn alphabet(&self) -> &RankedAlphabet;

    /// `f(g)`; equal DAGs must get equal answers.
    fn membership(&mut self, g: &Dag) -> Result<Scalar, LearnError>;

    /// `None` for YES, otherwise a DAG `z` with `f(z) ≠ ‖h‖(z)`.
    fn equivalence(&mut self, h: &Mta) -> Result<Option<Dag>, LearnError>;
}

/// Answers from a target automaton; counterexamples are forward-basis
/// witnesses of the difference automaton.
#[derive(Clone, Debug)]
pub struct SimulatedTeacher {
    target: Mta,
    pub membership_queries: usize,
    pub equivalence_queries: usize,
}

pub fn simulated_teacher(target: Mta) -> SimulatedTeacher {
    SimulatedTeacher { target, membership_queries: 0, equivalence_queries: 0 }
}

impl SimulatedTeacher {
    pub fn target(&self) -> &Mta {
        &self.target
    }
}

impl Teacher for SimulatedTeacher {
    fn field(&self) -> Field {
        self.target.field()
    }

    fn alphabet(&self) -> &RankedAlphabet {
        self.target.alphabet()
    }

    fn membership(&mut self, g: &Dag) -> Result<Scalar, LearnError> {
        self.membership_queries += 1;
        Ok(self.target.weight(g)?)
    }

    fn equivalence(&mut self, h: &Mta) -> Result<Option<Dag>, LearnError> {
        self.equivalence_queries += 1;
        match check_equiv(&self.target, h).map_err(|e| LearnError::Teacher(e.to_string()))? {
            EquivResult::Equivalent => Ok(None),
            EquivResult::Counterexample { dag, .. } => Ok(Some(dag)),
        }
    }
}
