//! Exact learning of tree series from membership and equivalence queries,
//! with counterexamples consumed as DAGs, and minimization by self-learning.

mod observation;
mod teacher;

use thiserror::Error;

use crate::algebra::{AlgebraError, Field};
use crate::automaton::{AutomatonError, Mta};
use crate::trees::{RankedAlphabet, TreesError};

pub use observation::{dag_hash, BadSubtree, ObservationState};
pub use teacher::{simulated_teacher, SimulatedTeacher, Teacher};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LearnError {
    /// Answers no recognizable series could give; the message names the
    /// broken guarantee.
    #[error("teacher inconsistency: {0}")]
    Inconsistent(String),
    #[error("teacher failed: {0}")]
    Teacher(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Trees(#[from] TreesError),
}

/// Counters of one learning run. Membership queries count distinct
/// `c[t]` asked, since repeats are served from the cache.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub equivalence_queries: usize,
    pub membership_queries: usize,
    /// Largest counterexample DAG size `s`.
    pub max_counterexample: usize,
    /// Field operations spent on eliminations and run checks.
    pub operations: u64,
}

impl QueryStats {
    /// `|A|² + |A|·s`, the membership budget for a minimal target `A`.
    pub fn membership_bound(minimal_size: usize, s: usize) -> usize {
        minimal_size * minimal_size + minimal_size * s
    }
}

/// One learning session; owns its observation table.
pub struct Learner {
    state: ObservationState,
}

impl Learner {
    pub fn new(field: Field, alphabet: RankedAlphabet) -> Learner {
        Learner { state: ObservationState::new(field, alphabet) }
    }

    /// Keep `MQ`/`EQ` lines for each query answered by the teacher.
    pub fn with_transcript(mut self) -> Learner {
        self.state.record_transcript();
        self
    }

    pub fn state(&self) -> &ObservationState {
        &self.state
    }

    pub fn stats(&self) -> QueryStats {
        *self.state.stats()
    }

    pub fn transcript(&self) -> &[String] {
        self.state.transcript()
    }

    fn ask<T: Teacher + ?Sized>(&mut self, teacher: &mut T, h: &Mta) -> Result<Option<crate::trees::Dag>, LearnError> {
        let answer = teacher.equivalence(h)?;
        self.state.stats_mut().equivalence_queries += 1;
        let line = match &answer {
            None => format!("EQ {} -> YES", h.dim()),
            Some(z) => format!("EQ {} -> CEX {}", h.dim(), z.size()),
        };
        self.state.log(line);
        Ok(answer)
    }

    /// Runs to a YES. Each counterexample adds at least one row to `X`, and
    /// the rows stay independent, so an honest teacher for a series of Hankel
    /// rank `r` is asked at most `r + 1` equivalence queries.
    pub fn learn<T: Teacher + ?Sized>(&mut self, teacher: &mut T) -> Result<Mta, LearnError> {
        let field = teacher.field();
        let alphabet = teacher.alphabet().clone();
        let zero = Mta::zero(field, alphabet);
        let Some(z) = self.ask(teacher, &zero)? else {
            return Ok(zero);
        };
        self.state.initialize(teacher, &z)?;
        loop {
            self.state.close(teacher)?;
            let h = self.state.hypothesis(teacher)?;
            let Some(z) = self.ask(teacher, &h)? else {
                return Ok(h);
            };
            let found = self.state.find_bad_subtree(teacher, &h, &z)?;
            if self.state.absorb(teacher, &found)? == 0 {
                return Err(LearnError::Inconsistent("a counterexample left X unchanged, so the rank cannot grow".into()));
            }
        }
    }
}

/// Learns the teacher's series from scratch.
pub fn lmta<T: Teacher + ?Sized>(teacher: &mut T) -> Result<(Mta, QueryStats), LearnError> {
    let mut learner = Learner::new(teacher.field(), teacher.alphabet().clone());
    let h = learner.learn(teacher)?;
    Ok((h, learner.stats()))
}

/// A minimal automaton equivalent to `a`, learned from a teacher simulating it.
pub fn minimize(a: &Mta) -> Result<Mta, LearnError> {
    Ok(lmta(&mut simulated_teacher(a.clone()))?.0)
}
