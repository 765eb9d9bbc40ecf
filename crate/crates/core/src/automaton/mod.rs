//! Multiplicity tree automata: evaluation on trees, contexts and DAGs, and
//! the product and direct-sum constructions.

pub mod fixtures;
mod format;
mod product;
pub mod random;

use thiserror::Error;

use crate::algebra::{kron_all, kron_rows_times, AlgebraError, Field, Matrix, Scalar};
use crate::text::ParseError;
use crate::trees::{Dag, Label, RankedAlphabet, Tree, TreesError};

pub use format::{parse_mta, write_mta};
pub use product::{difference, product};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("transition of `{symbol}` must be {expected_rows}x{expected_cols}, found {rows}x{cols}")]
    TransitionShape { symbol: String, expected_rows: usize, expected_cols: usize, rows: usize, cols: usize },
    #[error("expected {expected} transition matrices, found {found}")]
    TransitionCount { expected: usize, found: usize },
    #[error("final weight vector has length {found}, expected {expected}")]
    FinalShape { expected: usize, found: usize },
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("input contains a context hole where a tree is required")]
    UnexpectedHole,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Trees(#[from] TreesError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// An automaton `(n, Σ, μ, γ)`: `μ(σ)` is `n^rk(σ) × n`, `γ` has length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mta {
    field: Field,
    dim: usize,
    alphabet: RankedAlphabet,
    transitions: Vec<Matrix>,
    final_weights: Vec<Scalar>,
}

/// Per-node state vectors of a run on a DAG.
#[derive(Clone, Debug)]
pub struct Run {
    pub states: Vec<Vec<Scalar>>,
    /// Number of node evaluations performed; equals the DAG size.
    pub evaluations: usize,
}

impl Run {
    pub fn root_state(&self) -> &[Scalar] {
        self.states.last().expect("a DAG has a root")
    }
}

/// `n^k`, panicking on overflow.
pub(crate) fn pow(n: usize, k: usize) -> usize {
    n.checked_pow(k as u32).expect("transition matrix dimension overflows usize")
}

impl Mta {
    /// Validates every transition shape and entry field.
    pub fn new(field: Field, dim: usize, alphabet: RankedAlphabet, transitions: Vec<Matrix>, final_weights: Vec<Scalar>) -> Result<Mta, AutomatonError> {
        if transitions.len() != alphabet.len() {
            return Err(AutomatonError::TransitionCount { expected: alphabet.len(), found: transitions.len() });
        }
        for (s, m) in transitions.iter().enumerate() {
            let rows = pow(dim, alphabet.rank(s));
            if m.shape() != (rows, dim) {
                return Err(AutomatonError::TransitionShape {
                    symbol: alphabet.name(s).to_string(),
                    expected_rows: rows,
                    expected_cols: dim,
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
            if m.field() != field {
                return Err(AlgebraError::FieldMismatch(field, m.field()).into());
            }
        }
        if final_weights.len() != dim {
            return Err(AutomatonError::FinalShape { expected: dim, found: final_weights.len() });
        }
        if let Some(bad) = final_weights.iter().find(|s| s.field() != field) {
            return Err(AlgebraError::FieldMismatch(field, bad.field()).into());
        }
        Ok(Mta { field, dim, alphabet, transitions, final_weights })
    }

    /// The 0-dimensional automaton, recognising the zero series.
    pub fn zero(field: Field, alphabet: RankedAlphabet) -> Mta {
        let transitions = alphabet.symbols().iter().map(|s| Matrix::zeros(field, pow(0, s.rank), 0)).collect();
        Mta { field, dim: 0, alphabet, transitions, final_weights: Vec::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn transition(&self, symbol: usize) -> &Matrix {
        &self.transitions[symbol]
    }

    pub fn transitions(&self) -> &[Matrix] {
        &self.transitions
    }

    pub fn final_weights(&self) -> &[Scalar] {
        &self.final_weights
    }

    /// `|A| = Σ_σ n^(rk(σ)+1) + n`, the number of stored entries.
    pub fn size(&self) -> usize {
        self.alphabet.symbols().iter().map(|s| pow(self.dim, s.rank + 1)).sum::<usize>() + self.dim
    }

    /// Same automaton with another final vector.
    pub fn with_final(&self, final_weights: Vec<Scalar>) -> Result<Mta, AutomatonError> {
        Mta::new(self.field, self.dim, self.alphabet.clone(), self.transitions.clone(), final_weights)
    }

    /// The image of a rational automaton in `field`; entries are reduced
    /// modulo `p` for a prime field. Identity when the fields agree.
    pub fn to_field(&self, field: Field) -> Result<Mta, AutomatonError> {
        if field == self.field {
            return Ok(self.clone());
        }
        let convert = |x: &Scalar| match x.as_rational() {
            Some(q) => field.from_rational(q),
            None => Err(AlgebraError::FieldMismatch(self.field, field)),
        };
        let transitions = self
            .transitions
            .iter()
            .map(|m| Matrix::from_vec(field, m.rows(), m.cols(), m.entries().iter().map(convert).collect::<Result<_, _>>()?))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        let gamma = self.final_weights.iter().map(convert).collect::<Result<_, _>>()?;
        Mta::new(field, self.dim, self.alphabet.clone(), transitions, gamma)
    }

    pub(crate) fn same_signature(&self, other: &Mta) -> Result<(), AutomatonError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(self.field, other.field).into());
        }
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        Ok(())
    }

    /// `μ(σ(v₁,…,v_k)) = (v₁ ⊗ … ⊗ v_k) · μ(σ)` for state vectors `v_i`.
    pub fn apply(&self, symbol: usize, children: &[&[Scalar]]) -> Vec<Scalar> {
        kron_rows_times(self.field, children, &self.transitions[symbol])
    }

    /// `γ`-weighted value of a state vector.
    pub fn output(&self, state: &[Scalar]) -> Scalar {
        crate::algebra::dot(state, &self.final_weights, self.field)
    }

    /// Bottom-up run over a hole-free DAG, one evaluation per node.
    pub fn run_dag(&self, g: &Dag) -> Result<Run, AutomatonError> {
        g.validate(&self.alphabet)?;
        let mut states: Vec<Vec<Scalar>> = Vec::with_capacity(g.size());
        let mut evaluations = 0;
        for v in 0..g.size() {
            let Label::Sym(s) = g.label(v) else {
                return Err(AutomatonError::UnexpectedHole);
            };
            let children: Vec<&[Scalar]> = g.children(v).iter().map(|&c| states[c].as_slice()).collect();
            let state = self.apply(s, &children);
            evaluations += 1;
            states.push(state);
        }
        Ok(Run { states, evaluations })
    }

    /// `ρ(G) · γ`.
    pub fn weight(&self, g: &Dag) -> Result<Scalar, AutomatonError> {
        let run = self.run_dag(g)?;
        Ok(self.output(run.root_state()))
    }

    /// `μ(t)` by explicit recursion, materializing each Kronecker product.
    pub fn mu_tree(&self, t: &Tree) -> Result<Matrix, AutomatonError> {
        let Label::Sym(s) = t.label() else {
            return Err(AutomatonError::UnexpectedHole);
        };
        if s >= self.alphabet.len() {
            return Err(TreesError::UnknownSymbol(format!("#{s}")).into());
        }
        if t.children().len() != self.alphabet.rank(s) {
            return Err(TreesError::Arity { symbol: self.alphabet.name(s).into(), expected: self.alphabet.rank(s), found: t.children().len() }.into());
        }
        let children = t.children().iter().map(|c| self.mu_tree(c)).collect::<Result<Vec<_>, _>>()?;
        Ok(kron_all(self.field, &children)?.mul(&self.transitions[s])?)
    }

    /// `‖A‖(t)` on an explicit tree.
    pub fn weight_tree(&self, t: &Tree) -> Result<Scalar, AutomatonError> {
        let mu = self.mu_tree(t)?;
        Ok(self.output(mu.row(0)))
    }

    /// `μ(c)` for a context DAG: `μ(□) = I_n`, so that `μ(c[t]) = μ(t)·μ(c)`.
    pub fn mu_context(&self, c: &Dag) -> Result<Matrix, AutomatonError> {
        if !c.is_context() {
            return Err(TreesError::NotContext(format!("{} hole nodes", usize::from(c.hole_node().is_some()))).into());
        }
        c.validate(&self.alphabet)?;
        let mut values: Vec<Value> = Vec::with_capacity(c.size());
        for v in 0..c.size() {
            let value = match c.label(v) {
                Label::Hole => Value::Matrix(Matrix::identity(self.field, self.dim)),
                Label::Sym(s) => {
                    let ch = c.children(v);
                    match ch.iter().position(|&u| matches!(values[u], Value::Matrix(_))) {
                        None => {
                            let rows: Vec<&[Scalar]> = ch.iter().map(|&u| vector_of(&values[u])).collect();
                            Value::Vector(self.apply(s, &rows))
                        }
                        Some(j) => {
                            let Value::Matrix(inner) = &values[ch[j]] else { unreachable!() };
                            let mut out = Vec::with_capacity(self.dim);
                            for r in 0..self.dim {
                                let rows: Vec<&[Scalar]> = ch.iter().enumerate().map(|(i, &u)| if i == j { inner.row(r) } else { vector_of(&values[u]) }).collect();
                                out.push(self.apply(s, &rows));
                            }
                            Value::Matrix(Matrix::from_rows(self.field, self.dim, out)?)
                        }
                    }
                }
            };
            values.push(value);
        }
        match values.pop() {
            Some(Value::Matrix(m)) => Ok(m),
            _ => unreachable!("the root of a context lies on the hole path"),
        }
    }
}

/// Per-node value in a context run: nodes on the hole path carry matrices.
enum Value {
    Vector(Vec<Scalar>),
    Matrix(Matrix),
}

fn vector_of(v: &Value) -> &[Scalar] {
    match v {
        Value::Vector(x) => x,
        Value::Matrix(_) => unreachable!("only one child of a context node holds the hole"),
    }
}
