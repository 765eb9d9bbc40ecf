//! Arithmetic circuits: evaluation, randomized identity testing, and the two
//! reductions between circuit identity testing and automaton equivalence.

mod acit;
mod eval;
mod format;
mod normalize;
mod random;
mod reduce;
mod series;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::automaton::AutomatonError;
use crate::text::ParseError;

pub use acit::{acit_random_test, AcitVerdict, TrialBudget, PRIME_BITS};
pub use eval::{eval_circuit, eval_exact, eval_mod, DEFAULT_BIT_BOUND};
pub use format::{parse_circuit, write_circuit};
pub use normalize::{normalize_circuit, split_subtraction, NormalizedCircuit};
pub use random::{random_circuit, symmetric_cancellation};
pub use reduce::{acit_alphabet, acit_pair_to_mta, acit_to_mta, canonical_tree, SIGMA0, SIGMA1, SIGMA2};
pub use series::{equiv_to_acit, sum_series_circuit, sum_series_fraction};

pub type GateId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Zero,
    One,
    Var(usize),
    Add(GateId, GateId),
    Sub(GateId, GateId),
    Mul(GateId, GateId),
}

impl Gate {
    pub fn children(self) -> Option<(GateId, GateId)> {
        match self {
            Gate::Add(l, r) | Gate::Sub(l, r) | Gate::Mul(l, r) => Some((l, r)),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("gate {gate} refers to gate {child}, which is not an earlier gate")]
    NotTopological { gate: GateId, child: GateId },
    #[error("output gate {0} does not exist")]
    BadOutput(GateId),
    #[error("variable x{0} has no assigned value")]
    Unassigned(usize),
    #[error("exact evaluation needs more than {0} bits")]
    BitBound(u64),
    #[error("modulus must be at least 2")]
    BadModulus,
    #[error("circuit has variables; only variable-free circuits are accepted here")]
    HasVariables,
    #[error("subtraction gate {0}; split the circuit into two tracks first")]
    Subtraction(GateId),
    #[error("not normalized: {0}")]
    NotNormalized(String),
    #[error("automaton over {0} has no integer encoding")]
    NotRational(crate::algebra::Field),
    #[error("height {height} leaves no usable error bound with {bits}-bit primes")]
    TooDeep { height: usize, bits: u32 },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Gates in topological order: children always have smaller ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    output: GateId,
}

impl Circuit {
    pub fn new(gates: Vec<Gate>, output: GateId) -> Result<Circuit, CircuitError> {
        for (g, gate) in gates.iter().enumerate() {
            if let Some((l, r)) = gate.children() {
                for child in [l, r] {
                    if child >= g {
                        return Err(CircuitError::NotTopological { gate: g, child });
                    }
                }
            }
        }
        if output >= gates.len() {
            return Err(CircuitError::BadOutput(output));
        }
        Ok(Circuit { gates, output })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, g: GateId) -> Gate {
        self.gates[g]
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn is_variable_free(&self) -> bool {
        !self.gates.iter().any(|g| matches!(g, Gate::Var(_)))
    }

    /// One more than the largest variable index, or 0.
    pub fn num_vars(&self) -> usize {
        self.gates.iter().filter_map(|g| if let Gate::Var(i) = g { Some(i + 1) } else { None }).max().unwrap_or(0)
    }

    /// Inputs have height 0; internal gates one more than their higher child.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.gates.len()];
        for (g, gate) in self.gates.iter().enumerate() {
            if let Some((l, r)) = gate.children() {
                h[g] = 1 + h[l].max(h[r]);
            }
        }
        h
    }

    pub fn height(&self) -> usize {
        self.heights()[self.output]
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.gates.len()];
        seen[self.output] = true;
        for g in (0..self.gates.len()).rev() {
            if seen[g] {
                if let Some((l, r)) = self.gates[g].children() {
                    seen[l] = true;
                    seen[r] = true;
                }
            }
        }
        seen
    }

    /// Drops gates the output does not depend on, keeping relative order.
    pub fn trim(&self) -> Circuit {
        let seen = self.reachable();
        let mut new_id = vec![usize::MAX; self.gates.len()];
        let mut gates = Vec::new();
        for (g, gate) in self.gates.iter().enumerate() {
            if seen[g] {
                new_id[g] = gates.len();
                gates.push(match *gate {
                    Gate::Add(l, r) => Gate::Add(new_id[l], new_id[r]),
                    Gate::Sub(l, r) => Gate::Sub(new_id[l], new_id[r]),
                    Gate::Mul(l, r) => Gate::Mul(new_id[l], new_id[r]),
                    other => other,
                });
            }
        }
        Circuit { gates, output: new_id[self.output] }
    }

    /// Upper bounds on `log2(1 + |value|)` per gate, taking every variable as
    /// magnitude 1. For polynomials this bounds the sum of absolute values of
    /// the coefficients, which is what modular testing needs.
    pub fn bit_bounds(&self) -> Vec<f64> {
        let mut b = vec![0.0f64; self.gates.len()];
        for (g, gate) in self.gates.iter().enumerate() {
            b[g] = match *gate {
                Gate::Zero => 0.0,
                Gate::One | Gate::Var(_) => 1.0,
                Gate::Add(l, r) | Gate::Sub(l, r) => b[l].max(b[r]) + 1.0,
                Gate::Mul(l, r) => b[l] + b[r],
            };
        }
        b
    }

    /// Upper bounds on the total degree per gate.
    pub fn degree_bounds(&self) -> Vec<f64> {
        let mut d = vec![0.0f64; self.gates.len()];
        for (g, gate) in self.gates.iter().enumerate() {
            d[g] = match *gate {
                Gate::Zero | Gate::One => 0.0,
                Gate::Var(_) => 1.0,
                Gate::Add(l, r) | Gate::Sub(l, r) => d[l].max(d[r]),
                Gate::Mul(l, r) => d[l] + d[r],
            };
        }
        d
    }
}

/// Appends gates with structural sharing: asking twice for the same gate
/// returns the same id.
#[derive(Clone, Debug, Default)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    index: HashMap<Gate, GateId>,
}

impl CircuitBuilder {
    pub fn new() -> CircuitBuilder {
        CircuitBuilder::default()
    }

    fn push(&mut self, gate: Gate) -> GateId {
        if let Some(&id) = self.index.get(&gate) {
            return id;
        }
        if let Some((l, r)) = gate.children() {
            assert!(l < self.gates.len() && r < self.gates.len(), "child of a new gate must already exist");
        }
        let id = self.gates.len();
        self.gates.push(gate);
        self.index.insert(gate, id);
        id
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gate(&self, g: GateId) -> Gate {
        self.gates[g]
    }

    pub fn zero(&mut self) -> GateId {
        self.push(Gate::Zero)
    }

    pub fn one(&mut self) -> GateId {
        self.push(Gate::One)
    }

    pub fn var(&mut self, i: usize) -> GateId {
        self.push(Gate::Var(i))
    }

    pub fn add(&mut self, l: GateId, r: GateId) -> GateId {
        self.push(Gate::Add(l, r))
    }

    pub fn sub(&mut self, l: GateId, r: GateId) -> GateId {
        self.push(Gate::Sub(l, r))
    }

    pub fn mul(&mut self, l: GateId, r: GateId) -> GateId {
        self.push(Gate::Mul(l, r))
    }

    /// Balanced sum; the empty sum is the zero gate.
    pub fn sum(&mut self, terms: &[GateId]) -> GateId {
        match terms {
            [] => self.zero(),
            [x] => *x,
            _ => {
                let (l, r) = terms.split_at(terms.len() / 2);
                let (l, r) = (self.sum(l), self.sum(r));
                self.add(l, r)
            }
        }
    }

    /// Balanced product; the empty product is the one gate.
    pub fn product(&mut self, factors: &[GateId]) -> GateId {
        match factors {
            [] => self.one(),
            [x] => *x,
            _ => {
                let (l, r) = factors.split_at(factors.len() / 2);
                let (l, r) = (self.product(l), self.product(r));
                self.mul(l, r)
            }
        }
    }

    /// An integer from the inputs 0 and 1: powers of two by doubling, then a
    /// balanced sum of the set bits, negated by `0 - x` when needed.
    pub fn constant(&mut self, value: &BigInt) -> GateId {
        if value.is_zero() {
            return self.zero();
        }
        let magnitude = value.magnitude();
        let mut power = self.one();
        let mut bits = Vec::new();
        for i in 0..magnitude.bits() {
            if i > 0 {
                power = self.add(power, power);
            }
            if magnitude.bit(i) {
                bits.push(power);
            }
        }
        let abs = self.sum(&bits);
        if value.is_negative() {
            let z = self.zero();
            self.sub(z, abs)
        } else {
            abs
        }
    }

    pub fn constant_i64(&mut self, value: i64) -> GateId {
        self.constant(&BigInt::from(value))
    }

    pub fn finish(self, output: GateId) -> Circuit {
        Circuit::new(self.gates, output).expect("builder gates are topological")
    }
}
