use std::collections::HashSet;

use crate::algebra::{RowBasis, Scalar};
use crate::automaton::Mta;
use crate::trees::{Dag, DagPool, Label, NodeId};

/// Linearly independent reachable states `μ(t_i)` with witness trees `t_i`.
///
/// Witness `i` is a symbol applied to earlier witnesses, so every sub-DAG of
/// a witness is itself a witness and witness `i` (0-based) has at most
/// `i + 1` nodes.
#[derive(Clone, Debug)]
pub struct ForwardBasis {
    vectors: Vec<Vec<Scalar>>,
    witnesses: Vec<Dag>,
    /// For each witness, its symbol and the indices of its child witnesses.
    derivations: Vec<(usize, Vec<usize>)>,
}

impl ForwardBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    pub fn witnesses(&self) -> &[Dag] {
        &self.witnesses
    }

    pub fn derivation(&self, i: usize) -> (usize, &[usize]) {
        (self.derivations[i].0, &self.derivations[i].1)
    }
}

/// Worklist fixpoint over `{μ(t)}`.
///
/// Symbols are tried in declaration order and child tuples lexicographically
/// over the current witnesses; a new state is kept iff it is independent of
/// the basis. After each addition the scan restarts from the first symbol,
/// skipping (symbol, tuple) pairs already tried.
pub fn forward_basis(a: &Mta) -> ForwardBasis {
    let field = a.field();
    let mut basis = RowBasis::new(field, a.dim());
    let mut out = ForwardBasis { vectors: Vec::new(), witnesses: Vec::new(), derivations: Vec::new() };
    let mut pool = DagPool::new();
    let mut ids: Vec<NodeId> = Vec::new();
    let mut tried: HashSet<(usize, Vec<usize>)> = HashSet::new();
    'restart: loop {
        let len = out.vectors.len();
        for (s, sym) in a.alphabet().symbols().iter().enumerate() {
            let mut tuple = vec![0usize; sym.rank];
            if sym.rank > 0 && len == 0 {
                continue;
            }
            loop {
                if tried.insert((s, tuple.clone())) {
                    let children: Vec<&[Scalar]> = tuple.iter().map(|&i| out.vectors[i].as_slice()).collect();
                    let v = a.apply(s, &children);
                    if basis.insert(v.clone()).expect("state vectors have the automaton's width and field") {
                        let child_ids: Vec<NodeId> = tuple.iter().map(|&i| ids[i]).collect();
                        let id = pool.intern(Label::Sym(s), &child_ids);
                        ids.push(id);
                        out.vectors.push(v);
                        out.witnesses.push(pool.extract(id));
                        out.derivations.push((s, tuple));
                        continue 'restart;
                    }
                }
                if !advance(&mut tuple, len) {
                    break;
                }
            }
        }
        return out;
    }
}

/// Next tuple in lexicographic order over `[0, bound)`; false after the last.
fn advance(tuple: &mut [usize], bound: usize) -> bool {
    for d in tuple.iter_mut().rev() {
        *d += 1;
        if *d < bound {
            return true;
        }
        *d = 0;
    }
    false
}
