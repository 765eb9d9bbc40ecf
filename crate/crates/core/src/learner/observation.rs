use std::collections::{HashMap, HashSet};

use sha2::{Digest, Sha256};

use super::{LearnError, QueryStats, Teacher};
use crate::algebra::{Field, Matrix, RowBasis, Scalar};
use crate::automaton::Mta;
use crate::trees::{for_each_tuple, write_dag, Dag, DagPool, Label, NodeId, RankedAlphabet};

/// A node of the counterexample whose Hankel row the hypothesis gets wrong
/// while getting its children's rows right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadSubtree {
    pub symbol: usize,
    /// Pool ids of the children `τ₁, …, τ_k`.
    pub children: Vec<NodeId>,
    /// Index into `Y` of a column witnessing the disagreement.
    pub column: usize,
}

/// Rows `X`, columns `Y` and the full-row-rank block `H_{X,Y}` of the
/// Hankel matrix, plus the membership cache. Trees and contexts live in one
/// hash-consing pool, so `c[t]` is identified by its canonical node id.
pub struct ObservationState {
    field: Field,
    alphabet: RankedAlphabet,
    pool: DagPool,
    x: Vec<NodeId>,
    /// `y[0]` is the bare hole.
    y: Vec<NodeId>,
    y_seen: HashSet<NodeId>,
    /// `H_{X,Y}`, row `i` belonging to `x[i]`.
    h: Vec<Vec<Scalar>>,
    basis: RowBasis,
    /// `H_{t,Y'}` for trees `t` met so far, `Y'` a prefix of `Y`.
    rows: HashMap<NodeId, Vec<Scalar>>,
    /// `f(c[t])` keyed by the pool id of `c[t]`.
    answers: HashMap<NodeId, Scalar>,
    /// `(σ, children)` already found inside the span for the current `Y`.
    closed: HashSet<(usize, Vec<NodeId>)>,
    stats: QueryStats,
    transcript: Option<Vec<String>>,
}

impl ObservationState {
    pub fn new(field: Field, alphabet: RankedAlphabet) -> ObservationState {
        let mut pool = DagPool::new();
        let hole = pool.intern(Label::Hole, &[]);
        ObservationState {
            field,
            alphabet,
            pool,
            x: Vec::new(),
            y: vec![hole],
            y_seen: HashSet::from([hole]),
            h: Vec::new(),
            basis: RowBasis::new(field, 1),
            rows: HashMap::new(),
            answers: HashMap::new(),
            closed: HashSet::new(),
            stats: QueryStats::default(),
            transcript: None,
        }
    }

    pub fn record_transcript(&mut self) {
        self.transcript.get_or_insert_with(Vec::new);
    }

    pub fn transcript(&self) -> &[String] {
        self.transcript.as_deref().unwrap_or(&[])
    }

    pub fn stats(&self) -> &QueryStats {
        &self.stats
    }

    pub fn stats_mut(&mut self) -> &mut QueryStats {
        &mut self.stats
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn dag(&self, id: NodeId) -> Dag {
        self.pool.extract(id)
    }

    pub fn rows_x(&self) -> Vec<Dag> {
        self.x.iter().map(|&t| self.dag(t)).collect()
    }

    pub fn columns(&self) -> Vec<Dag> {
        self.y.iter().map(|&c| self.dag(c)).collect()
    }

    pub fn hankel_block(&self) -> Matrix {
        Matrix::from_rows(self.field, self.y.len(), self.h.clone()).expect("rows have |Y| entries")
    }

    pub(crate) fn log(&mut self, line: String) {
        if let Some(t) = &mut self.transcript {
            t.push(line);
        }
    }

    pub fn import(&mut self, g: &Dag) -> NodeId {
        self.pool.import(g)
    }

    fn member<T: Teacher + ?Sized>(&mut self, teacher: &mut T, id: NodeId) -> Result<Scalar, LearnError> {
        if let Some(v) = self.answers.get(&id) {
            return Ok(v.clone());
        }
        let g = self.pool.extract(id);
        let v = teacher.membership(&g)?;
        if v.field() != self.field {
            return Err(LearnError::Inconsistent(format!("membership answer {v} is not in {}", self.field)));
        }
        self.stats.membership_queries += 1;
        if self.transcript.is_some() {
            let line = format!("MQ {} {v}", dag_hash(&g, &self.alphabet));
            self.log(line);
        }
        self.answers.insert(id, v.clone());
        Ok(v)
    }

    /// `X ← {z}` for the first counterexample `z`, whose row `[f(z)]`
    /// must be nonzero.
    pub fn initialize<T: Teacher + ?Sized>(&mut self, teacher: &mut T, z: &Dag) -> Result<(), LearnError> {
        if !z.is_tree() || z.validate(&self.alphabet).is_err() {
            return Err(LearnError::Inconsistent("counterexample is not a tree over the alphabet".into()));
        }
        self.stats.max_counterexample = self.stats.max_counterexample.max(z.size());
        let t = self.pool.import(z);
        if !self.try_add_row(teacher, t)? {
            return Err(LearnError::Inconsistent("counterexample to the zero automaton has weight 0".into()));
        }
        Ok(())
    }

    /// `H_{t,Y}`, querying only the columns not seen for `t` before.
    pub fn row<T: Teacher + ?Sized>(&mut self, teacher: &mut T, t: NodeId) -> Result<Vec<Scalar>, LearnError> {
        let have = self.rows.get(&t).map_or(0, Vec::len);
        let mut fresh = Vec::with_capacity(self.y.len() - have);
        for j in have..self.y.len() {
            let id = self.pool.substitute(self.y[j], t)?;
            fresh.push(self.member(teacher, id)?);
        }
        let row = self.rows.entry(t).or_default();
        row.extend(fresh);
        Ok(row.clone())
    }

    /// Appends `t` to `X` iff its row is outside the span of `H_{X,Y}`.
    pub fn try_add_row<T: Teacher + ?Sized>(&mut self, teacher: &mut T, t: NodeId) -> Result<bool, LearnError> {
        let row = self.row(teacher, t)?;
        let (found, ops) = self.basis.express_with_cost(&row)?;
        self.stats.operations += ops;
        if found.is_some() {
            return Ok(false);
        }
        self.basis.insert(row.clone())?;
        self.x.push(t);
        self.h.push(row);
        Ok(true)
    }

    /// Add `σ(t_{i₁},…,t_{i_k})` rows until every such row lies in
    /// the span. Symbols in declaration order, tuples lexicographically;
    /// a pass that adds rows is followed by another over the larger `X`.
    pub fn close<T: Teacher + ?Sized>(&mut self, teacher: &mut T) -> Result<(), LearnError> {
        loop {
            let mut added = false;
            let n = self.n();
            for s in 0..self.alphabet.len() {
                for tuple in tuples(self.alphabet.rank(s), n) {
                    let children: Vec<NodeId> = tuple.iter().map(|&i| self.x[i]).collect();
                    if self.closed.contains(&(s, children.clone())) {
                        continue;
                    }
                    let t = self.pool.intern(Label::Sym(s), &children);
                    if self.try_add_row(teacher, t)? {
                        added = true;
                    } else {
                        self.closed.insert((s, children));
                    }
                }
            }
            if !added {
                debug_assert_eq!(self.hankel_block().rank(), self.n(), "H_XY lost full row rank");
                return Ok(());
            }
        }
    }

    /// `γ = H_{X,□}` and `μ(σ)` from `μ(σ)·H_{X,Y} = H_{σ(X,…,X),Y}`.
    /// Requires [`ObservationState::close`] to have run since the last change.
    pub fn hypothesis<T: Teacher + ?Sized>(&mut self, teacher: &mut T) -> Result<Mta, LearnError> {
        let n = self.n();
        let mut transitions = Vec::with_capacity(self.alphabet.len());
        for s in 0..self.alphabet.len() {
            let mut rows = Vec::new();
            for tuple in tuples(self.alphabet.rank(s), n) {
                let children: Vec<NodeId> = tuple.iter().map(|&i| self.x[i]).collect();
                let t = self.pool.intern(Label::Sym(s), &children);
                let target = self.row(teacher, t)?;
                let (coeffs, ops) = self.basis.express_with_cost(&target)?;
                self.stats.operations += ops;
                rows.push(coeffs.ok_or_else(|| LearnError::Inconsistent("a closed row left the span of H_{X,Y}".into()))?);
            }
            transitions.push(Matrix::from_rows(self.field, n, rows)?);
        }
        let gamma = self.h.iter().map(|row| row[0].clone()).collect();
        Ok(Mta::new(self.field, n, self.alphabet.clone(), transitions, gamma)?)
    }

    /// The first node of `z`, by nondecreasing height and then node
    /// id, with `H_{τ,Y} ≠ μ(τ)·H_{X,Y}`. Its children come earlier in that
    /// order, so their rows are right.
    pub fn find_bad_subtree<T: Teacher + ?Sized>(&mut self, teacher: &mut T, h: &Mta, z: &Dag) -> Result<BadSubtree, LearnError> {
        if !z.is_tree() || z.validate(&self.alphabet).is_err() {
            return Err(LearnError::Inconsistent("counterexample is not a tree over the alphabet".into()));
        }
        self.stats.max_counterexample = self.stats.max_counterexample.max(z.size());
        let mut ids = Vec::with_capacity(z.size());
        for v in 0..z.size() {
            let ch: Vec<NodeId> = z.children(v).iter().map(|&c| ids[c]).collect();
            ids.push(self.pool.intern(z.label(v), &ch));
        }
        let run = h.run_dag(z)?;
        let n = h.dim();
        for v in z.nodes_by_height() {
            let actual = self.row(teacher, ids[v])?;
            let state = &run.states[v];
            let rank = self.alphabet.label_rank(z.label(v));
            self.stats.operations += (n.pow(rank as u32) * n + n * self.y.len()) as u64;
            for (j, got) in actual.iter().enumerate() {
                let mut predicted = self.field.zero();
                for (i, row) in self.h.iter().enumerate() {
                    predicted.add_mul_assign(&state[i], &row[j]);
                }
                if *got != predicted {
                    let Label::Sym(symbol) = z.label(v) else { unreachable!("validated as a tree") };
                    let children = z.children(v).iter().map(|&c| ids[c]).collect();
                    return Ok(BadSubtree { symbol, children, column: j });
                }
            }
        }
        Err(LearnError::Inconsistent(
            "no sub-DAG of the counterexample has a mispredicted Hankel row, so it is not a counterexample under the membership answers".into(),
        ))
    }

    /// Steps 3.2–3.3: add the columns `c[σ(t_{i₁},…,t_{i_{j-1}}, □, τ_{j+1},…,τ_k)]`,
    /// then each `τ_j` whose row leaves the span. A nullary bad node has no
    /// children, so the node itself is offered instead. Returns how many rows
    /// were added; an honest teacher's counterexample always yields one.
    pub fn absorb<T: Teacher + ?Sized>(&mut self, teacher: &mut T, found: &BadSubtree) -> Result<usize, LearnError> {
        let n = self.n();
        let k = found.children.len();
        let c = self.y[found.column];
        let hole = self.y[0];
        let mut new_columns = Vec::new();
        for j in 0..k {
            for tuple in tuples(j, n) {
                let mut children: Vec<NodeId> = tuple.iter().map(|&i| self.x[i]).collect();
                children.push(hole);
                children.extend_from_slice(&found.children[j + 1..]);
                let inner = self.pool.intern(Label::Sym(found.symbol), &children);
                let col = self.pool.substitute(c, inner)?;
                if self.y_seen.insert(col) {
                    new_columns.push(col);
                }
            }
        }
        if !new_columns.is_empty() {
            self.y.extend(new_columns);
            self.closed.clear();
            for i in 0..n {
                self.h[i] = self.row(teacher, self.x[i])?;
            }
            // independence on a subset of columns survives adding columns
            self.basis = RowBasis::from_independent_rows(self.field, self.y.len(), self.h.iter().cloned()).expect("extended rows stay independent");
        }
        let mut added = 0;
        let offered: Vec<NodeId> = if k == 0 {
            let leaf = self.pool.intern(Label::Sym(found.symbol), &[]);
            vec![leaf]
        } else {
            found.children.clone()
        };
        for t in offered {
            added += usize::from(self.try_add_row(teacher, t)?);
        }
        debug_assert_eq!(self.hankel_block().rank(), self.n(), "H_XY lost full row rank");
        Ok(added)
    }
}

/// All tuples in `[0, bound)^k`, lexicographically.
fn tuples(k: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_tuple(k, bound, |t| out.push(t.to_vec()));
    out
}

/// First 16 hex digits of the SHA-256 of the canonical `.dag` text.
pub fn dag_hash(g: &Dag, alphabet: &RankedAlphabet) -> String {
    let digest = Sha256::digest(write_dag(g, alphabet).as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}
