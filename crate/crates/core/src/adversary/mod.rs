//! A family of `2n`-state automata that forces any learner to spend one
//! query per unknown transition entry, and a teacher that plays it.
//!
//! With `σ₀` nullary and `σ₁` unary, every other ("heavy") symbol `σ` of
//! rank `k` carries a free matrix `B(σ) ∈ F^{n^k × n}`. The series is 1 on
//! `σ₁^j(σ₀)` for `n | j` and 0 on other heavy-free trees, equals one entry
//! of `B(σ)` on trees with a single heavy node, and vanishes on the rest.

mod teacher;

use thiserror::Error;

use crate::algebra::{Field, Matrix, Scalar};
use crate::automaton::{pow, Mta};
use crate::trees::{Dag, Label, RankedAlphabet, Tree, TreesError};

pub use teacher::{adversarial_teacher, AdversarialTeacher};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("the alphabet needs a nullary symbol")]
    NoNullary,
    #[error("the alphabet needs a unary symbol")]
    NoUnary,
    #[error("n must be positive")]
    EmptyBlock,
    #[error("B(`{symbol}`) must be {rows}x{cols}")]
    Shape { symbol: String, rows: usize, cols: usize },
    #[error("`{0}` is not a heavy symbol")]
    NotHeavy(String),
    #[error("input contains a context hole")]
    Hole,
    #[error(transparent)]
    Trees(#[from] TreesError),
}

/// Shape of the family: block size `n`, the alphabet, and which symbols
/// play `σ₀` and `σ₁` (the first nullary and the first unary one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardFamily {
    n: usize,
    alphabet: RankedAlphabet,
    sigma0: usize,
    sigma1: usize,
}

impl HardFamily {
    pub fn new(n: usize, alphabet: RankedAlphabet) -> Result<HardFamily, AdversaryError> {
        if n == 0 {
            return Err(AdversaryError::EmptyBlock);
        }
        let first = |rank| (0..alphabet.len()).find(|&s| alphabet.rank(s) == rank);
        let sigma0 = first(0).ok_or(AdversaryError::NoNullary)?;
        let sigma1 = first(1).ok_or(AdversaryError::NoUnary)?;
        Ok(HardFamily { n, alphabet, sigma0, sigma1 })
    }

    /// Alphabet `s0/0, s1/1` followed by the given heavy symbols.
    pub fn with_heavy(n: usize, heavy: &[(&str, usize)]) -> Result<HardFamily, AdversaryError> {
        let symbols = [("s0", 0), ("s1", 1)].into_iter().chain(heavy.iter().copied());
        HardFamily::new(n, RankedAlphabet::new(symbols)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn sigma0(&self) -> usize {
        self.sigma0
    }

    pub fn sigma1(&self) -> usize {
        self.sigma1
    }

    pub fn is_heavy(&self, s: usize) -> bool {
        s != self.sigma0 && s != self.sigma1
    }

    pub fn heavy_symbols(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.alphabet.len()).filter(|&s| self.is_heavy(s))
    }

    /// `Σ_{heavy σ} n^{rk(σ)+1}`, the number of free entries.
    pub fn entry_count(&self) -> usize {
        self.heavy_symbols().map(|s| pow(self.n, self.alphabet.rank(s) + 1)).sum()
    }

    /// `σ₁^j(σ(σ₁^{i₁}(σ₀), …, σ₁^{i_k}(σ₀)))` with shared chains.
    pub fn pattern_tree(&self, j: usize, symbol: usize, exps: &[usize]) -> Dag {
        // node i is σ₁^i(σ₀) below the heavy node
        let mut nodes = Vec::new();
        if let Some(&longest) = exps.iter().max() {
            nodes.push((Label::Sym(self.sigma0), vec![]));
            for i in 1..=longest {
                nodes.push((Label::Sym(self.sigma1), vec![i - 1]));
            }
        }
        nodes.push((Label::Sym(symbol), exps.to_vec()));
        for _ in 0..j {
            let below = nodes.len() - 1;
            nodes.push((Label::Sym(self.sigma1), vec![below]));
        }
        let root = nodes.len() - 1;
        Dag::from_nodes(&nodes, root).expect("chains are built bottom-up")
    }

    /// Splits `t` by its heavy nodes; see [`Pattern`].
    pub fn classify(&self, g: &Dag) -> Result<Pattern, AdversaryError> {
        g.validate(&self.alphabet)?;
        // per node: heavy count capped at 2, and σ₁ nodes above σ₀ or above
        // the single heavy node
        let mut heavy = vec![0u8; g.size()];
        let mut lift = vec![0usize; g.size()];
        let mut single: Vec<Option<NodeRef>> = vec![None; g.size()];
        for v in 0..g.size() {
            let Label::Sym(s) = g.label(v) else { return Err(AdversaryError::Hole) };
            let ch = g.children(v);
            if s == self.sigma0 {
                continue;
            }
            if s == self.sigma1 {
                heavy[v] = heavy[ch[0]];
                lift[v] = lift[ch[0]] + 1;
                single[v] = single[ch[0]];
                continue;
            }
            let below: u8 = ch.iter().map(|&c| heavy[c]).sum();
            heavy[v] = (1 + below).min(2);
            if heavy[v] == 1 {
                single[v] = Some(NodeRef(v));
            }
        }
        let root = g.root();
        Ok(match heavy[root] {
            0 => Pattern::Chain(lift[root] % self.n),
            1 => {
                let NodeRef(v) = single[root].expect("set with the count");
                let Label::Sym(symbol) = g.label(v) else { unreachable!() };
                let row = g.children(v).iter().fold(0, |acc, &c| acc * self.n + lift[c] % self.n);
                let column = (self.n - lift[root] % self.n) % self.n;
                Pattern::Entry { symbol, row, column }
            }
            _ => Pattern::Vanishing,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct NodeRef(usize);

/// The three shapes a tree can take in the family, indices reduced mod `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// `σ₁^j(σ₀)` with `j mod n` given; value 1 iff it is 0.
    Chain(usize),
    /// `σ₁^j(σ(σ₁^{i₁}(σ₀), …))`; value `B(σ)[row][column]` with
    /// `row = Σ (i_l mod n) n^{k-l}` and `column = (n - j mod n) mod n`,
    /// both 0-based.
    Entry { symbol: usize, row: usize, column: usize },
    /// Two or more heavy nodes; value 0.
    Vanishing,
}

/// One member of the family: a `B(σ)` for each heavy symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardInstance {
    family: HardFamily,
    field: Field,
    /// Indexed by symbol; `None` exactly at `σ₀` and `σ₁`.
    b: Vec<Option<Matrix>>,
}

impl HardInstance {
    /// `b` lists `(heavy symbol, B(σ))`; every heavy symbol must appear once.
    pub fn new(family: HardFamily, field: Field, b: Vec<(usize, Matrix)>) -> Result<HardInstance, AdversaryError> {
        let mut slots: Vec<Option<Matrix>> = vec![None; family.alphabet.len()];
        for (s, m) in b {
            if !family.is_heavy(s) {
                return Err(AdversaryError::NotHeavy(family.alphabet.name(s).to_string()));
            }
            let (rows, cols) = (pow(family.n, family.alphabet.rank(s)), family.n);
            if m.shape() != (rows, cols) || m.field() != field {
                return Err(AdversaryError::Shape { symbol: family.alphabet.name(s).to_string(), rows, cols });
            }
            slots[s] = Some(m);
        }
        for s in family.heavy_symbols() {
            if slots[s].is_none() {
                let (rows, cols) = (pow(family.n, family.alphabet.rank(s)), family.n);
                return Err(AdversaryError::Shape { symbol: family.alphabet.name(s).to_string(), rows, cols });
            }
        }
        Ok(HardInstance { family, field, b: slots })
    }

    pub fn family(&self) -> &HardFamily {
        &self.family
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn b(&self, symbol: usize) -> &Matrix {
        self.b[symbol].as_ref().expect("heavy symbol")
    }
}

/// `μ(σ₀) = [1 0] ⊗ e₁`, `μ(σ₁) = I₂ ⊗ P`,
/// `μ(σ) = [1 1] ⊗ ([I; -I]^{⊗k} · B(σ))`, `γ = [1 0]ᵀ ⊗ e₁ᵀ`, where `P`
/// is the cycle `e_i P = e_{i+1 mod n}`.
pub fn build_hard_automaton(inst: &HardInstance) -> Mta {
    let f = inst.field;
    let fam = &inst.family;
    let (n, r) = (fam.n, fam.dim());
    let transitions = (0..fam.alphabet.len())
        .map(|s| {
            if s == fam.sigma0 {
                let mut m = Matrix::zeros(f, 1, r);
                m.set(0, 0, f.one());
                return m;
            }
            if s == fam.sigma1 {
                let mut m = Matrix::zeros(f, r, r);
                for block in 0..2 {
                    for i in 0..n {
                        m.set(block * n + i, block * n + (i + 1) % n, f.one());
                    }
                }
                return m;
            }
            let k = fam.alphabet.rank(s);
            let b = inst.b(s);
            // row of [I; -I]^{⊗k}·B: base-2n digits d pick row Σ (d mod n)
            // of B with sign (-1)^{#digits ≥ n}
            Matrix::from_fn(f, pow(r, k), r, |row, col| {
                let (mut rest, mut b_row, mut negative) = (row, 0, false);
                let mut scale = 1;
                for _ in 0..k {
                    let d = rest % r;
                    rest /= r;
                    b_row += (d % n) * scale;
                    scale *= n;
                    negative ^= d >= n;
                }
                let x = b.get(b_row, col % n).clone();
                if negative {
                    -&x
                } else {
                    x
                }
            })
        })
        .collect();
    let mut gamma = vec![f.zero(); r];
    gamma[0] = f.one();
    Mta::new(f, r, fam.alphabet.clone(), transitions, gamma).expect("shapes follow n and the ranks")
}

/// The series of the family member, by the shape of `t` alone.
pub fn hard_series_value(inst: &HardInstance, t: &Tree) -> Result<Scalar, AdversaryError> {
    t.validate(&inst.family.alphabet)?;
    if t.is_context() {
        return Err(AdversaryError::Hole);
    }
    Ok(pattern_value(inst, inst.family.classify(&Dag::from_tree(t))?))
}

fn pattern_value(inst: &HardInstance, p: Pattern) -> Scalar {
    match p {
        Pattern::Chain(0) => inst.field.one(),
        Pattern::Chain(_) | Pattern::Vanishing => inst.field.zero(),
        Pattern::Entry { symbol, row, column } => inst.b(symbol).get(row, column).clone(),
    }
}

/// `⌊(Σ_σ r^{rk(σ)+1} − r² − r) / 2^{m+1}⌋`, at least 0, for dimension `r`
/// and alphabet rank `m`.
pub fn query_lower_bound(alphabet: &RankedAlphabet, r: usize) -> u128 {
    let r = r as u128;
    let total: u128 = alphabet.symbols().iter().map(|s| r.pow(s.rank as u32 + 1)).sum();
    let m = alphabet.max_rank() as u32;
    total.saturating_sub(r * r + r) >> (m + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{parse_tree, trees_below_height, DagPool, NodeId};
    use std::collections::HashMap;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;

    fn instance(family: HardFamily, rng: &mut impl Rng) -> HardInstance {
        let b = family
            .heavy_symbols()
            .map(|s| {
                let rows = pow(family.n(), family.alphabet().rank(s));
                (s, Matrix::from_fn(Q, rows, family.n(), |_, _| Q.from_i64(rng.random_range(-9..=9))))
            })
            .collect();
        HardInstance::new(family, Q, b).unwrap()
    }

    /// `P` from its definition, then `I₂ ⊗ P` by the generic Kronecker product.
    #[test]
    fn unary_block_is_i2_kron_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            let inst = instance(HardFamily::with_heavy(n, &[("f", 2)]).unwrap(), &mut rng);
            let a = build_hard_automaton(&inst);
            let p = Matrix::from_fn(Q, n, n, |i, j| if j == (i + 1) % n { Q.one() } else { Q.zero() });
            assert_eq!(a.transition(1), &Matrix::identity(Q, 2).kron(&p).unwrap());
        }
    }

    #[test]
    fn small_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let inst = instance(HardFamily::with_heavy(2, &[("f", 2)]).unwrap(), &mut rng);
        let a = build_hard_automaton(&inst);
        let al = inst.family().alphabet().clone();
        let w = |s: &str| a.weight_tree(&parse_tree(s, &al).unwrap()).unwrap();
        assert_eq!(w("s0"), Q.one());
        assert_eq!(w("s1(s0)"), Q.zero());
        assert_eq!(w("s1(s1(s0))"), Q.one());
        assert_eq!(w("f(s0,s0)"), inst.b(2).get(0, 0).clone());
        // j = 1, (i₁, i₂) = (0, 1): 1-based row (1,2) and column 2
        assert_eq!(w("s1(f(s0,s1(s0)))"), inst.b(2).get(1, 1).clone());
        assert_eq!(w("f(f(s0,s0),s0)"), Q.zero());
    }

    #[test]
    fn closed_form_matches_the_automaton() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cases: [(&[(&str, usize)], usize); 2] = [(&[("f", 2)], 5), (&[("c", 0), ("g", 1), ("f", 2)], 4)];
        for n in 1..=3 {
            for (heavy, bound) in cases {
                let inst = instance(HardFamily::with_heavy(n, heavy).unwrap(), &mut rng);
                let a = build_hard_automaton(&inst);
                // states memoized per shared subtree
                let mut pool = DagPool::new();
                let mut states: HashMap<NodeId, Vec<Scalar>> = HashMap::new();
                for t in trees_below_height(inst.family().alphabet(), bound, 1 << 20).unwrap() {
                    let id = pool.import_tree(&t);
                    let state = state_of(&a, &pool, id, &mut states);
                    assert_eq!(hard_series_value(&inst, &t).unwrap(), a.output(&state));
                }
            }
        }
    }

    fn state_of(a: &Mta, pool: &DagPool, id: NodeId, memo: &mut HashMap<NodeId, Vec<Scalar>>) -> Vec<Scalar> {
        if let Some(s) = memo.get(&id) {
            return s.clone();
        }
        let children: Vec<Vec<Scalar>> = pool.children(id).iter().map(|&c| state_of(a, pool, c, memo)).collect();
        let refs: Vec<&[Scalar]> = children.iter().map(Vec::as_slice).collect();
        let s = a.apply(pool.label(id).symbol().unwrap(), &refs);
        memo.insert(id, s.clone());
        s
    }

    #[test]
    fn pattern_trees_hit_their_entry() {
        let fam = HardFamily::with_heavy(3, &[("f", 2), ("g", 1)]).unwrap();
        let g = fam.pattern_tree(2, 2, &[1, 2]);
        assert_eq!(g.size(), 6);
        assert_eq!(fam.classify(&g).unwrap(), Pattern::Entry { symbol: 2, row: 5, column: 1 });
        // j = n lands on column 0
        assert_eq!(fam.classify(&fam.pattern_tree(3, 3, &[0])).unwrap(), Pattern::Entry { symbol: 3, row: 0, column: 0 });
    }

    #[test]
    fn lower_bound_values() {
        let al = HardFamily::with_heavy(1, &[("s2", 2)]).unwrap().alphabet().clone();
        assert_eq!(query_lower_bound(&al, 2), 1);
        assert_eq!(query_lower_bound(&al, 4), 8);
        let bare = HardFamily::with_heavy(1, &[]).unwrap().alphabet().clone();
        assert_eq!(query_lower_bound(&bare, 4), 0);
    }

    #[test]
    fn family_needs_a_unary_symbol() {
        let al = RankedAlphabet::new([("a", 0), ("f", 2)]).unwrap();
        assert_eq!(HardFamily::new(2, al), Err(AdversaryError::NoUnary));
    }
}
