use super::{Gate, NormalizedCircuit};
use crate::algebra::{Field, Matrix};
use crate::automaton::Mta;
use crate::trees::{Dag, Label, RankedAlphabet};

pub const SIGMA0: usize = 0;
pub const SIGMA1: usize = 1;
pub const SIGMA2: usize = 2;

/// `s0/0, s1/1, s2/2`.
pub fn acit_alphabet() -> RankedAlphabet {
    RankedAlphabet::new([("s0", 0), ("s1", 1), ("s2", 2)]).expect("valid alphabet")
}

/// `t_h` as a DAG of `h + 1` nodes: `t_0 = s0`, then `s2(t, t)` on the way to
/// an odd height and `s1(t)` on the way to an even one.
pub fn canonical_tree(h: usize) -> Dag {
    let mut nodes = vec![(Label::Sym(SIGMA0), vec![])];
    for i in 1..=h {
        let below = i - 1;
        nodes.push(if i % 2 == 1 { (Label::Sym(SIGMA2), vec![below, below]) } else { (Label::Sym(SIGMA1), vec![below]) });
    }
    Dag::from_nodes(&nodes, h).expect("chain is topologically ordered")
}

/// One state per gate. `s0` loads the inputs, `s1` adds the two child
/// states of each `+` gate, `s2` multiplies them for each `×` gate, and the
/// final vector reads the output gate. State `i` of `t_{height(i)}` is the
/// value of gate `i`, and every tree other than `t_h` has weight 0.
pub fn acit_to_mta(c: &NormalizedCircuit) -> Mta {
    let q = Field::Rational;
    let circuit = c.circuit();
    let r = circuit.len();
    let mut leaf = Matrix::zeros(q, 1, r);
    let mut unary = Matrix::zeros(q, r, r);
    let mut binary = Matrix::zeros(q, r * r, r);
    for (i, gate) in circuit.gates().iter().enumerate() {
        match *gate {
            Gate::One => leaf.set(0, i, q.one()),
            Gate::Zero => {}
            Gate::Add(j1, j2) => {
                if j1 == j2 {
                    unary.set(j1, i, q.from_i64(2));
                } else {
                    unary.set(j1, i, q.one());
                    unary.set(j2, i, q.one());
                }
            }
            Gate::Mul(j1, j2) => binary.set(j1 * r + j2, i, q.one()),
            Gate::Var(_) | Gate::Sub(..) => unreachable!("normalized circuits are variable-free and subtraction-free"),
        }
    }
    let mut gamma = vec![q.zero(); r];
    gamma[circuit.output()] = q.one();
    Mta::new(q, r, acit_alphabet(), vec![leaf, unary, binary], gamma).expect("shapes follow the gate count")
}

/// Automata for two circuits, padded to a common output height so that both
/// read their value off the same tree.
pub fn acit_pair_to_mta(c1: &NormalizedCircuit, c2: &NormalizedCircuit) -> (Mta, Mta) {
    let h = c1.height().max(c2.height());
    (acit_to_mta(&c1.padded(h)), acit_to_mta(&c2.padded(h)))
}

#[cfg(test)]
mod tests {
    use super::super::{eval_exact, normalize_circuit, random_circuit, Circuit, DEFAULT_BIT_BOUND};
    use super::*;
    use crate::equivalence::check_equiv;
    use crate::trees::{parse_tree, random_tree, Tree};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn value(c: &Circuit) -> crate::algebra::Scalar {
        Field::Rational.from_bigint(&eval_exact(c, &[], DEFAULT_BIT_BOUND).unwrap())
    }

    #[test]
    fn two_from_relayed_ones() {
        let c = normalize_circuit(&Circuit::new(vec![Gate::One, Gate::Add(0, 0)], 1).unwrap()).unwrap();
        let a = acit_to_mta(&c);
        let t2 = parse_tree("s1(s2(s0,s0))", a.alphabet()).unwrap();
        assert_eq!(canonical_tree(2), Dag::from_tree(&t2));
        assert_eq!(a.weight_tree(&t2).unwrap(), Field::Rational.from_i64(2));
        // the + gate has the same child twice
        assert_eq!(a.transition(SIGMA1).get(1, 2).to_string(), "2");
    }

    /// `t_h` with one random subtree replaced by a random tree.
    fn near_miss(h: usize, alphabet: &RankedAlphabet, rng: &mut impl Rng) -> Tree {
        let t = canonical_tree(h).unfold(1 << 16).unwrap();
        fn replace(t: &Tree, depth: usize, alphabet: &RankedAlphabet, budget: usize, rng: &mut impl Rng) -> Tree {
            if depth == 0 || t.children().is_empty() {
                return random_tree(alphabet, budget, rng);
            }
            let k = rng.random_range(0..t.children().len());
            let mut children = t.children().to_vec();
            children[k] = replace(&children[k], depth - 1, alphabet, budget.saturating_sub(1), rng);
            Tree::new(t.label(), children)
        }
        let depth = rng.random_range(0..=h);
        replace(&t, depth, alphabet, h + 1, rng)
    }

    #[test]
    fn weight_is_the_value_on_t_h_and_zero_elsewhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let alphabet = acit_alphabet();
        for _ in 0..20 {
            let c = normalize_circuit(&random_circuit(&mut rng, 10, 3, false)).unwrap();
            let a = acit_to_mta(&c);
            let h = c.height();
            let th = canonical_tree(h);
            assert_eq!(a.weight(&th).unwrap(), value(c.circuit()));
            for _ in 0..50 {
                let t = if rng.random_bool(0.5) { random_tree(&alphabet, h + 1, &mut rng) } else { near_miss(h, &alphabet, &mut rng) };
                if Dag::from_tree(&t) != th {
                    assert!(a.weight_tree(&t).unwrap().is_zero(), "nonzero off t_h");
                }
            }
        }
    }

    #[test]
    fn equivalence_iff_equal_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut equal = 0;
        for _ in 0..40 {
            let c1 = normalize_circuit(&random_circuit(&mut rng, 6, 3, false)).unwrap();
            let c2 = normalize_circuit(&random_circuit(&mut rng, 6, 3, false)).unwrap();
            let (a1, a2) = acit_pair_to_mta(&c1, &c2);
            let same = value(c1.circuit()) == value(c2.circuit());
            equal += usize::from(same);
            assert_eq!(check_equiv(&a1, &a2).unwrap().is_equivalent(), same);
        }
        assert!(equal > 0);
    }
}
