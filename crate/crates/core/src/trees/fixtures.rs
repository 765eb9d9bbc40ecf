//! The perfect binary trees `t_n` and their chain DAGs `G_n`.
//!
//! Both live over [`example_alphabet`]: `s0` (nullary, index 0) and `s2`
//! (binary, index 1).

use super::{Dag, Label, RankedAlphabet, Tree};

pub const S0: usize = 0;
pub const S2: usize = 1;

pub fn example_alphabet() -> RankedAlphabet {
    RankedAlphabet::new([("s0", 0), ("s2", 2)]).expect("valid alphabet")
}

/// `t_n`: the perfect binary tree of height `n - 1`, with `2^n - 1` nodes.
pub fn perfect_tree(n: usize) -> Tree {
    assert!(n >= 1, "t_n is defined for n >= 1");
    let mut t = Tree::leaf(S0);
    for _ in 1..n {
        t = Tree::node(S2, vec![t.clone(), t]);
    }
    t
}

/// `G_n`: `n` nodes, each binary node pointing twice at the one below.
pub fn chain_dag(n: usize) -> Dag {
    assert!(n >= 1, "G_n is defined for n >= 1");
    let mut nodes = vec![(Label::Sym(S0), vec![])];
    for i in 1..n {
        nodes.push((Label::Sym(S2), vec![i - 1, i - 1]));
    }
    Dag::from_nodes(&nodes, n - 1).expect("chain is topologically ordered")
}
