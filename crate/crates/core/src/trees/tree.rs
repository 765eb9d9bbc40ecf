use std::fmt;

use super::{Label, RankedAlphabet, TreesError};

/// An explicit tree; with exactly one [`Label::Hole`] leaf it is a context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    label: Label,
    children: Vec<Tree>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeStats {
    pub height: usize,
    pub size: usize,
    /// Occurrences per alphabet symbol, by symbol index.
    pub symbol_counts: Vec<usize>,
    pub holes: usize,
}

impl Tree {
    pub fn new(label: Label, children: Vec<Tree>) -> Tree {
        Tree { label, children }
    }

    pub fn leaf(symbol: usize) -> Tree {
        Tree { label: Label::Sym(symbol), children: Vec::new() }
    }

    pub fn node(symbol: usize, children: Vec<Tree>) -> Tree {
        Tree { label: Label::Sym(symbol), children }
    }

    pub fn hole() -> Tree {
        Tree { label: Label::Hole, children: Vec::new() }
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    /// Checks every arity against the alphabet.
    pub fn validate(&self, alphabet: &RankedAlphabet) -> Result<(), TreesError> {
        if let Label::Sym(s) = self.label {
            if s >= alphabet.len() {
                return Err(TreesError::UnknownSymbol(format!("#{s}")));
            }
        }
        let expected = alphabet.label_rank(self.label);
        if expected != self.children.len() {
            return Err(TreesError::Arity {
                symbol: alphabet.label_name(self.label).to_string(),
                expected,
                found: self.children.len(),
            });
        }
        self.children.iter().try_for_each(|c| c.validate(alphabet))
    }

    /// Height (leaves have height 0), size, and per-symbol counts.
    pub fn stats(&self, alphabet: &RankedAlphabet) -> TreeStats {
        let mut stats = TreeStats { height: 0, size: 0, symbol_counts: vec![0; alphabet.len()], holes: 0 };
        self.accumulate(&mut stats);
        stats.height = self.height();
        stats
    }

    fn accumulate(&self, stats: &mut TreeStats) {
        stats.size += 1;
        match self.label {
            Label::Sym(s) => stats.symbol_counts[s] += 1,
            Label::Hole => stats.holes += 1,
        }
        for c in &self.children {
            c.accumulate(stats);
        }
    }

    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    pub fn holes(&self) -> usize {
        usize::from(self.label == Label::Hole) + self.children.iter().map(Tree::holes).sum::<usize>()
    }

    pub fn is_context(&self) -> bool {
        self.holes() == 1
    }

    /// `c[t]`: replaces every hole by `t`.
    pub fn substitute(&self, t: &Tree) -> Tree {
        match self.label {
            Label::Hole => t.clone(),
            label => Tree { label, children: self.children.iter().map(|c| c.substitute(t)).collect() },
        }
    }

    /// All subtrees, each listed once per occurrence, in pre-order.
    pub fn subtrees(&self) -> Vec<&Tree> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.subtrees());
        }
        out
    }

    pub fn display<'a>(&'a self, alphabet: &'a RankedAlphabet) -> impl fmt::Display + 'a {
        DisplayTree { tree: self, alphabet }
    }
}

struct DisplayTree<'a> {
    tree: &'a Tree,
    alphabet: &'a RankedAlphabet,
}

impl fmt::Display for DisplayTree<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.alphabet.label_name(self.tree.label))?;
        if !self.tree.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.tree.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", DisplayTree { tree: c, alphabet: self.alphabet })?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::fixtures;

    fn sigma() -> RankedAlphabet {
        RankedAlphabet::new([("a", 0), ("g", 1), ("f", 2)]).unwrap()
    }

    #[test]
    fn leaf_stats() {
        let s = Tree::leaf(0).stats(&sigma());
        assert_eq!((s.height, s.size), (0, 1));
    }

    #[test]
    fn unary_over_leaf_counts() {
        let s = Tree::node(1, vec![Tree::leaf(0)]).stats(&sigma());
        assert_eq!(s.symbol_counts, vec![1, 1, 0]);
    }

    /// Oracle: the recursive definitions written out for the perfect binary tree.
    fn perfect_stats(n: u32) -> (usize, usize, usize) {
        match n {
            1 => (0, 1, 0),
            _ => {
                let (h, s, c) = perfect_stats(n - 1);
                (h + 1, 1 + 2 * s, 1 + 2 * c)
            }
        }
    }

    #[test]
    fn perfect_binary_tree_stats() {
        let alphabet = fixtures::example_alphabet();
        for n in 1..=6 {
            let t = fixtures::perfect_tree(n);
            let s = t.stats(&alphabet);
            let (h, size, binary) = perfect_stats(n as u32);
            assert_eq!((s.height, s.size, s.symbol_counts[1]), (h, size, binary));
        }
        let s = fixtures::perfect_tree(3).stats(&alphabet);
        assert_eq!((s.height, s.size, s.symbol_counts[1]), (2, 7, 3));
    }

    #[test]
    fn substitution_and_validation() {
        let alphabet = sigma();
        let c = Tree::node(2, vec![Tree::hole(), Tree::leaf(0)]);
        assert!(c.is_context());
        assert!(c.validate(&alphabet).is_ok());
        let t = c.substitute(&Tree::leaf(0));
        assert_eq!(t.display(&alphabet).to_string(), "f(a,a)");
        assert!(!t.is_context());
        let bad = Tree::node(2, vec![Tree::leaf(0)]);
        assert!(matches!(bad.validate(&alphabet), Err(TreesError::Arity { expected: 2, found: 1, .. })));
    }
}
