//! Ranked alphabets, explicit trees and contexts, and hash-consed DAGs.

mod dag;
mod enumerate;
pub mod fixtures;
mod format;
mod tree;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::text::ParseError;

pub use dag::{concat, Dag, DagPool, NodeId, DEFAULT_UNFOLD_BOUND};
pub use enumerate::{enumerate_dags, random_tree, trees_below_height};
pub(crate) use enumerate::for_each_tuple;
pub use format::{parse_dag, parse_tree, write_dag};
pub use tree::{Tree, TreeStats};

/// Reserved name of the context hole in text formats.
pub const HOLE_NAME: &str = "_";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreesError {
    #[error("unfolding has {size} nodes, above the bound of {bound}")]
    UnfoldBound { size: String, bound: usize },
    #[error("not a context: {0}")]
    NotContext(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` has rank {expected} but {found} children")]
    Arity { symbol: String, expected: usize, found: usize },
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("enumeration exceeds the budget of {0} items")]
    Budget(usize),
    #[error("node {node} refers to successor {succ}, which is not an earlier node")]
    NotTopological { node: usize, succ: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A node label: an alphabet symbol by index, or the context hole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Sym(usize),
    Hole,
}

impl Label {
    pub fn symbol(self) -> Option<usize> {
        match self {
            Label::Sym(s) => Some(s),
            Label::Hole => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub rank: usize,
}

/// Symbols in declaration order; trees refer to them by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedAlphabet {
    symbols: Vec<Symbol>,
    index: HashMap<String, usize>,
}

impl RankedAlphabet {
    /// Names must be unique, non-empty, free of whitespace, parentheses and
    /// commas, and differ from the hole name; some symbol must be nullary.
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<RankedAlphabet, TreesError> {
        let mut out = RankedAlphabet { symbols: Vec::new(), index: HashMap::new() };
        for (name, rank) in symbols {
            let name = name.into();
            if name.is_empty() || name == HOLE_NAME || name.chars().any(|c| c.is_whitespace() || "(),#".contains(c)) {
                return Err(TreesError::Alphabet(format!("`{name}` is not a valid symbol name")));
            }
            if out.index.contains_key(&name) {
                return Err(TreesError::Alphabet(format!("duplicate symbol `{name}`")));
            }
            out.index.insert(name.clone(), out.symbols.len());
            out.symbols.push(Symbol { name, rank });
        }
        if !out.symbols.iter().any(|s| s.rank == 0) {
            return Err(TreesError::Alphabet("no nullary symbol".into()));
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn rank(&self, symbol: usize) -> usize {
        self.symbols[symbol].rank
    }

    pub fn name(&self, symbol: usize) -> &str {
        &self.symbols[symbol].name
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The largest symbol rank.
    pub fn max_rank(&self) -> usize {
        self.symbols.iter().map(|s| s.rank).max().unwrap_or(0)
    }

    pub fn label_rank(&self, label: Label) -> usize {
        match label {
            Label::Sym(s) => self.rank(s),
            Label::Hole => 0,
        }
    }

    pub fn label_name(&self, label: Label) -> &str {
        match label {
            Label::Sym(s) => self.name(s),
            Label::Hole => HOLE_NAME,
        }
    }

    pub fn parse_label(&self, name: &str) -> Option<Label> {
        if name == HOLE_NAME {
            Some(Label::Hole)
        } else {
            self.lookup(name).map(Label::Sym)
        }
    }
}

impl fmt::Display for RankedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}/{}", s.name, s.rank)?;
        }
        Ok(())
    }
}
