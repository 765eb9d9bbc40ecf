//! The `.dag` text format and a term syntax for trees.
//!
//! ```text
//! node 0 a
//! node 1 f 0 0
//! root 1
//! ```
//!
//! Nodes come in topological order (successors first); ids are arbitrary
//! distinct integers. The label `_` marks a context hole.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Dag, Label, NodeId, RankedAlphabet, Tree};
use crate::text::{LineCursor, ParseError};

pub fn parse_dag(input: &str, alphabet: &RankedAlphabet) -> Result<Dag, ParseError> {
    let mut cursor = LineCursor::new(input);
    let mut nodes: Vec<(Label, Vec<NodeId>)> = Vec::new();
    let mut ids: HashMap<usize, NodeId> = HashMap::new();
    loop {
        let line = cursor.next_line("`node` or `root`")?;
        match line.keyword() {
            "node" => {
                let id_tok = line.arg(1, "node id")?;
                let id = id_tok.parse_usize()?;
                if ids.contains_key(&id) {
                    return Err(id_tok.error(format!("duplicate node id {id}")));
                }
                let label_tok = line.arg(2, "node label")?;
                let label = alphabet.parse_label(label_tok.text).ok_or_else(|| label_tok.error(format!("unknown symbol `{}`", label_tok.text)))?;
                let rank = alphabet.label_rank(label);
                let succ_toks = &line.tokens[3..];
                if succ_toks.len() != rank {
                    let at = succ_toks.get(rank).copied().unwrap_or(label_tok);
                    return Err(at.error(format!("`{}` has rank {rank} but {} successors are listed", label_tok.text, succ_toks.len())));
                }
                let mut succ = Vec::with_capacity(rank);
                for tok in succ_toks {
                    let s = tok.parse_usize()?;
                    match ids.get(&s) {
                        Some(&internal) => succ.push(internal),
                        None => return Err(tok.error(format!("successor {s} is not an earlier node (nodes must be listed successors first; cycles are not allowed)"))),
                    }
                }
                ids.insert(id, nodes.len());
                nodes.push((label, succ));
            }
            "root" => {
                line.expect_len(2)?;
                let tok = line.arg(1, "root id")?;
                let r = tok.parse_usize()?;
                let &root = ids.get(&r).ok_or_else(|| tok.error(format!("undefined node {r}")))?;
                cursor.finish()?;
                return Dag::from_nodes(&nodes, root).map_err(|e| tok.error(e.to_string()));
            }
            other => return Err(line.tokens[0].error(format!("unknown directive `{other}`"))),
        }
    }
}

/// Writes `dag` with ids equal to its canonical node numbers.
pub fn write_dag(dag: &Dag, alphabet: &RankedAlphabet) -> String {
    let mut out = String::new();
    for v in 0..dag.size() {
        write!(out, "node {v} {}", alphabet.label_name(dag.label(v))).unwrap();
        for c in dag.children(v) {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "root {}", dag.root()).unwrap();
    out
}

/// Parses the term syntax `f(a,g(a))`, with `_` for a hole.
pub fn parse_tree(input: &str, alphabet: &RankedAlphabet) -> Result<Tree, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut pos = 0;
    let t = parse_term(&chars, &mut pos, alphabet)?;
    skip_ws(&chars, &mut pos);
    if pos < chars.len() {
        return Err(term_error(pos, format!("unexpected `{}`", chars[pos])));
    }
    Ok(t)
}

fn term_error(pos: usize, message: String) -> ParseError {
    ParseError { line: 1, column: pos + 1, message }
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_term(chars: &[char], pos: &mut usize, alphabet: &RankedAlphabet) -> Result<Tree, ParseError> {
    skip_ws(chars, pos);
    let start = *pos;
    while *pos < chars.len() && !chars[*pos].is_whitespace() && !"(),".contains(chars[*pos]) {
        *pos += 1;
    }
    let name: String = chars[start..*pos].iter().collect();
    if name.is_empty() {
        return Err(term_error(start, "expected a symbol".into()));
    }
    let label = alphabet.parse_label(&name).ok_or_else(|| term_error(start, format!("unknown symbol `{name}`")))?;
    let rank = alphabet.label_rank(label);
    skip_ws(chars, pos);
    let mut children = Vec::new();
    if *pos < chars.len() && chars[*pos] == '(' {
        *pos += 1;
        loop {
            children.push(parse_term(chars, pos, alphabet)?);
            skip_ws(chars, pos);
            match chars.get(*pos) {
                Some(',') => *pos += 1,
                Some(')') => {
                    *pos += 1;
                    break;
                }
                _ => return Err(term_error(*pos, "expected `,` or `)`".into())),
            }
        }
    }
    if children.len() != rank {
        return Err(term_error(start, format!("`{name}` has rank {rank} but {} children", children.len())));
    }
    Ok(Tree::new(label, children))
}
