//! The `.mta` text format.
//!
//! ```text
//! mta q 2
//! sym a 0
//! sym f 2
//! trans a
//! 1 1
//! trans f
//! 0 0
//! 1 0
//! 1 0
//! 1 1
//! final
//! 1 0
//! ```
//!
//! `trans σ` is followed by `n^rk(σ)` rows of `n` scalars, rows ordered by
//! flattened index tuples. With `n = 0` every row is empty and none are
//! written. `final` is followed by one row of `n` scalars.

use std::fmt::Write as _;

use super::{pow, AutomatonError, Mta};
use crate::algebra::{Field, Matrix, Scalar};
use crate::text::{LineCursor, ParseError, Token};
use crate::trees::RankedAlphabet;

fn scalars(tokens: &[Token<'_>], field: Field, n: usize) -> Result<Vec<Scalar>, ParseError> {
    if tokens.len() != n {
        let at = tokens.get(n).copied().unwrap_or(tokens[tokens.len() - 1]);
        return Err(at.error(format!("expected {n} scalars, found {}", tokens.len())));
    }
    tokens.iter().map(|t| field.parse_scalar(t.text).map_err(|e| t.error(e.to_string()))).collect()
}

pub fn parse_mta(input: &str) -> Result<Mta, ParseError> {
    let mut cursor = LineCursor::new(input);
    let header = cursor.next_line("`mta <field> <n>` header")?;
    if header.keyword() != "mta" {
        return Err(header.tokens[0].error("expected `mta <field> <n>` header"));
    }
    header.expect_len(3)?;
    let field_tok = header.arg(1, "field")?;
    let field: Field = field_tok.text.parse().map_err(|e: crate::algebra::AlgebraError| field_tok.error(e.to_string()))?;
    let n = header.arg(2, "dimension")?.parse_usize()?;

    let mut symbols: Vec<(String, usize)> = Vec::new();
    while let Some(line) = cursor.peek() {
        if line.keyword() != "sym" {
            break;
        }
        let line = cursor.next_line("symbol")?;
        line.expect_len(3)?;
        let name = line.arg(1, "symbol name")?;
        let rank = line.arg(2, "rank")?.parse_usize()?;
        if symbols.iter().any(|(s, _)| s == name.text) {
            return Err(name.error(format!("duplicate symbol `{}`", name.text)));
        }
        symbols.push((name.text.to_string(), rank));
    }
    let alphabet = RankedAlphabet::new(symbols.iter().cloned()).map_err(|e| header.error(e.to_string()))?;

    let mut transitions: Vec<Option<Matrix>> = vec![None; alphabet.len()];
    let final_weights = loop {
        let line = cursor.next_line("`trans` or `final`")?;
        match line.keyword() {
            "trans" => {
                line.expect_len(2)?;
                let name = line.arg(1, "symbol name")?;
                let s = alphabet.lookup(name.text).ok_or_else(|| name.error(format!("unknown symbol `{}`", name.text)))?;
                if transitions[s].is_some() {
                    return Err(name.error(format!("second transition for `{}`", name.text)));
                }
                let rows = if n == 0 { 0 } else { pow(n, alphabet.rank(s)) };
                let mut data = Vec::with_capacity(rows * n);
                for _ in 0..rows {
                    let row = cursor.next_line("a transition row")?;
                    data.extend(scalars(&row.tokens, field, n)?);
                }
                let m = Matrix::from_vec(field, pow(n, alphabet.rank(s)), n, data).map_err(|e| line.error(e.to_string()))?;
                transitions[s] = Some(m);
            }
            "final" => {
                if n == 0 {
                    line.expect_len(1)?;
                    break Vec::new();
                }
                if line.tokens.len() > 1 {
                    break scalars(&line.tokens[1..], field, n)?;
                }
                let row = cursor.next_line("the final weight row")?;
                break scalars(&row.tokens, field, n)?;
            }
            other => return Err(line.tokens[0].error(format!("unknown directive `{other}`"))),
        }
    };
    cursor.finish()?;
    let mut ts = Vec::with_capacity(alphabet.len());
    for (s, t) in transitions.into_iter().enumerate() {
        ts.push(t.ok_or_else(|| header.error(format!("missing transition for `{}`", alphabet.name(s))))?);
    }
    Mta::new(field, n, alphabet, ts, final_weights).map_err(|e: AutomatonError| header.error(e.to_string()))
}

pub fn write_mta(a: &Mta) -> String {
    let mut out = String::new();
    writeln!(out, "mta {} {}", a.field(), a.dim()).unwrap();
    for s in a.alphabet().symbols() {
        writeln!(out, "sym {} {}", s.name, s.rank).unwrap();
    }
    let row = |out: &mut String, xs: &[Scalar]| {
        let parts: Vec<String> = xs.iter().map(Scalar::to_string).collect();
        writeln!(out, "{}", parts.join(" ")).unwrap();
    };
    for (s, sym) in a.alphabet().symbols().iter().enumerate() {
        writeln!(out, "trans {}", sym.name).unwrap();
        if a.dim() > 0 {
            for r in 0..a.transition(s).rows() {
                row(&mut out, a.transition(s).row(r));
            }
        }
    }
    out.push_str("final\n");
    if a.dim() > 0 {
        row(&mut out, a.final_weights());
    }
    out
}
