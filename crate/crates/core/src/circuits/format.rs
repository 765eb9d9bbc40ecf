//! The `.ac` text format.
//!
//! ```text
//! gate 0 one
//! gate 1 add 0 0
//! gate 2 mul 1 1
//! output 2
//! ```
//!
//! Gates come children first; ids are arbitrary distinct integers. Other gate
//! kinds are `zero`, `var <i>` and `sub <l> <r>`.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Circuit, Gate, GateId};
use crate::text::{LineCursor, ParseError};

pub fn parse_circuit(input: &str) -> Result<Circuit, ParseError> {
    let mut cursor = LineCursor::new(input);
    let mut gates: Vec<Gate> = Vec::new();
    let mut ids: HashMap<usize, GateId> = HashMap::new();
    loop {
        let line = cursor.next_line("`gate` or `output`")?;
        match line.keyword() {
            "gate" => {
                let id_tok = line.arg(1, "gate id")?;
                let id = id_tok.parse_usize()?;
                if ids.contains_key(&id) {
                    return Err(id_tok.error(format!("duplicate gate id {id}")));
                }
                let kind = line.arg(2, "gate kind")?;
                let child = |i: usize| -> Result<GateId, ParseError> {
                    let tok = line.arg(i, "child gate id")?;
                    let c = tok.parse_usize()?;
                    ids.get(&c).copied().ok_or_else(|| tok.error(format!("gate {c} is not an earlier gate (gates must be listed children first)")))
                };
                let gate = match kind.text {
                    "zero" => {
                        line.expect_len(3)?;
                        Gate::Zero
                    }
                    "one" => {
                        line.expect_len(3)?;
                        Gate::One
                    }
                    "var" => {
                        line.expect_len(4)?;
                        Gate::Var(line.arg(3, "variable index")?.parse_usize()?)
                    }
                    "add" | "sub" | "mul" => {
                        line.expect_len(5)?;
                        let (l, r) = (child(3)?, child(4)?);
                        match kind.text {
                            "add" => Gate::Add(l, r),
                            "sub" => Gate::Sub(l, r),
                            _ => Gate::Mul(l, r),
                        }
                    }
                    other => return Err(kind.error(format!("unknown gate kind `{other}`"))),
                };
                ids.insert(id, gates.len());
                gates.push(gate);
            }
            "output" => {
                line.expect_len(2)?;
                let tok = line.arg(1, "output gate id")?;
                let o = tok.parse_usize()?;
                let &output = ids.get(&o).ok_or_else(|| tok.error(format!("undefined gate {o}")))?;
                cursor.finish()?;
                return Circuit::new(gates, output).map_err(|e| tok.error(e.to_string()));
            }
            other => return Err(line.tokens[0].error(format!("unknown directive `{other}`"))),
        }
    }
}

pub fn write_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    for (g, gate) in c.gates().iter().enumerate() {
        match *gate {
            Gate::Zero => writeln!(out, "gate {g} zero"),
            Gate::One => writeln!(out, "gate {g} one"),
            Gate::Var(i) => writeln!(out, "gate {g} var {i}"),
            Gate::Add(l, r) => writeln!(out, "gate {g} add {l} {r}"),
            Gate::Sub(l, r) => writeln!(out, "gate {g} sub {l} {r}"),
            Gate::Mul(l, r) => writeln!(out, "gate {g} mul {l} {r}"),
        }
        .unwrap();
    }
    writeln!(out, "output {}", c.output()).unwrap();
    out
}
