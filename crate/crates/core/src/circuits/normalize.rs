use super::{Circuit, CircuitBuilder, CircuitError, Gate, GateId};

/// A variable-free `+`/`×` circuit in layered form: inputs have height 0, both
/// children of a height-`i` gate have height `i - 1`, `+` gates sit at even
/// and `×` gates at odd heights, and the output height is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedCircuit {
    circuit: Circuit,
    heights: Vec<usize>,
}

impl NormalizedCircuit {
    pub fn new(circuit: Circuit) -> Result<NormalizedCircuit, CircuitError> {
        let heights = circuit.heights();
        let bad = |msg: String| Err(CircuitError::NotNormalized(msg));
        for (g, gate) in circuit.gates().iter().enumerate() {
            match *gate {
                Gate::Var(_) => return Err(CircuitError::HasVariables),
                Gate::Sub(..) => return Err(CircuitError::Subtraction(g)),
                Gate::Add(l, r) | Gate::Mul(l, r) => {
                    if heights[l] != heights[r] {
                        return bad(format!("children of gate {g} have heights {} and {}", heights[l], heights[r]));
                    }
                    let want_even = matches!(gate, Gate::Add(..));
                    if heights[g].is_multiple_of(2) != want_even {
                        let op = if want_even { "+" } else { "×" };
                        return bad(format!("{op} gate {g} at height {}", heights[g]));
                    }
                }
                Gate::Zero | Gate::One => {}
            }
        }
        if !heights[circuit.output()].is_multiple_of(2) {
            return bad(format!("output at odd height {}", heights[circuit.output()]));
        }
        Ok(NormalizedCircuit { circuit, heights })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    /// Height of the output gate.
    pub fn height(&self) -> usize {
        self.heights[self.circuit.output()]
    }

    /// The same value with the output raised to the even height `h` by relays.
    pub fn padded(&self, h: usize) -> NormalizedCircuit {
        assert!(h.is_multiple_of(2) && h >= self.height(), "padding target must be even and at least the current height");
        let mut r = Relays::default();
        let mut ids = Vec::with_capacity(self.circuit.len());
        for gate in self.circuit.gates() {
            ids.push(r.b.push_mapped(*gate, &ids));
        }
        let out = r.lift(ids[self.circuit.output()], self.height(), h);
        NormalizedCircuit::new(r.b.finish(out).trim()).expect("relays preserve the layering")
    }
}

impl CircuitBuilder {
    fn push_mapped(&mut self, gate: Gate, ids: &[GateId]) -> GateId {
        match gate {
            Gate::Zero => self.zero(),
            Gate::One => self.one(),
            Gate::Var(i) => self.var(i),
            Gate::Add(l, r) => self.add(ids[l], ids[r]),
            Gate::Sub(l, r) => self.sub(ids[l], ids[r]),
            Gate::Mul(l, r) => self.mul(ids[l], ids[r]),
        }
    }
}

/// Relay gates: `x × 1` raises `x` to an odd height, `x + 0` to an even one.
/// The constants 1 and 0 are themselves kept available at every height.
#[derive(Default)]
struct Relays {
    b: CircuitBuilder,
    ones: Vec<GateId>,
    zeros: Vec<GateId>,
}

impl Relays {
    fn ladder(&mut self, level: usize) {
        if self.ones.is_empty() {
            let (one, zero) = (self.b.one(), self.b.zero());
            self.ones.push(one);
            self.zeros.push(zero);
        }
        while self.ones.len() <= level {
            let l = self.ones.len() - 1;
            let (one, zero) = (self.ones[l], self.zeros[l]);
            let (one, zero) = if (l + 1) % 2 == 1 {
                (self.b.mul(one, one), self.b.mul(zero, one))
            } else {
                (self.b.add(one, zero), self.b.add(zero, zero))
            };
            self.ones.push(one);
            self.zeros.push(zero);
        }
    }

    /// `x`, computed at height `from`, re-expressed at height `to`.
    fn lift(&mut self, mut x: GateId, from: usize, to: usize) -> GateId {
        for l in from..to {
            if (l + 1) % 2 == 1 {
                self.ladder(l);
                let one = self.ones[l];
                x = self.b.mul(x, one);
            } else {
                self.ladder(l);
                let zero = self.zeros[l];
                x = self.b.add(x, zero);
            }
        }
        x
    }
}

/// Layers a variable-free `+`/`×` circuit by padding with relay gates.
///
/// Each gate goes to the least height of the right parity above both
/// children, whose values are then relayed up to one below it.
pub fn normalize_circuit(c: &Circuit) -> Result<NormalizedCircuit, CircuitError> {
    let c = c.trim();
    let mut r = Relays::default();
    let mut ids: Vec<GateId> = Vec::with_capacity(c.len());
    let mut level: Vec<usize> = Vec::with_capacity(c.len());
    for (g, gate) in c.gates().iter().enumerate() {
        let (id, lv) = match *gate {
            Gate::Var(_) => return Err(CircuitError::HasVariables),
            Gate::Sub(..) => return Err(CircuitError::Subtraction(g)),
            Gate::Zero => (r.b.zero(), 0),
            Gate::One => (r.b.one(), 0),
            Gate::Add(x, y) | Gate::Mul(x, y) => {
                let below = level[x].max(level[y]);
                let parity = if matches!(gate, Gate::Add(..)) { 0 } else { 1 };
                let lv = if (below + 1) % 2 == parity { below + 1 } else { below + 2 };
                let lx = r.lift(ids[x], level[x], lv - 1);
                let ly = r.lift(ids[y], level[y], lv - 1);
                let id = if parity == 0 { r.b.add(lx, ly) } else { r.b.mul(lx, ly) };
                (id, lv)
            }
        };
        ids.push(id);
        level.push(lv);
    }
    let out_level = level[c.output()];
    let out = r.lift(ids[c.output()], out_level, out_level + out_level % 2);
    Ok(NormalizedCircuit::new(r.b.finish(out).trim()).expect("construction is layered"))
}

/// Two subtraction-free circuits `(p, n)` with `value(c) = value(p) - value(n)`.
///
/// Every gate carries a pair: constants are `(c, 0)`, and
/// `(p₁,n₁) - (p₂,n₂) = (p₁+n₂, n₁+p₂)`,
/// `(p₁,n₁) × (p₂,n₂) = (p₁p₂ + n₁n₂, p₁n₂ + n₁p₂)`.
pub fn split_subtraction(c: &Circuit) -> (Circuit, Circuit) {
    let c = c.trim();
    let mut b = CircuitBuilder::new();
    let mut tracks: Vec<(GateId, GateId)> = Vec::with_capacity(c.len());
    for gate in c.gates() {
        let pair = match *gate {
            Gate::Zero | Gate::One | Gate::Var(_) => {
                let zero = b.zero();
                (b.push_mapped(*gate, &[]), zero)
            }
            Gate::Add(x, y) => {
                let ((p1, n1), (p2, n2)) = (tracks[x], tracks[y]);
                (b.add(p1, p2), b.add(n1, n2))
            }
            Gate::Sub(x, y) => {
                let ((p1, n1), (p2, n2)) = (tracks[x], tracks[y]);
                (b.add(p1, n2), b.add(n1, p2))
            }
            Gate::Mul(x, y) => {
                let ((p1, n1), (p2, n2)) = (tracks[x], tracks[y]);
                let (pp, nn, pn, np) = (b.mul(p1, p2), b.mul(n1, n2), b.mul(p1, n2), b.mul(n1, p2));
                (b.add(pp, nn), b.add(pn, np))
            }
        };
        tracks.push(pair);
    }
    let (p, n) = tracks[c.output()];
    (b.clone().finish(p).trim(), b.finish(n).trim())
}
