use rand::Rng;

use super::{Circuit, CircuitBuilder, Gate, GateId};

/// A variable-free circuit of up to `gates` random internal gates over the
/// inputs 0 and 1, none of height above `max_height`. Subtraction appears
/// only if `with_sub`. The output is the last gate drawn.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, gates: usize, max_height: usize, with_sub: bool) -> Circuit {
    let mut g = vec![Gate::One, Gate::Zero, Gate::One];
    let mut h = vec![0usize; 3];
    for _ in 0..gates {
        let (x, y) = (rng.random_range(0..g.len()), rng.random_range(0..g.len()));
        if h[x].max(h[y]) >= max_height {
            continue;
        }
        g.push(match rng.random_range(0..if with_sub { 3 } else { 2 }) {
            0 => Gate::Add(x, y),
            1 => Gate::Mul(x, y),
            _ => Gate::Sub(x, y),
        });
        h.push(1 + h[x].max(h[y]));
    }
    let out = g.len() - 1;
    Circuit::new(g, out).expect("random gates refer to earlier gates")
}

/// `c - c'` where `c'` is `c` with the operands of every `+` and `×` swapped.
/// The two halves share no internal gates (unless an operation has equal
/// operands) yet compute the same value, so the result is zero.
pub fn symmetric_cancellation(c: &Circuit) -> Circuit {
    let mut b = CircuitBuilder::new();
    let mut straight: Vec<GateId> = Vec::with_capacity(c.len());
    let mut mirrored: Vec<GateId> = Vec::with_capacity(c.len());
    for gate in c.gates() {
        let (s, m) = match *gate {
            Gate::Zero => (b.zero(), b.zero()),
            Gate::One => (b.one(), b.one()),
            Gate::Var(i) => (b.var(i), b.var(i)),
            Gate::Add(x, y) => (b.add(straight[x], straight[y]), b.add(mirrored[y], mirrored[x])),
            Gate::Mul(x, y) => (b.mul(straight[x], straight[y]), b.mul(mirrored[y], mirrored[x])),
            Gate::Sub(x, y) => (b.sub(straight[x], straight[y]), b.sub(mirrored[x], mirrored[y])),
        };
        straight.push(s);
        mirrored.push(m);
    }
    let out = b.sub(straight[c.output()], mirrored[c.output()]);
    b.finish(out)
}

#[cfg(test)]
mod tests {
    use super::super::{eval_exact, DEFAULT_BIT_BOUND};
    use super::*;
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn heights_respected_and_cancellation_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let c = random_circuit(&mut rng, 15, 5, true);
            assert!(c.height() <= 5);
            let z = symmetric_cancellation(&c);
            assert_eq!(z.height(), c.height() + 1);
            assert_eq!(eval_exact(&z, &[], DEFAULT_BIT_BOUND).unwrap(), BigInt::from(0));
        }
    }
}
