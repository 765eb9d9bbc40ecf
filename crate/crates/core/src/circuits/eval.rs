use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Circuit, CircuitError, Gate};
use crate::algebra::{add_mod, mul_mod, reduce_bigint};

/// Default cap on the size of any intermediate value in exact evaluation.
pub const DEFAULT_BIT_BOUND: u64 = 1 << 24;

/// Exact value, or the residue modulo `modulus` when one is given.
pub fn eval_circuit(c: &Circuit, assignment: &[BigInt], modulus: Option<u64>) -> Result<BigInt, CircuitError> {
    match modulus {
        Some(p) => eval_mod(c, assignment, p).map(BigInt::from),
        None => eval_exact(c, assignment, DEFAULT_BIT_BOUND),
    }
}

/// Exact evaluation of the gates the output depends on. Fails before any
/// intermediate value could exceed `max_bits` bits.
pub fn eval_exact(c: &Circuit, assignment: &[BigInt], max_bits: u64) -> Result<BigInt, CircuitError> {
    let live = c.reachable();
    let mut vals: Vec<BigInt> = vec![BigInt::zero(); c.len()];
    for (g, gate) in c.gates().iter().enumerate() {
        if !live[g] {
            continue;
        }
        let v = match *gate {
            Gate::Zero => BigInt::zero(),
            Gate::One => BigInt::one(),
            Gate::Var(i) => assignment.get(i).cloned().ok_or(CircuitError::Unassigned(i))?,
            Gate::Add(l, r) | Gate::Sub(l, r) => {
                if vals[l].bits().max(vals[r].bits()) + 1 > max_bits {
                    return Err(CircuitError::BitBound(max_bits));
                }
                if matches!(gate, Gate::Add(..)) {
                    &vals[l] + &vals[r]
                } else {
                    &vals[l] - &vals[r]
                }
            }
            Gate::Mul(l, r) => {
                if vals[l].bits() + vals[r].bits() > max_bits {
                    return Err(CircuitError::BitBound(max_bits));
                }
                &vals[l] * &vals[r]
            }
        };
        vals[g] = v;
    }
    Ok(std::mem::take(&mut vals[c.output()]))
}

/// Residue of the output modulo `modulus` (any modulus ≥ 2).
pub fn eval_mod(c: &Circuit, assignment: &[BigInt], modulus: u64) -> Result<u64, CircuitError> {
    if modulus < 2 {
        return Err(CircuitError::BadModulus);
    }
    let residues: Vec<u64> = assignment.iter().map(|x| reduce_bigint(x, modulus)).collect();
    eval_residues(c, &residues, modulus)
}

/// As [`eval_mod`], with the assignment already reduced.
pub(crate) fn eval_residues(c: &Circuit, assignment: &[u64], p: u64) -> Result<u64, CircuitError> {
    let live = c.reachable();
    let mut vals = vec![0u64; c.len()];
    for (g, gate) in c.gates().iter().enumerate() {
        if !live[g] {
            continue;
        }
        vals[g] = match *gate {
            Gate::Zero => 0,
            Gate::One => 1 % p,
            Gate::Var(i) => *assignment.get(i).ok_or(CircuitError::Unassigned(i))?,
            Gate::Add(l, r) => add_mod(vals[l], vals[r], p),
            Gate::Sub(l, r) => add_mod(vals[l], p - vals[r], p),
            Gate::Mul(l, r) => mul_mod(vals[l], vals[r], p),
        };
    }
    Ok(vals[c.output()])
}

#[cfg(test)]
mod tests {
    use super::super::CircuitBuilder;
    use super::*;
    use num_bigint::BigUint;

    fn squaring_chain(depth: usize) -> Circuit {
        let mut b = CircuitBuilder::new();
        let mut x = b.constant_i64(2);
        for _ in 0..depth {
            x = b.mul(x, x);
        }
        b.finish(x)
    }

    /// `2^(2^depth) mod p`, computed with big-integer modular exponentiation.
    fn squaring_oracle(depth: u32, p: u64) -> u64 {
        let e = BigUint::from(2u32).pow(depth);
        let r = BigUint::from(2u32).modpow(&e, &BigUint::from(p));
        u64::try_from(r).unwrap()
    }

    #[test]
    fn small_circuits() {
        let mut b = CircuitBuilder::new();
        let one = b.one();
        assert_eq!(eval_exact(&b.clone().finish(one), &[], 64).unwrap(), BigInt::from(1));
        let two = b.add(one, one);
        let four = b.mul(two, two);
        let c = b.finish(four);
        assert_eq!(eval_circuit(&c, &[], None).unwrap(), BigInt::from(4));
        assert_eq!(eval_circuit(&c, &[], Some(3)).unwrap(), BigInt::from(1));
    }

    #[test]
    fn squaring_chains_mod_seven() {
        // 2^32 mod 7
        assert_eq!(squaring_oracle(5, 7), 4);
        assert_eq!(eval_mod(&squaring_chain(5), &[], 7).unwrap(), 4);
        // A chain of 32 squarings is 2^(2^32).
        assert_eq!(eval_mod(&squaring_chain(32), &[], 7).unwrap(), squaring_oracle(32, 7));
        assert_eq!(eval_mod(&squaring_chain(32), &[], 7).unwrap(), 2);
        let p = (1u64 << 61) - 1;
        for depth in [0, 1, 7, 40, 100] {
            assert_eq!(eval_mod(&squaring_chain(depth as usize), &[], p).unwrap(), squaring_oracle(depth, p));
        }
        assert_eq!(eval_exact(&squaring_chain(5), &[], 64).unwrap(), BigInt::from(1u64 << 32));
    }

    #[test]
    fn bit_bound_and_missing_variables() {
        assert_eq!(eval_exact(&squaring_chain(40), &[], 1 << 20), Err(CircuitError::BitBound(1 << 20)));
        let mut b = CircuitBuilder::new();
        let x = b.var(0);
        let y = b.var(1);
        let d = b.sub(x, y);
        let sq = b.mul(d, d);
        let c = b.finish(sq);
        assert_eq!(eval_exact(&c, &[BigInt::from(3)], 64), Err(CircuitError::Unassigned(1)));
        assert_eq!(eval_exact(&c, &[BigInt::from(3), BigInt::from(-4)], 64).unwrap(), BigInt::from(49));
        assert_eq!(eval_mod(&c, &[BigInt::from(3), BigInt::from(-4)], 5).unwrap(), 4);
        assert_eq!(eval_mod(&c, &[], 1), Err(CircuitError::BadModulus));
    }
}
