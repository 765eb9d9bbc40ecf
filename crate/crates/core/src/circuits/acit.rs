use rand::Rng;

use super::eval::eval_residues;
use super::{Circuit, CircuitError};
use crate::algebra::prime::is_prime;

/// Trial primes are drawn uniformly from `[2^(PRIME_BITS-1), 2^PRIME_BITS)`.
pub const PRIME_BITS: u32 = 63;

/// A floor on log2 of the number of primes in the sampling interval. The true
/// count is about 2^56.4; 2^55 leaves room for the error terms of the
/// prime number theorem.
const LOG2_PRIME_COUNT: f64 = 55.0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AcitVerdict {
    /// Every trial evaluated to zero.
    ZeroLikely { trials: usize },
    /// Certificate: the output is `residue ≠ 0` modulo the prime `modulus`
    /// under the given assignment (empty for variable-free circuits).
    NonZero { modulus: u64, residue: u64, assignment: Vec<u64> },
}

impl AcitVerdict {
    pub fn is_zero_likely(&self) -> bool {
        matches!(self, AcitVerdict::ZeroLikely { .. })
    }

    /// Re-checks a `NonZero` certificate from scratch; `ZeroLikely` has none.
    pub fn verify(&self, c: &Circuit) -> bool {
        match self {
            AcitVerdict::ZeroLikely { .. } => false,
            AcitVerdict::NonZero { modulus, residue, assignment } => {
                *residue != 0 && is_prime(*modulus) && eval_residues(c, assignment, *modulus) == Ok(*residue)
            }
        }
    }
}

/// How many trials reach a target error exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialBudget {
    /// log2 of the probability that one trial misses a nonzero circuit.
    pub log2_miss: f64,
    pub trials: usize,
}

impl TrialBudget {
    /// A nonzero polynomial with some coefficient `c`, `log2|c| ≤ B`, vanishes
    /// modulo a prime `p ≥ 2^62` only if `p | c`, which holds for at most
    /// `B/62` primes. Otherwise a uniform assignment mod `p` is a root with
    /// probability at most `deg/p`. Summing the two per trial and repeating
    /// until the product is at most `2^-k` gives the budget.
    pub fn for_circuit(c: &Circuit, k: u32) -> Result<TrialBudget, CircuitError> {
        let bits = c.bit_bounds()[c.output()];
        let degree = c.degree_bounds()[c.output()];
        let low = (PRIME_BITS - 1) as f64;
        let miss = (bits / low) * (-LOG2_PRIME_COUNT).exp2() + degree * (-low).exp2();
        let log2_miss = miss.log2();
        // A per-trial bound above 1/2 is too weak to be worth repeating.
        if log2_miss.is_nan() || log2_miss >= -1.0 {
            return Err(CircuitError::TooDeep { height: c.height(), bits: PRIME_BITS });
        }
        let trials = ((k as f64) / -log2_miss).ceil().max(1.0) as usize;
        Ok(TrialBudget { log2_miss, trials })
    }
}

fn sample_prime<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    let lo = 1u64 << (PRIME_BITS - 1);
    let hi = if PRIME_BITS == 64 { u64::MAX } else { 1u64 << PRIME_BITS };
    loop {
        let n = rng.random_range(lo..hi) | 1;
        if is_prime(n) {
            return n;
        }
    }
}

/// Randomized identity test with one-sided error: `NonZero` is always right
/// and carries a certificate, `ZeroLikely` is wrong with probability at most
/// `2^-k`. Variables get independent uniform residues in every trial.
pub fn acit_random_test<R: Rng + ?Sized>(c: &Circuit, k: u32, rng: &mut R) -> Result<AcitVerdict, CircuitError> {
    let budget = TrialBudget::for_circuit(c, k)?;
    let vars = c.num_vars();
    for _ in 0..budget.trials {
        let p = sample_prime(rng);
        let assignment: Vec<u64> = (0..vars).map(|_| rng.random_range(0..p)).collect();
        let residue = eval_residues(c, &assignment, p)?;
        if residue != 0 {
            return Ok(AcitVerdict::NonZero { modulus: p, residue, assignment });
        }
    }
    Ok(AcitVerdict::ZeroLikely { trials: budget.trials })
}

#[cfg(test)]
mod tests {
    use super::super::{eval_exact, CircuitBuilder};
    use super::*;
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// `x - x` where `x = 2^(2^depth)` is built twice with shared gates.
    fn cancelling_tower(depth: usize) -> Circuit {
        let mut b = CircuitBuilder::new();
        let mut x = b.constant_i64(2);
        let mut y = b.constant_i64(2);
        for _ in 0..depth {
            x = b.mul(x, x);
            let one = b.one();
            y = b.mul(y, y);
            y = b.mul(y, one);
        }
        let d = b.sub(x, y);
        b.finish(d)
    }

    #[test]
    fn one_minus_one_and_one_plus_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut b = CircuitBuilder::new();
        let one = b.one();
        let zero = b.sub(one, one);
        let two = b.add(one, one);
        assert!(acit_random_test(&b.clone().finish(zero), 40, &mut rng).unwrap().is_zero_likely());
        let c = b.finish(two);
        let v = acit_random_test(&c, 40, &mut rng).unwrap();
        assert!(matches!(v, AcitVerdict::NonZero { residue: 2, .. }));
        assert!(v.verify(&c));
    }

    #[test]
    fn huge_cancellation_is_fast_and_zero() {
        let c = cancelling_tower(10);
        assert!(eval_exact(&c, &[], 512).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let start = std::time::Instant::now();
        let v = acit_random_test(&c, 40, &mut rng).unwrap();
        assert!(v.is_zero_likely());
        assert!(start.elapsed().as_millis() < 500);
    }

    #[test]
    fn budget_follows_the_bound() {
        let mut b = CircuitBuilder::new();
        let one = b.one();
        let c = b.finish(one);
        let t = TrialBudget::for_circuit(&c, 40).unwrap();
        // 1/62 of the 2^-55 prime share
        assert!((t.log2_miss - (-55.0 - 62f64.log2())).abs() < 1e-9);
        assert_eq!(t.trials, 1);
        assert!(matches!(TrialBudget::for_circuit(&cancelling_tower(70), 20), Err(CircuitError::TooDeep { .. })));
        let mid = TrialBudget::for_circuit(&cancelling_tower(50), 20).unwrap();
        assert!(mid.trials > 1);
    }

    #[test]
    fn polynomial_identities() {
        // (x+y)^2 - (x^2 + 2xy + y^2) is zero; (x+y)^2 - (x^2 + y^2) is not.
        let mut b = CircuitBuilder::new();
        let (x, y) = (b.var(0), b.var(1));
        let s = b.add(x, y);
        let lhs = b.mul(s, s);
        let (xx, yy, xy) = (b.mul(x, x), b.mul(y, y), b.mul(x, y));
        let two_xy = b.add(xy, xy);
        let partial = b.add(xx, yy);
        let rhs = b.add(partial, two_xy);
        let zero = b.sub(lhs, rhs);
        let nonzero = b.sub(lhs, partial);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(acit_random_test(&b.clone().finish(zero), 40, &mut rng).unwrap().is_zero_likely());
        let c = b.finish(nonzero);
        let v = acit_random_test(&c, 40, &mut rng).unwrap();
        assert!(v.verify(&c));
        if let AcitVerdict::NonZero { assignment, .. } = &v {
            assert_eq!(assignment.len(), 2);
            let exact = eval_exact(&c, &assignment.iter().map(|&a| BigInt::from(a)).collect::<Vec<_>>(), 1 << 10).unwrap();
            assert_ne!(exact, BigInt::from(0));
        }
    }
}
