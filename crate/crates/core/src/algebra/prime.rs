//! Deterministic primality testing for 64-bit moduli.

use super::scalar::{mul_mod, pow_mod};

const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

// Sufficient for a deterministic answer on every u64.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Trial division below 2^20, Miller-Rabin with a fixed witness set above.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < TRIAL_DIVISION_LIMIT {
        let mut d = 2u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        return true;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
