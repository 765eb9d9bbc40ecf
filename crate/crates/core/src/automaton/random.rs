//! Random automata with small integer entries, for property tests and
//! benchmarks.

use rand::Rng;

use super::{pow, Mta};
use crate::algebra::{Field, Matrix, Scalar};
use crate::trees::RankedAlphabet;

/// Entries drawn uniformly from `[-range, range]`.
pub fn random_mta<R: Rng + ?Sized>(field: Field, alphabet: &RankedAlphabet, dim: usize, rng: &mut R, range: i64) -> Mta {
    let transitions = alphabet
        .symbols()
        .iter()
        .map(|s| Matrix::from_fn(field, pow(dim, s.rank), dim, |_, _| field.from_i64(rng.random_range(-range..=range))))
        .collect();
    let gamma: Vec<Scalar> = (0..dim).map(|_| field.from_i64(rng.random_range(-range..=range))).collect();
    Mta::new(field, dim, alphabet.clone(), transitions, gamma).expect("shapes follow the alphabet")
}

/// Like [`random_mta`], but each entry is zero with probability `zero_prob`,
/// which makes rank-deficient and equivalent pairs common.
pub fn random_sparse_mta<R: Rng + ?Sized>(field: Field, alphabet: &RankedAlphabet, dim: usize, rng: &mut R, range: i64, zero_prob: f64) -> Mta {
    let entry = |rng: &mut R| {
        if rng.random_bool(zero_prob) {
            field.zero()
        } else {
            field.from_i64(rng.random_range(-range..=range))
        }
    };
    let transitions = alphabet.symbols().iter().map(|s| Matrix::from_fn(field, pow(dim, s.rank), dim, |_, _| entry(rng))).collect();
    let gamma: Vec<Scalar> = (0..dim).map(|_| entry(rng)).collect();
    Mta::new(field, dim, alphabet.clone(), transitions, gamma).expect("shapes follow the alphabet")
}
