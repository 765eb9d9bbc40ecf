use super::{pow, AutomatonError, Mta};
use crate::algebra::{Matrix, Scalar};

/// Splits a row index of an `n^k`-row matrix into its `k` base-`n` digits,
/// most significant first.
fn digits(mut index: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for d in out.iter_mut().rev() {
        *d = index % n;
        index /= n;
    }
    out
}

fn flatten(digits: impl IntoIterator<Item = usize>, n: usize) -> usize {
    digits.into_iter().fold(0, |acc, d| acc * n + d)
}

/// `A × B`, recognising the pointwise product of the two series.
///
/// The transition of a rank-`k` symbol is `P_k · (μ₁(σ) ⊗ μ₂(σ))`. Row
/// `((i₁,j₁),…,(i_k,j_k))` of it is row `((i₁,…,i_k),(j₁,…,j_k))` of the
/// Kronecker product, so it is filled in directly from `μ₁(σ)` and `μ₂(σ)`.
pub fn product(a: &Mta, b: &Mta) -> Result<Mta, AutomatonError> {
    a.same_signature(b)?;
    let field = a.field();
    let (n1, n2) = (a.dim(), b.dim());
    let n = n1 * n2;
    let mut transitions = Vec::with_capacity(a.alphabet().len());
    for (s, sym) in a.alphabet().symbols().iter().enumerate() {
        let k = sym.rank;
        let (m1, m2) = (a.transition(s), b.transition(s));
        let mut t = Matrix::zeros(field, pow(n, k), n);
        for row in 0..pow(n, k) {
            let pairs = digits(row, n, k);
            let r1 = flatten(pairs.iter().map(|p| p / n2), n1);
            let r2 = flatten(pairs.iter().map(|p| p % n2), n2);
            for c1 in 0..n1 {
                let x = m1.get(r1, c1);
                if x.is_zero() {
                    continue;
                }
                for c2 in 0..n2 {
                    t.set(row, c1 * n2 + c2, x * m2.get(r2, c2));
                }
            }
        }
        transitions.push(t);
    }
    let mut gamma = Vec::with_capacity(n);
    for x in a.final_weights() {
        for y in b.final_weights() {
            gamma.push(x * y);
        }
    }
    Mta::new(field, n, a.alphabet().clone(), transitions, gamma)
}

/// Direct sum of `a` and `b` with final vector `γ_a` stacked over `-γ_b`;
/// it recognises `‖a‖ - ‖b‖`, and a run's state is `μ_a(t)` followed by `μ_b(t)`.
pub fn difference(a: &Mta, b: &Mta) -> Result<Mta, AutomatonError> {
    a.same_signature(b)?;
    let field = a.field();
    let (n1, n2) = (a.dim(), b.dim());
    let n = n1 + n2;
    let mut transitions = Vec::with_capacity(a.alphabet().len());
    for (s, sym) in a.alphabet().symbols().iter().enumerate() {
        let k = sym.rank;
        let mut t = Matrix::zeros(field, pow(n, k), n);
        // Rows whose index tuple stays inside one block copy that block's
        // transition; mixed tuples stay zero.
        for row in 0..pow(n, k) {
            let tuple = digits(row, n, k);
            if tuple.iter().all(|&i| i < n1) {
                let r = flatten(tuple.iter().copied(), n1);
                for c in 0..n1 {
                    t.set(row, c, a.transition(s).get(r, c).clone());
                }
            }
            if tuple.iter().all(|&i| i >= n1) {
                let r = flatten(tuple.iter().map(|&i| i - n1), n2);
                for c in 0..n2 {
                    t.set(row, n1 + c, b.transition(s).get(r, c).clone());
                }
            }
        }
        transitions.push(t);
    }
    let gamma: Vec<Scalar> = a.final_weights().iter().cloned().chain(b.final_weights().iter().map(|x| -x)).collect();
    Mta::new(field, n, a.alphabet().clone(), transitions, gamma)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::size_automaton;
    use super::super::random::random_mta;
    use super::*;
    use crate::algebra::{kron, kron_all, Field};
    use crate::trees::{parse_tree, trees_below_height, Dag, RankedAlphabet};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;

    fn sigma() -> RankedAlphabet {
        RankedAlphabet::new([("a", 0), ("g", 1), ("f", 2)]).unwrap()
    }

    #[test]
    fn product_with_zero_dim() {
        let a = size_automaton(Q);
        let z = Mta::zero(Q, a.alphabet().clone());
        let p = product(&a, &z).unwrap();
        assert_eq!(p.dim(), 0);
        assert_eq!(p, Mta::zero(Q, a.alphabet().clone()));
    }

    #[test]
    fn size_squared() {
        let a = size_automaton(Q);
        let p = product(&a, &a).unwrap();
        assert_eq!(p.dim(), 4);
        let g: Vec<Scalar> = a.final_weights().iter().flat_map(|x| a.final_weights().iter().map(move |y| x * y)).collect();
        assert_eq!(p.final_weights(), g.as_slice());
        let t = Dag::from_tree(&parse_tree("f(a,a)", a.alphabet()).unwrap());
        assert_eq!(p.weight(&t).unwrap(), Q.from_i64(9));
    }

    /// The permutation is checked against its defining equation on coordinate
    /// vectors: `(u₁⊗…⊗u_k)⊗(v₁⊗…⊗v_k)·(μ₁⊗μ₂) = ((u₁⊗v₁)⊗…⊗(u_k⊗v_k))·μ`.
    #[test]
    fn permutation_matches_definition_on_coordinate_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_mta(Q, &sigma(), 2, &mut rng, 3);
        let b = random_mta(Q, &sigma(), 3, &mut rng, 3);
        let p = product(&a, &b).unwrap();
        let unit = |n: usize, i: usize| Matrix::from_fn(Q, 1, n, |_, j| if i == j { Q.one() } else { Q.zero() });
        let f = 2; // binary symbol
        let big = kron(a.transition(f), b.transition(f)).unwrap();
        for i1 in 0..2 {
            for i2 in 0..2 {
                for j1 in 0..3 {
                    for j2 in 0..3 {
                        let (u1, u2, v1, v2) = (unit(2, i1), unit(2, i2), unit(3, j1), unit(3, j2));
                        let lhs = kron_all(Q, [&u1, &u2, &v1, &v2]).unwrap().mul(&big).unwrap();
                        let w = kron_all(Q, [&u1, &v1, &u2, &v2]).unwrap();
                        let rhs = w.mul(p.transition(f)).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn product_law_on_small_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let trees = trees_below_height(&sigma(), 3, 10_000).unwrap();
        for _ in 0..5 {
            let a = random_mta(Q, &sigma(), 2, &mut rng, 3);
            let b = random_mta(Q, &sigma(), 2, &mut rng, 3);
            let p = product(&a, &b).unwrap();
            for t in &trees {
                let expected = &a.weight_tree(t).unwrap() * &b.weight_tree(t).unwrap();
                assert_eq!(p.weight(&Dag::from_tree(t)).unwrap(), expected);
            }
        }
    }

    #[test]
    fn difference_recognises_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trees = trees_below_height(&sigma(), 3, 10_000).unwrap();
        let a = random_mta(Q, &sigma(), 2, &mut rng, 3);
        let b = random_mta(Q, &sigma(), 3, &mut rng, 3);
        let d = difference(&a, &b).unwrap();
        assert_eq!(d.dim(), 5);
        for t in &trees {
            let expected = &a.weight_tree(t).unwrap() - &b.weight_tree(t).unwrap();
            assert_eq!(d.weight_tree(t).unwrap(), expected);
        }
    }

    #[test]
    fn signature_mismatch() {
        let a = size_automaton(Q);
        let other = Mta::zero(Q, sigma());
        assert_eq!(product(&a, &other).unwrap_err(), AutomatonError::AlphabetMismatch);
        let f5 = Mta::zero(Field::prime(5).unwrap(), a.alphabet().clone());
        assert!(matches!(difference(&a, &f5), Err(AutomatonError::Algebra(_))));
    }
}
