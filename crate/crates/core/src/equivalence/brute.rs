use std::collections::HashSet;

use super::EquivError;
use crate::algebra::{RowBasis, Scalar};
use crate::automaton::Mta;
use crate::trees::for_each_tuple;

/// Whether `a` and `b` agree on every tree of height below `height_bound`.
///
/// Trees are enumerated level by level, keeping one representative per
/// distinct pair of states `(μ_a(t), μ_b(t))`; equal state pairs behave
/// identically in every context, so nothing is lost. `budget` caps the number
/// of child tuples combined per level.
///
/// The topmost level (trees of height exactly `height_bound - 1`) can be far
/// too large to list, so it is checked through multilinearity instead: the
/// difference of weights on `σ(t₁,…,t_k)` is multilinear in the stacked
/// states of the `t_i`, hence vanishes for all child tuples iff it vanishes
/// on every tuple drawn from a basis of the lower-level stacked states.
pub fn brute_force_equiv(a: &Mta, b: &Mta, height_bound: usize, budget: usize) -> Result<bool, EquivError> {
    a.same_signature(b)?;
    if height_bound == 0 {
        return Ok(true);
    }
    let alphabet = a.alphabet();
    let agree = |sa: &[Scalar], sb: &[Scalar]| a.output(sa) == b.output(sb);

    // Distinct state pairs of all trees of height < h, starting with h = 1.
    let mut classes: Vec<(Vec<Scalar>, Vec<Scalar>)> = Vec::new();
    for (s, sym) in alphabet.symbols().iter().enumerate() {
        if sym.rank == 0 {
            let pair = (a.apply(s, &[]), b.apply(s, &[]));
            if !agree(&pair.0, &pair.1) {
                return Ok(false);
            }
            if !classes.contains(&pair) {
                classes.push(pair);
            }
        }
    }
    for _ in 1..height_bound - 1 {
        let mut seen: HashSet<(Vec<Scalar>, Vec<Scalar>)> = classes.iter().cloned().collect();
        let mut next = classes.clone();
        for (s, sym) in alphabet.symbols().iter().enumerate() {
            if sym.rank == 0 {
                continue;
            }
            let tuples = classes.len().checked_pow(sym.rank as u32).unwrap_or(usize::MAX);
            if tuples > budget {
                return Err(EquivError::Budget(budget));
            }
            let mut disagree = false;
            for_each_tuple(sym.rank, classes.len(), |idx| {
                if disagree {
                    return;
                }
                let ca: Vec<&[Scalar]> = idx.iter().map(|&i| classes[i].0.as_slice()).collect();
                let cb: Vec<&[Scalar]> = idx.iter().map(|&i| classes[i].1.as_slice()).collect();
                let pair = (a.apply(s, &ca), b.apply(s, &cb));
                if !agree(&pair.0, &pair.1) {
                    disagree = true;
                } else if seen.insert(pair.clone()) {
                    next.push(pair);
                }
            });
            if disagree {
                return Ok(false);
            }
        }
        classes = next;
    }
    if height_bound == 1 {
        return Ok(true);
    }

    // Top level: child tuples over a basis of the stacked states.
    let (na, nb) = (a.dim(), b.dim());
    let mut span = RowBasis::new(a.field(), na + nb);
    for (sa, sb) in &classes {
        let stacked: Vec<Scalar> = sa.iter().chain(sb).cloned().collect();
        span.insert(stacked).expect("stacked states have matching width and field");
    }
    let reps = span.rows();
    for (s, sym) in alphabet.symbols().iter().enumerate() {
        if sym.rank == 0 {
            continue;
        }
        let mut disagree = false;
        for_each_tuple(sym.rank, reps.len(), |idx| {
            if disagree {
                return;
            }
            let ca: Vec<&[Scalar]> = idx.iter().map(|&i| &reps[i][..na]).collect();
            let cb: Vec<&[Scalar]> = idx.iter().map(|&i| &reps[i][na..]).collect();
            disagree = !agree(&a.apply(s, &ca), &b.apply(s, &cb));
        });
        if disagree {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::automaton::fixtures::{example_automaton, size_automaton};
    use crate::automaton::random::random_mta;
    use crate::trees::{trees_below_height, RankedAlphabet};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;

    /// Plain enumeration of every tree, for bounds small enough to list.
    fn naive(a: &Mta, b: &Mta, bound: usize) -> bool {
        trees_below_height(a.alphabet(), bound, 1 << 22).unwrap().iter().all(|t| a.weight_tree(t).unwrap() == b.weight_tree(t).unwrap())
    }

    #[test]
    fn reflexive() {
        let a = size_automaton(Q);
        for h in 0..6 {
            assert!(brute_force_equiv(&a, &a, h, 1 << 20).unwrap());
        }
    }

    #[test]
    fn doubled_final_fails_at_bound_one() {
        let a = size_automaton(Q);
        let doubled = a.with_final(a.final_weights().iter().map(|x| x + x).collect()).unwrap();
        assert!(!brute_force_equiv(&a, &doubled, 1, 1 << 20).unwrap());
        assert!(brute_force_equiv(&a, &doubled, 0, 1 << 20).unwrap());
    }

    #[test]
    fn example_automaton_needs_full_height() {
        let a = example_automaton(Q, 4);
        let z = Mta::zero(Q, a.alphabet().clone());
        // t_4 has height 3
        assert!(brute_force_equiv(&a, &z, 3, 1 << 20).unwrap());
        assert!(!brute_force_equiv(&a, &z, 4, 1 << 20).unwrap());
    }

    /// `a` with one transition entry of symbol `s` replaced.
    fn perturb(a: &Mta, s: usize, row: usize, col: usize, value: i64) -> Mta {
        let mut ts = a.transitions().to_vec();
        ts[s].set(row, col, Q.from_i64(value));
        Mta::new(Q, a.dim(), a.alphabet().clone(), ts, a.final_weights().to_vec()).unwrap()
    }

    #[test]
    fn agrees_with_naive_enumeration() {
        use rand::Rng;
        let alphabet = RankedAlphabet::new([("a", 0), ("g", 1), ("f", 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut disagreements = [0usize; 5];
        for _ in 0..40 {
            let a = random_mta(Q, &alphabet, 2, &mut rng, 1);
            let s = rng.random_range(1..3);
            let row = rng.random_range(0..a.transition(s).rows());
            let b = perturb(&a, s, row, rng.random_range(0..2), rng.random_range(-1..=1));
            for (bound, count) in disagreements.iter_mut().enumerate() {
                let expected = naive(&a, &b, bound);
                assert_eq!(brute_force_equiv(&a, &b, bound, 1 << 20).unwrap(), expected, "bound {bound}");
                *count += usize::from(!expected);
            }
        }
        // the perturbations surface at several heights
        assert!(disagreements[2] > 0 && disagreements[3] > disagreements[2]);
    }

    #[test]
    fn budget_is_reported() {
        let alphabet = RankedAlphabet::new([("a", 0), ("g", 1), ("f", 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_mta(Q, &alphabet, 3, &mut rng, 3);
        assert!(matches!(brute_force_equiv(&a, &a, 6, 10), Err(EquivError::Budget(10))));
    }
}
