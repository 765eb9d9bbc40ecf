//! Small automata with known series.

use super::{pow, Mta};
use crate::algebra::{Field, Matrix};
use crate::trees::fixtures::{example_alphabet, S0, S2};
use crate::trees::RankedAlphabet;

/// Alphabet `a/0, f/2` of [`size_automaton`].
pub fn size_alphabet() -> RankedAlphabet {
    RankedAlphabet::new([("a", 0), ("f", 2)]).expect("valid alphabet")
}

/// Two states recognising `t ↦ size(t)`: the state of `t` is `[size(t), 1]`.
pub fn size_automaton(field: Field) -> Mta {
    let mu_a = Matrix::from_i64(field, &[&[1, 1]]);
    let mu_f = Matrix::from_i64(field, &[&[0, 0], &[1, 0], &[1, 0], &[1, 1]]);
    Mta::new(field, 2, size_alphabet(), vec![mu_a, mu_f], vec![field.one(), field.zero()]).expect("well-formed")
}

/// The `n`-state automaton over `s0/0, s2/2` whose series is 1 on the
/// perfect binary tree `t_n` and 0 on every other tree.
///
/// State `n` marks a leaf; the transition of `s2` maps the pair of equal
/// states `(i+1, i+1)` to state `i`; the final vector is `e_1`.
pub fn example_automaton(field: Field, n: usize) -> Mta {
    assert!(n >= 1);
    let mut transitions = vec![Matrix::zeros(field, 1, n), Matrix::zeros(field, pow(n, 2), n)];
    transitions[S0].set(0, n - 1, field.one());
    for i in 0..n - 1 {
        transitions[S2].set((i + 1) * n + (i + 1), i, field.one());
    }
    let mut gamma = vec![field.zero(); n];
    gamma[0] = field.one();
    Mta::new(field, n, example_alphabet(), transitions, gamma).expect("well-formed")
}

/// An automaton equivalent to `a` by the change of basis `D = diag(d)`:
/// `μ'(σ) = (D⁻¹)^{⊗k} μ(σ) D` and `γ' = D⁻¹ γ`, so `μ'(t) = μ(t) D`.
/// Entries of `d` must be nonzero; with `d_i = ±1` integers stay integers.
pub fn rescaled(a: &Mta, d: &[i64]) -> Mta {
    let field = a.field();
    let n = a.dim();
    assert_eq!(d.len(), n);
    let scale: Vec<_> = d.iter().map(|&x| field.from_i64(x)).collect();
    let inv: Vec<_> = scale.iter().map(|x| x.inverse().expect("nonzero scale")).collect();
    let transitions = a
        .transitions()
        .iter()
        .enumerate()
        .map(|(s, m)| {
            let k = a.alphabet().rank(s);
            Matrix::from_fn(field, m.rows(), n, |row, col| {
                // digits of `row` in base n, most significant first
                let mut factor = scale[col].clone();
                let mut rest = row;
                for _ in 0..k {
                    factor = &factor * &inv[rest % n];
                    rest /= n;
                }
                m.get(row, col) * &factor
            })
        })
        .collect();
    let gamma = a.final_weights().iter().zip(&inv).map(|(g, i)| g * i).collect();
    Mta::new(field, n, a.alphabet().clone(), transitions, gamma).expect("same shapes as the input")
}
