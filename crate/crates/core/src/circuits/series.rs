use num_bigint::BigInt;
use num_traits::One;

use super::{Circuit, CircuitBuilder, CircuitError, GateId};
use crate::algebra::{Field, Matrix, Scalar};
use crate::automaton::{product, Mta};
use crate::trees::for_each_tuple;

/// A rational carried as numerator and denominator gates; `den: None`
/// means 1, which keeps integer automata free of denominators.
#[derive(Clone, Copy, Debug)]
struct Frac {
    num: GateId,
    den: Option<GateId>,
}

fn den_mul(b: &mut CircuitBuilder, x: Option<GateId>, y: Option<GateId>) -> Option<GateId> {
    match (x, y) {
        (None, d) | (d, None) => d,
        (Some(x), Some(y)) => Some(b.mul(x, y)),
    }
}

fn scaled(b: &mut CircuitBuilder, num: GateId, den: Option<GateId>) -> GateId {
    match den {
        None => num,
        Some(d) => b.mul(num, d),
    }
}

impl Frac {
    fn constant(b: &mut CircuitBuilder, s: &Scalar) -> Result<Frac, CircuitError> {
        let q = s.as_rational().ok_or(CircuitError::NotRational(s.field()))?;
        let num = b.constant(q.numer());
        let den = if q.denom().is_one() { None } else { Some(b.constant(q.denom())) };
        Ok(Frac { num, den })
    }

    /// `x/a + y/b = (x·b + y·a) / (a·b)`
    fn add(b: &mut CircuitBuilder, x: Frac, y: Frac) -> Frac {
        let l = scaled(b, x.num, y.den);
        let r = scaled(b, y.num, x.den);
        Frac { num: b.add(l, r), den: den_mul(b, x.den, y.den) }
    }

    fn sub(b: &mut CircuitBuilder, x: Frac, y: Frac) -> Frac {
        let l = scaled(b, x.num, y.den);
        let r = scaled(b, y.num, x.den);
        Frac { num: b.sub(l, r), den: den_mul(b, x.den, y.den) }
    }

    fn mul(b: &mut CircuitBuilder, x: Frac, y: Frac) -> Frac {
        Frac { num: b.mul(x.num, y.num), den: den_mul(b, x.den, y.den) }
    }

    fn sum(b: &mut CircuitBuilder, terms: &[Frac]) -> Frac {
        match terms {
            [] => Frac { num: b.zero(), den: None },
            [x] => *x,
            _ => {
                let (l, r) = terms.split_at(terms.len() / 2);
                let (l, r) = (Frac::sum(b, l), Frac::sum(b, r));
                Frac::add(b, l, r)
            }
        }
    }

    fn product(b: &mut CircuitBuilder, factors: &[Frac]) -> Frac {
        match factors {
            [] => Frac { num: b.one(), den: None },
            [x] => *x,
            _ => {
                let (l, r) = factors.split_at(factors.len() / 2);
                let (l, r) = (Frac::product(b, l), Frac::product(b, r));
                Frac::mul(b, l, r)
            }
        }
    }
}

/// Emits `G(n)·γ`, where `G(1) = S(0)` and
/// `G(i+1)_j = Σ_k Σ_{(l₁,…,l_k)} Π_a G(i)_{l_a} · S(k)_{(l₁,…,l_k),j}`
/// with `S(k) = Σ_{σ of rank k} μ(σ)`. Since `T^{<i+1}` is exactly the set of
/// `σ(t₁,…,t_k)` with all `t_a ∈ T^{<i}`, `G(i)` is the sum of `μ(t)` over
/// `T^{<i}`. Zero matrix entries contribute no gates.
fn series(b: &mut CircuitBuilder, a: &Mta, n: usize) -> Result<Frac, CircuitError> {
    if a.field() != Field::Rational {
        return Err(CircuitError::NotRational(a.field()));
    }
    let r = a.dim();
    if n == 0 || r == 0 {
        return Ok(Frac { num: b.zero(), den: None });
    }
    let max_rank = a.alphabet().max_rank();
    let mut s: Vec<Option<Matrix>> = vec![None; max_rank + 1];
    for (sym, m) in a.alphabet().symbols().iter().zip(a.transitions()) {
        let k = sym.rank;
        s[k] = Some(match s[k].take() {
            None => m.clone(),
            Some(acc) => acc.add(m).expect("transitions of equal rank share a shape"),
        });
    }
    let mut s_gates: Vec<Option<Vec<Vec<Option<Frac>>>>> = Vec::with_capacity(max_rank + 1);
    for m in &s {
        s_gates.push(match m {
            None => None,
            Some(m) => {
                let mut rows = Vec::with_capacity(m.rows());
                for row in 0..m.rows() {
                    let mut cols = Vec::with_capacity(r);
                    for col in 0..r {
                        let v = m.get(row, col);
                        cols.push(if v.is_zero() { None } else { Some(Frac::constant(b, v)?) });
                    }
                    rows.push(cols);
                }
                Some(rows)
            }
        });
    }

    let mut g: Vec<Frac> = (0..r)
        .map(|j| match &s_gates[0] {
            Some(rows) => rows[0][j].unwrap_or(Frac { num: b.zero(), den: None }),
            None => Frac { num: b.zero(), den: None },
        })
        .collect();
    for _ in 1..n {
        let mut terms: Vec<Vec<Frac>> = vec![Vec::new(); r];
        for (k, rows) in s_gates.iter().enumerate() {
            let Some(rows) = rows else { continue };
            let mut row = 0;
            for_each_tuple(k, r, |tuple| {
                let entries = &rows[row];
                row += 1;
                if entries.iter().all(Option::is_none) {
                    return;
                }
                let factors: Vec<Frac> = tuple.iter().map(|&l| g[l]).collect();
                let prod = Frac::product(b, &factors);
                for (j, e) in entries.iter().enumerate() {
                    if let Some(e) = e {
                        terms[j].push(if k == 0 { *e } else { Frac::mul(b, prod, *e) });
                    }
                }
            });
        }
        g = terms.iter().map(|t| Frac::sum(b, t)).collect();
    }
    let mut out = Vec::new();
    for (j, gamma) in a.final_weights().iter().enumerate() {
        if !gamma.is_zero() {
            let c = Frac::constant(b, gamma)?;
            out.push(Frac::mul(b, g[j], c));
        }
    }
    Ok(Frac::sum(b, &out))
}

/// Numerator and denominator circuits of `Σ_{t ∈ T^{<n}} ‖a‖(t)`; the
/// denominator is a product of nonzero constants.
pub fn sum_series_fraction(a: &Mta, n: usize) -> Result<(Circuit, Circuit), CircuitError> {
    let mut b = CircuitBuilder::new();
    let f = series(&mut b, a, n)?;
    let den = match f.den {
        Some(d) => d,
        None => b.one(),
    };
    Ok((b.clone().finish(f.num).trim(), b.finish(den).trim()))
}

/// A variable-free circuit whose value is `Σ_{t ∈ T^{<n}} ‖a‖(t)` for
/// integer automata. For rational entries it is that sum times a nonzero
/// integer, which has the same zero-ness.
pub fn sum_series_circuit(a: &Mta, n: usize) -> Result<Circuit, CircuitError> {
    let mut b = CircuitBuilder::new();
    let f = series(&mut b, a, n)?;
    Ok(b.finish(f.num).trim())
}

/// A circuit that is zero iff `a ≡ b`.
///
/// With `n = dim(a) + dim(b)`, the automata agree everywhere iff they agree
/// on `T^{<n}`, and over the rationals that holds iff
/// `Σ_{t ∈ T^{<n}} (‖a‖(t) - ‖b‖(t))² = 0`. Expanding the square through
/// product automata gives `Σ‖a×a‖ + Σ‖b×b‖ - 2·Σ‖a×b‖`; the circuit is the
/// numerator of that fraction.
pub fn equiv_to_acit(a: &Mta, b: &Mta) -> Result<Circuit, CircuitError> {
    let aa = product(a, a)?;
    let bb = product(b, b)?;
    let ab = product(a, b)?;
    let n = a.dim() + b.dim();
    let mut cb = CircuitBuilder::new();
    let (saa, sbb, sab) = (series(&mut cb, &aa, n)?, series(&mut cb, &bb, n)?, series(&mut cb, &ab, n)?);
    let two = Frac::constant(&mut cb, &Field::Rational.from_bigint(&BigInt::from(2)))?;
    let twice = Frac::mul(&mut cb, two, sab);
    let squares = Frac::add(&mut cb, saa, sbb);
    let total = Frac::sub(&mut cb, squares, twice);
    Ok(cb.finish(total.num).trim())
}

#[cfg(test)]
mod tests {
    use super::super::{acit_random_test, eval_exact, DEFAULT_BIT_BOUND};
    use super::*;
    use crate::automaton::fixtures::{rescaled, size_automaton};
    use crate::automaton::random::random_mta;
    use crate::equivalence::check_equiv;
    use crate::trees::{trees_below_height, RankedAlphabet};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;

    fn value(c: &Circuit) -> BigInt {
        eval_exact(c, &[], DEFAULT_BIT_BOUND).unwrap()
    }

    fn brute_sum(a: &Mta, n: usize) -> Scalar {
        let mut acc = Q.zero();
        for t in trees_below_height(a.alphabet(), n, 1 << 20).unwrap() {
            acc = &acc + &a.weight_tree(&t).unwrap();
        }
        acc
    }

    fn alphabet() -> RankedAlphabet {
        RankedAlphabet::new([("a", 0), ("g", 1), ("f", 2)]).unwrap()
    }

    #[test]
    fn size_automaton_sums() {
        let a = size_automaton(Q);
        assert_eq!(value(&sum_series_circuit(&a, 0).unwrap()), BigInt::from(0));
        assert_eq!(value(&sum_series_circuit(&a, 1).unwrap()), BigInt::from(1));
        assert_eq!(value(&sum_series_circuit(&a, 2).unwrap()), BigInt::from(4));
        assert_eq!(Q.from_bigint(&value(&sum_series_circuit(&a, 3).unwrap())), brute_sum(&a, 3));
        let silent = a.with_final(vec![Q.zero(), Q.zero()]).unwrap();
        for n in 0..5 {
            assert_eq!(value(&sum_series_circuit(&silent, n).unwrap()), BigInt::from(0));
        }
    }

    #[test]
    fn matches_enumeration_on_random_integer_automata() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for dim in 0..=2 {
            for _ in 0..10 {
                let a = random_mta(Q, &alphabet(), dim, &mut rng, 2);
                for n in 0..=3 {
                    assert_eq!(Q.from_bigint(&value(&sum_series_circuit(&a, n).unwrap())), brute_sum(&a, n), "dim {dim}, n {n}");
                }
            }
        }
    }

    #[test]
    fn rational_pair_encoding() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let half = Q.from_ratio(&BigInt::from(1), &BigInt::from(2)).unwrap();
        for _ in 0..10 {
            let a = random_mta(Q, &alphabet(), 2, &mut rng, 2);
            let ts: Vec<Matrix> = a.transitions().iter().map(|m| m.scale(&half).unwrap()).collect();
            let third = Q.from_ratio(&BigInt::from(1), &BigInt::from(3)).unwrap();
            let gamma = a.final_weights().iter().map(|g| g * &third).collect();
            let a = Mta::new(Q, 2, alphabet(), ts, gamma).unwrap();
            for n in 0..=3 {
                let (num, den) = sum_series_fraction(&a, n).unwrap();
                let got = BigRational::new(value(&num), value(&den));
                assert_eq!(Q.from_rational(&got).unwrap(), brute_sum(&a, n));
            }
        }
    }

    #[test]
    fn prime_fields_are_rejected() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(sum_series_circuit(&size_automaton(f7), 2), Err(CircuitError::NotRational(f7)));
    }

    #[test]
    fn equivalence_circuits() {
        let a = size_automaton(Q);
        assert_eq!(value(&equiv_to_acit(&a, &a).unwrap()), BigInt::from(0));
        let doubled = a.with_final(vec![Q.from_i64(2), Q.zero()]).unwrap();
        assert_ne!(value(&equiv_to_acit(&a, &doubled).unwrap()), BigInt::from(0));
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut equivalent = 0;
        for _ in 0..40 {
            let a = random_mta(Q, &alphabet(), rng.random_range(0..=2), &mut rng, 1);
            let b = if rng.random_bool(0.5) {
                let d: Vec<i64> = (0..a.dim()).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
                rescaled(&a, &d)
            } else {
                random_mta(Q, &alphabet(), rng.random_range(0..=2), &mut rng, 1)
            };
            let c = equiv_to_acit(&a, &b).unwrap();
            let same = check_equiv(&a, &b).unwrap().is_equivalent();
            equivalent += usize::from(same);
            assert_eq!(value(&c) == BigInt::from(0), same);
            assert_eq!(acit_random_test(&c, 40, &mut rng).unwrap().is_zero_likely(), same);
        }
        assert!(equivalent > 5);
    }
}
