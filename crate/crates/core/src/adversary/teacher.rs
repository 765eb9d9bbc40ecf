use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_hard_automaton, HardFamily, HardInstance, Pattern};
use crate::algebra::{Field, Matrix, Scalar};
use crate::automaton::{pow, Mta};
use crate::equivalence::{check_equiv, EquivResult};
use crate::learner::{LearnError, Teacher};
use crate::trees::{Dag, RankedAlphabet};

/// Magnitude bound of the values the adversary commits to.
const VALUE_RANGE: i64 = 9;

/// Commits to entries of `B(σ)` only when a query forces it. Every answer
/// given so far agrees with `build_hard_automaton` on any completion of the
/// committed entries.
#[derive(Clone, Debug)]
pub struct AdversarialTeacher {
    family: HardFamily,
    field: Field,
    rng: ChaCha8Rng,
    /// `(symbol, row, column) → value`; ordered, so the first unrevealed
    /// entry is found lexicographically.
    revealed: BTreeMap<(usize, usize, usize), Scalar>,
    pub membership_queries: usize,
    pub equivalence_queries: usize,
}

pub fn adversarial_teacher(family: HardFamily, field: Field, seed: u64) -> AdversarialTeacher {
    AdversarialTeacher { family, field, rng: ChaCha8Rng::seed_from_u64(seed), revealed: BTreeMap::new(), membership_queries: 0, equivalence_queries: 0 }
}

impl AdversarialTeacher {
    pub fn family(&self) -> &HardFamily {
        &self.family
    }

    pub fn revealed(&self) -> usize {
        self.revealed.len()
    }

    fn draw_nonzero(&mut self) -> Scalar {
        loop {
            let v = self.field.from_i64(self.rng.random_range(-VALUE_RANGE..=VALUE_RANGE));
            if !v.is_zero() {
                return v;
            }
        }
    }

    fn first_unrevealed(&self) -> Option<(usize, usize, usize)> {
        let n = self.family.n();
        self.family.heavy_symbols().find_map(|s| {
            let rows = pow(n, self.family.alphabet().rank(s));
            (0..rows).flat_map(|row| (0..n).map(move |col| (s, row, col))).find(|key| !self.revealed.contains_key(key))
        })
    }

    /// The committed entries, with 0 wherever nothing is committed yet.
    pub fn committed(&self) -> HardInstance {
        let fam = &self.family;
        let b = fam
            .heavy_symbols()
            .map(|s| {
                let rows = pow(fam.n(), fam.alphabet().rank(s));
                let m = Matrix::from_fn(self.field, rows, fam.n(), |i, j| self.revealed.get(&(s, i, j)).cloned().unwrap_or_else(|| self.field.zero()));
                (s, m)
            })
            .collect();
        HardInstance::new(fam.clone(), self.field, b).expect("shapes follow the family")
    }
}

impl Teacher for AdversarialTeacher {
    fn field(&self) -> Field {
        self.field
    }

    fn alphabet(&self) -> &RankedAlphabet {
        self.family.alphabet()
    }

    fn membership(&mut self, g: &Dag) -> Result<Scalar, LearnError> {
        self.membership_queries += 1;
        let pattern = self.family.classify(g).map_err(|e| LearnError::Teacher(e.to_string()))?;
        Ok(match pattern {
            Pattern::Chain(0) => self.field.one(),
            Pattern::Chain(_) | Pattern::Vanishing => self.field.zero(),
            Pattern::Entry { symbol, row, column } => {
                if let Some(v) = self.revealed.get(&(symbol, row, column)) {
                    v.clone()
                } else {
                    let v = self.draw_nonzero();
                    self.revealed.insert((symbol, row, column), v.clone());
                    v
                }
            }
        })
    }

    /// Before every entry is committed: the pattern tree of the first
    /// unrevealed entry, whose value is then fixed to differ from `h`.
    /// Afterwards: an honest comparison with the committed automaton.
    fn equivalence(&mut self, h: &Mta) -> Result<Option<Dag>, LearnError> {
        self.equivalence_queries += 1;
        let n = self.family.n();
        if let Some((symbol, row, column)) = self.first_unrevealed() {
            let k = self.family.alphabet().rank(symbol);
            let mut exps = vec![0; k];
            let mut rest = row;
            for e in exps.iter_mut().rev() {
                *e = rest % n;
                rest /= n;
            }
            let z = self.family.pattern_tree(n - column, symbol, &exps);
            let delta = self.draw_nonzero();
            let value = &h.weight(&z)? + &delta;
            self.revealed.insert((symbol, row, column), value);
            return Ok(Some(z));
        }
        let target = build_hard_automaton(&self.committed());
        match check_equiv(&target, h).map_err(|e| LearnError::Teacher(e.to_string()))? {
            EquivResult::Equivalent => Ok(None),
            EquivResult::Counterexample { dag, .. } => Ok(Some(dag)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{hard_series_value, query_lower_bound};
    use super::*;
    use crate::learner::lmta;
    use crate::trees::{parse_tree, random_tree};

    const Q: Field = Field::Rational;

    fn dag(t: &str, al: &RankedAlphabet) -> Dag {
        Dag::from_tree(&parse_tree(t, al).unwrap())
    }

    #[test]
    fn answers_and_reveals() {
        let fam = HardFamily::with_heavy(2, &[("f", 2)]).unwrap();
        let al = fam.alphabet().clone();
        let mut t = adversarial_teacher(fam, Q, 5);
        assert_eq!(t.membership(&dag("f(f(s0,s0),s0)", &al)).unwrap(), Q.zero());
        assert_eq!(t.revealed(), 0);
        assert_eq!(t.membership(&dag("s1(s1(s0))", &al)).unwrap(), Q.one());
        let v = t.membership(&dag("f(s0,s0)", &al)).unwrap();
        assert_eq!(t.revealed(), 1);
        assert_eq!(t.membership(&dag("s1(s1(f(s0,s1(s1(s0)))))", &al)).unwrap(), v);
        assert_eq!(t.revealed(), 1);
    }

    #[test]
    fn counterexamples_have_the_pattern_shape_and_are_genuine() {
        let fam = HardFamily::with_heavy(2, &[("f", 2)]).unwrap();
        let mut t = adversarial_teacher(fam.clone(), Q, 6);
        let zero = Mta::zero(Q, fam.alphabet().clone());
        let z = t.equivalence(&zero).unwrap().unwrap();
        // first entry (f, row 0, column 0): σ₁^n(f(σ₀, σ₀))
        assert_eq!(fam.classify(&z).unwrap(), Pattern::Entry { symbol: 2, row: 0, column: 0 });
        assert_eq!(z, fam.pattern_tree(2, 2, &[0, 0]));
        assert!(!t.membership(&z).unwrap().is_zero());
    }

    #[test]
    fn learning_against_the_adversary_pays_per_entry() {
        for (n, heavy) in [(1, vec![("s2", 2)]), (2, vec![("s2", 2)]), (2, vec![("g", 1), ("c", 0)])] {
            let fam = HardFamily::with_heavy(n, &heavy).unwrap();
            let mut teacher = adversarial_teacher(fam.clone(), Q, 7);
            let (h, stats) = lmta(&mut teacher).unwrap();
            assert_eq!(teacher.revealed(), fam.entry_count());
            let target = build_hard_automaton(&teacher.committed());
            assert!(check_equiv(&h, &target).unwrap().is_equivalent());
            let queries = stats.membership_queries + stats.equivalence_queries;
            assert!(queries >= fam.entry_count());
            assert!(queries as u128 >= query_lower_bound(fam.alphabet(), fam.dim()));
        }
    }

    #[test]
    fn answers_stay_consistent_with_the_commitment() {
        let fam = HardFamily::with_heavy(3, &[("f", 2), ("g", 1)]).unwrap();
        let mut t = adversarial_teacher(fam.clone(), Q, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut asked = Vec::new();
        for _ in 0..200 {
            let tree = random_tree(fam.alphabet(), 4, &mut rng);
            let v = t.membership(&Dag::from_tree(&tree)).unwrap();
            asked.push((tree, v));
        }
        let inst = t.committed();
        for (tree, v) in asked {
            assert_eq!(hard_series_value(&inst, &tree).unwrap(), v);
        }
    }
}
