use rand::Rng;

use super::{Dag, DagPool, Label, NodeId, RankedAlphabet, Tree, TreesError};

/// Calls `f` on every tuple in `[0, bound)^k`, lexicographically.
pub(crate) fn for_each_tuple(k: usize, bound: usize, mut f: impl FnMut(&[usize])) {
    if k > 0 && bound == 0 {
        return;
    }
    let mut idx = vec![0usize; k];
    loop {
        f(&idx);
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < bound {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Every tree of height below `bound`, grouped by height, in symbol
/// declaration order and lexicographic child tuples within each group.
pub fn trees_below_height(alphabet: &RankedAlphabet, bound: usize, budget: usize) -> Result<Vec<Tree>, TreesError> {
    let mut all: Vec<Tree> = Vec::new();
    // all[..prev] have height < i - 1, all[prev..] have height i - 1
    let mut prev = 0;
    for height in 0..bound {
        let current = all.len();
        let mut fresh = Vec::new();
        for (s, sym) in alphabet.symbols().iter().enumerate() {
            if (height == 0) != (sym.rank == 0) {
                continue;
            }
            let mut overflow = false;
            for_each_tuple(sym.rank, current, |idx| {
                if overflow || (height > 0 && idx.iter().all(|&i| i < prev)) {
                    return;
                }
                if all.len() + fresh.len() >= budget {
                    overflow = true;
                    return;
                }
                fresh.push(Tree::node(s, idx.iter().map(|&i| all[i].clone()).collect()));
            });
            if overflow {
                return Err(TreesError::Budget(budget));
            }
        }
        prev = current;
        all.extend(fresh);
    }
    Ok(all)
}

/// A tree of height at most `max_height`: every node draws its symbol
/// uniformly, from the nullary symbols only once the height budget is spent.
pub fn random_tree<R: Rng + ?Sized>(alphabet: &RankedAlphabet, max_height: usize, rng: &mut R) -> Tree {
    let pool: Vec<usize> = if max_height == 0 {
        (0..alphabet.len()).filter(|&s| alphabet.rank(s) == 0).collect()
    } else {
        (0..alphabet.len()).collect()
    };
    let s = pool[rng.random_range(0..pool.len())];
    Tree::node(s, (0..alphabet.rank(s)).map(|_| random_tree(alphabet, max_height.saturating_sub(1), rng)).collect())
}

/// Every canonical hole-free DAG with at most `max_nodes` nodes, ordered by
/// height and then by discovery.
pub fn enumerate_dags(alphabet: &RankedAlphabet, max_nodes: usize, budget: usize) -> Result<Vec<Dag>, TreesError> {
    let mut pool = DagPool::new();
    // (root, sorted reachable node set)
    let mut entries: Vec<(NodeId, Vec<NodeId>)> = Vec::new();
    if max_nodes == 0 {
        return Ok(Vec::new());
    }
    for (s, sym) in alphabet.symbols().iter().enumerate() {
        if sym.rank == 0 {
            let id = pool.intern(Label::Sym(s), &[]);
            entries.push((id, vec![id]));
        }
    }
    let mut level_start = 0;
    let mut nodes: Vec<NodeId> = Vec::with_capacity(max_nodes * 2);
    while level_start < entries.len() {
        let level_end = entries.len();
        // only DAGs with room for a parent can be children
        let open: Vec<usize> = (0..level_end).filter(|&i| entries[i].1.len() < max_nodes).collect();
        let mut fresh: Vec<(NodeId, Vec<NodeId>)> = Vec::new();
        for (s, sym) in alphabet.symbols().iter().enumerate() {
            if sym.rank == 0 {
                continue;
            }
            let mut overflow = false;
            for_each_tuple(sym.rank, open.len(), |pos| {
                if overflow || pos.iter().all(|&p| open[p] < level_start) {
                    return;
                }
                nodes.clear();
                for &p in pos {
                    nodes.extend_from_slice(&entries[open[p]].1);
                }
                nodes.sort_unstable();
                nodes.dedup();
                if nodes.len() + 1 > max_nodes {
                    return;
                }
                if entries.len() + fresh.len() >= budget {
                    overflow = true;
                    return;
                }
                let children: Vec<NodeId> = pos.iter().map(|&p| entries[open[p]].0).collect();
                let id = pool.intern(Label::Sym(s), &children);
                let mut set = nodes.clone();
                set.push(id);
                fresh.push((id, set));
            });
            if overflow {
                return Err(TreesError::Budget(budget));
            }
        }
        level_start = level_end;
        entries.extend(fresh);
    }
    Ok(entries.iter().map(|(id, _)| pool.extract(*id)).collect())
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn sigma() -> RankedAlphabet {
        RankedAlphabet::new([("a", 0), ("g", 1), ("f", 2)]).unwrap()
    }

    #[test]
    fn tuples_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_tuple(2, 2, |t| seen.push(t.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut count = 0;
        for_each_tuple(0, 5, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn tree_counts_by_height() {
        // N(<=h) = 1 + N(<=h-1) + N(<=h-1)^2 over {a/0, g/1, f/2}
        let counts = [1usize, 3, 13, 183];
        for (h, &n) in counts.iter().enumerate() {
            let ts = trees_below_height(&sigma(), h + 1, 1 << 20).unwrap();
            assert_eq!(ts.len(), n);
            assert!(ts.iter().all(|t| t.height() <= h));
            assert_eq!(ts.iter().collect::<HashSet<_>>().len(), n);
        }
        assert!(matches!(trees_below_height(&sigma(), 4, 100), Err(TreesError::Budget(100))));
    }

    #[test]
    fn random_trees_respect_the_height_bound() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let mut heights = HashSet::new();
        for _ in 0..300 {
            let t = random_tree(&sigma(), 3, &mut rng);
            t.validate(&sigma()).unwrap();
            assert!(t.height() <= 3);
            heights.insert(t.height());
        }
        assert_eq!(heights.len(), 4);
    }

    /// Oracle: close the leaf under every symbol in a separate pool for
    /// `max - 1` rounds, keeping nodes whose extracted DAG is small enough.
    /// A DAG with `max` nodes has height below `max`.
    fn dags_via_trees(max: usize) -> HashSet<Dag> {
        let alphabet = sigma();
        let mut out = HashSet::new();
        let mut pool = DagPool::new();
        // Work with pool ids level by level to avoid materializing huge trees.
        let mut ids: Vec<NodeId> = vec![pool.intern(Label::Sym(0), &[])];
        let size_of = |pool: &DagPool, id: NodeId| pool.extract(id).size();
        for _ in 1..max {
            let mut next = ids.clone();
            for (s, sym) in alphabet.symbols().iter().enumerate().skip(1) {
                for_each_tuple(sym.rank, ids.len(), |idx| {
                    let ch: Vec<NodeId> = idx.iter().map(|&i| ids[i]).collect();
                    let id = pool.intern(Label::Sym(s), &ch);
                    if !next.contains(&id) && size_of(&pool, id) <= max {
                        next.push(id);
                    }
                });
            }
            ids = next;
        }
        for id in ids {
            out.insert(pool.extract(id));
        }
        out
    }

    #[test]
    fn dag_enumeration_matches_tree_oracle() {
        for max in 1..=4 {
            let got = enumerate_dags(&sigma(), max, 1 << 20).unwrap();
            let set: HashSet<Dag> = got.iter().cloned().collect();
            assert_eq!(set.len(), got.len(), "duplicates at max {max}");
            assert!(got.iter().all(|d| d.size() <= max));
            assert_eq!(set, dags_via_trees(max), "max {max}");
        }
    }
}
