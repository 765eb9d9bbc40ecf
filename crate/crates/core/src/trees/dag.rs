use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::{Label, RankedAlphabet, Tree, TreesError};

pub type NodeId = usize;

/// Default limit on the number of nodes [`Dag::unfold`] may produce.
pub const DEFAULT_UNFOLD_BOUND: usize = 1_000_000;

/// A maximally shared DAG in canonical numbering.
///
/// Node ids follow the order in which a left-to-right depth-first traversal
/// from the root finishes each node, so successors precede their parents and
/// the root is the last node. Together with maximal sharing this makes the
/// representation unique: two DAGs are equal exactly when their unfoldings
/// are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dag {
    labels: Vec<Label>,
    succ: Vec<Box<[NodeId]>>,
}

/// Post-order of the nodes reachable from `root`, each listed once.
fn post_order<'a>(root: NodeId, children: impl Fn(NodeId) -> &'a [NodeId]) -> Vec<NodeId> {
    let mut entered = HashMap::new();
    entered.insert(root, ());
    let mut order = Vec::new();
    let mut stack = vec![(root, 0usize)];
    while let Some((v, i)) = stack.last_mut() {
        let ch = children(*v);
        if *i < ch.len() {
            let c = ch[*i];
            *i += 1;
            if entered.insert(c, ()).is_none() {
                stack.push((c, 0));
            }
        } else {
            order.push(*v);
            stack.pop();
        }
    }
    order
}

impl Dag {
    /// Single-node DAG.
    pub fn leaf(label: Label) -> Dag {
        Dag { labels: vec![label], succ: vec![Box::new([])] }
    }

    /// The trivial context `□`.
    pub fn hole() -> Dag {
        Dag::leaf(Label::Hole)
    }

    pub fn from_tree(t: &Tree) -> Dag {
        let mut pool = DagPool::new();
        let root = pool.import_tree(t);
        pool.extract(root)
    }

    /// Builds the canonical DAG of `root` from nodes listed so that every
    /// successor id is smaller than its parent's.
    pub fn from_nodes(nodes: &[(Label, Vec<NodeId>)], root: NodeId) -> Result<Dag, TreesError> {
        let mut pool = DagPool::new();
        let mut ids = Vec::with_capacity(nodes.len());
        for (v, (label, succ)) in nodes.iter().enumerate() {
            if let Some(&bad) = succ.iter().find(|&&s| s >= v) {
                return Err(TreesError::NotTopological { node: v, succ: bad });
            }
            let mapped: Vec<NodeId> = succ.iter().map(|&s| ids[s]).collect();
            ids.push(pool.intern(*label, &mapped));
        }
        match ids.get(root) {
            Some(&r) => Ok(pool.extract(r)),
            None => Err(TreesError::NotTopological { node: nodes.len(), succ: root }),
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn root(&self) -> NodeId {
        self.labels.len() - 1
    }

    pub fn label(&self, v: NodeId) -> Label {
        self.labels[v]
    }

    pub fn root_label(&self) -> Label {
        self.labels[self.root()]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.succ[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Height of every node's sub-DAG, indexed by node id.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.size()];
        for v in 0..self.size() {
            h[v] = self.succ[v].iter().map(|&c| h[c] + 1).max().unwrap_or(0);
        }
        h
    }

    pub fn height(&self) -> usize {
        self.heights()[self.root()]
    }

    pub fn hole_node(&self) -> Option<NodeId> {
        self.labels.iter().position(|&l| l == Label::Hole)
    }

    /// Number of root-to-hole paths, saturating.
    fn hole_paths(&self) -> u64 {
        let mut paths = vec![0u64; self.size()];
        for v in 0..self.size() {
            paths[v] = if self.labels[v] == Label::Hole { 1 } else { self.succ[v].iter().fold(0u64, |acc, &c| acc.saturating_add(paths[c])) };
        }
        paths[self.root()]
    }

    /// Exactly one hole, reached by a unique path from the root.
    pub fn is_context(&self) -> bool {
        self.hole_paths() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.hole_node().is_none()
    }

    /// Checks labels and arities against the alphabet.
    pub fn validate(&self, alphabet: &RankedAlphabet) -> Result<(), TreesError> {
        for (label, succ) in self.labels.iter().zip(&self.succ) {
            if let Label::Sym(s) = *label {
                if s >= alphabet.len() {
                    return Err(TreesError::UnknownSymbol(format!("#{s}")));
                }
            }
            let expected = alphabet.label_rank(*label);
            if expected != succ.len() {
                return Err(TreesError::Arity { symbol: alphabet.label_name(*label).to_string(), expected, found: succ.len() });
            }
        }
        Ok(())
    }

    /// The canonical DAG rooted at node `v`.
    pub fn sub_dag(&self, v: NodeId) -> Dag {
        let order = post_order(v, |u| &self.succ[u]);
        let mut new_id = HashMap::with_capacity(order.len());
        let mut out = Dag { labels: Vec::with_capacity(order.len()), succ: Vec::with_capacity(order.len()) };
        for old in order {
            new_id.insert(old, out.labels.len());
            out.labels.push(self.labels[old]);
            out.succ.push(self.succ[old].iter().map(|c| new_id[c]).collect());
        }
        out
    }

    /// Node ids ordered by nondecreasing height, ties by id.
    pub fn nodes_by_height(&self) -> Vec<NodeId> {
        let h = self.heights();
        let mut ids: Vec<NodeId> = (0..self.size()).collect();
        ids.sort_by_key(|&v| (h[v], v));
        ids
    }

    /// One sub-DAG per node, in [`Dag::nodes_by_height`] order.
    pub fn sub_dags(&self) -> Vec<Dag> {
        self.nodes_by_height().into_iter().map(|v| self.sub_dag(v)).collect()
    }

    /// Size of the unfolding; may be exponential in `size()`.
    pub fn unfolded_size(&self) -> BigUint {
        let mut sizes: Vec<BigUint> = Vec::with_capacity(self.size());
        for v in 0..self.size() {
            let s = self.succ[v].iter().fold(BigUint::one(), |acc, &c| acc + &sizes[c]);
            sizes.push(s);
        }
        sizes.pop().expect("a DAG has a root")
    }

    /// The tree this DAG represents, refusing unfoldings above `bound` nodes.
    pub fn unfold(&self, bound: usize) -> Result<Tree, TreesError> {
        let size = self.unfolded_size();
        if size.to_usize().is_none_or(|s| s > bound) {
            return Err(TreesError::UnfoldBound { size: size.to_string(), bound });
        }
        let mut trees: Vec<Tree> = Vec::with_capacity(self.size());
        for v in 0..self.size() {
            let children = self.succ[v].iter().map(|&c| trees[c].clone()).collect();
            trees.push(Tree::new(self.labels[v], children));
        }
        Ok(trees.pop().expect("a DAG has a root"))
    }
}

/// `K[G]`: the canonical DAG obtained by putting the root of `g` in place of
/// the hole of the context `k`.
pub fn concat(k: &Dag, g: &Dag) -> Result<Dag, TreesError> {
    let mut pool = DagPool::new();
    let kid = pool.import(k);
    let gid = pool.import(g);
    let root = pool.substitute(kid, gid)?;
    Ok(pool.extract(root))
}

/// Hash-consing store shared by many DAGs: each distinct (label,
/// successors) pair is stored once, so a node id identifies a tree.
#[derive(Clone, Debug, Default)]
pub struct DagPool {
    labels: Vec<Label>,
    succ: Vec<Box<[NodeId]>>,
    heights: Vec<usize>,
    /// Root-to-hole path counts, saturating.
    hole_paths: Vec<u64>,
    index: HashMap<(Label, Box<[NodeId]>), NodeId>,
}

impl DagPool {
    pub fn new() -> DagPool {
        DagPool::default()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The id of the node `label(children…)`, creating it if needed.
    pub fn intern(&mut self, label: Label, children: &[NodeId]) -> NodeId {
        let key = (label, Box::<[NodeId]>::from(children));
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.labels.len();
        let height = children.iter().map(|&c| self.heights[c] + 1).max().unwrap_or(0);
        let paths = if label == Label::Hole { 1 } else { children.iter().fold(0u64, |acc, &c| acc.saturating_add(self.hole_paths[c])) };
        self.labels.push(label);
        self.succ.push(key.1.clone());
        self.heights.push(height);
        self.hole_paths.push(paths);
        self.index.insert(key, id);
        id
    }

    pub fn label(&self, id: NodeId) -> Label {
        self.labels[id]
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.succ[id]
    }

    pub fn height(&self, id: NodeId) -> usize {
        self.heights[id]
    }

    pub fn is_context(&self, id: NodeId) -> bool {
        self.hole_paths[id] == 1
    }

    pub fn is_tree(&self, id: NodeId) -> bool {
        self.hole_paths[id] == 0
    }

    pub fn import(&mut self, dag: &Dag) -> NodeId {
        let mut ids = Vec::with_capacity(dag.size());
        for v in 0..dag.size() {
            let mapped: Vec<NodeId> = dag.children(v).iter().map(|&c| ids[c]).collect();
            ids.push(self.intern(dag.label(v), &mapped));
        }
        ids[dag.root()]
    }

    pub fn import_tree(&mut self, t: &Tree) -> NodeId {
        let children: Vec<NodeId> = t.children().iter().map(|c| self.import_tree(c)).collect();
        self.intern(t.label(), &children)
    }

    /// The canonical standalone DAG of the node `id`.
    pub fn extract(&self, id: NodeId) -> Dag {
        let order = post_order(id, |u| &self.succ[u]);
        let mut new_id = HashMap::with_capacity(order.len());
        let mut out = Dag { labels: Vec::with_capacity(order.len()), succ: Vec::with_capacity(order.len()) };
        for old in order {
            new_id.insert(old, out.labels.len());
            out.labels.push(self.labels[old]);
            out.succ.push(self.succ[old].iter().map(|c| new_id[c]).collect());
        }
        out
    }

    /// Pool version of [`concat`].
    pub fn substitute(&mut self, context: NodeId, g: NodeId) -> Result<NodeId, TreesError> {
        if !self.is_context(context) {
            return Err(TreesError::NotContext(format!("{} root-to-hole paths", self.hole_paths[context])));
        }
        Ok(self.substitute_unchecked(context, g))
    }

    // Follows the unique hole path; every other node is reused as is.
    fn substitute_unchecked(&mut self, v: NodeId, g: NodeId) -> NodeId {
        if self.labels[v] == Label::Hole {
            return g;
        }
        let mut children = self.succ[v].to_vec();
        let j = children.iter().position(|&c| self.hole_paths[c] > 0).expect("context node has a hole below");
        children[j] = self.substitute_unchecked(children[j], g);
        let label = self.labels[v];
        self.intern(label, &children)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::fixtures;

    // a/0, g/1, f/2
    const A: usize = 0;
    const G: usize = 1;
    const F: usize = 2;

    fn a() -> Tree {
        Tree::leaf(A)
    }

    #[test]
    fn leaf_unfolds_to_leaf() {
        assert_eq!(Dag::leaf(Label::Sym(A)).unfold(10).unwrap(), a());
    }

    #[test]
    fn chain_unfolds_to_perfect_tree() {
        let g3 = fixtures::chain_dag(3);
        assert_eq!(g3.size(), 3);
        let t = g3.unfold(DEFAULT_UNFOLD_BOUND).unwrap();
        assert_eq!(t, fixtures::perfect_tree(3));
        assert_eq!((t.size(), t.height()), (7, 2));
    }

    #[test]
    fn diamond_unfolds_by_hand() {
        let d = Dag::from_nodes(&[(Label::Sym(A), vec![]), (Label::Sym(G), vec![0]), (Label::Sym(F), vec![1, 1])], 2).unwrap();
        let ga = Tree::node(G, vec![a()]);
        let t = d.unfold(100).unwrap();
        assert_eq!(t, Tree::node(F, vec![ga.clone(), ga]));
        assert_eq!(t.size(), 5);
    }

    #[test]
    fn unfold_bound_is_enforced() {
        let g = fixtures::chain_dag(30);
        assert_eq!(g.unfolded_size(), BigUint::from((1u64 << 30) - 1));
        assert!(matches!(g.unfold(DEFAULT_UNFOLD_BOUND), Err(TreesError::UnfoldBound { .. })));
    }

    #[test]
    fn duplicate_nodes_are_merged() {
        let d = Dag::from_nodes(&[(Label::Sym(A), vec![]), (Label::Sym(A), vec![]), (Label::Sym(F), vec![0, 1])], 2).unwrap();
        assert_eq!(d.size(), 2);
        assert_eq!(d, Dag::from_tree(&Tree::node(F, vec![a(), a()])));
    }

    #[test]
    fn forward_references_rejected() {
        let err = Dag::from_nodes(&[(Label::Sym(G), vec![1]), (Label::Sym(A), vec![])], 0).unwrap_err();
        assert_eq!(err, TreesError::NotTopological { node: 0, succ: 1 });
    }

    #[test]
    fn sub_dags_of_chain() {
        let g3 = fixtures::chain_dag(3);
        let subs: Vec<Tree> = g3.sub_dags().iter().map(|d| d.unfold(100).unwrap()).collect();
        assert_eq!(subs, vec![fixtures::perfect_tree(1), fixtures::perfect_tree(2), fixtures::perfect_tree(3)]);
        assert_eq!(Dag::leaf(Label::Sym(A)).sub_dags(), vec![Dag::leaf(Label::Sym(A))]);
    }

    #[test]
    fn sub_dags_tie_break_by_id() {
        // f(g(a), a): nodes a(0), g(1), f(2); heights 0, 1, 2.
        let d = Dag::from_tree(&Tree::node(F, vec![Tree::node(G, vec![a()]), a()]));
        assert_eq!(d.nodes_by_height(), vec![0, 1, 2]);
        // f(a, g(a)) numbers the same nodes identically: a is finished first.
        let e = Dag::from_tree(&Tree::node(F, vec![a(), Tree::node(G, vec![a()])]));
        assert_eq!(e.labels(), &[Label::Sym(A), Label::Sym(G), Label::Sym(F)]);
    }

    #[test]
    fn concat_examples() {
        let g = Dag::from_tree(&Tree::node(F, vec![a(), Tree::node(G, vec![a()])]));
        assert_eq!(concat(&Dag::hole(), &g).unwrap(), g);
        let k = Dag::from_tree(&Tree::node(F, vec![Tree::hole(), a()]));
        let expected = Dag::from_tree(&Tree::node(F, vec![a(), a()]));
        assert_eq!(concat(&k, &Dag::leaf(Label::Sym(A))).unwrap(), expected);
        assert_eq!(concat(&k, &Dag::leaf(Label::Sym(A))).unwrap().size(), 2);
    }

    #[test]
    fn concat_rejects_non_contexts() {
        let t = Dag::leaf(Label::Sym(A));
        assert!(matches!(concat(&t, &t), Err(TreesError::NotContext(_))));
        let two_holes = Dag::from_tree(&Tree::node(F, vec![Tree::hole(), Tree::hole()]));
        assert!(!two_holes.is_context());
        assert!(matches!(concat(&two_holes, &t), Err(TreesError::NotContext(_))));
    }

    #[test]
    fn context_concatenation_stays_context() {
        let k = Dag::from_tree(&Tree::node(F, vec![Tree::hole(), a()]));
        let inner = Dag::from_tree(&Tree::node(G, vec![Tree::hole()]));
        let kk = concat(&k, &inner).unwrap();
        assert!(kk.is_context());
        assert_eq!(kk.unfold(100).unwrap(), Tree::node(F, vec![Tree::node(G, vec![Tree::hole()]), a()]));
    }

    #[test]
    fn pool_ids_identify_trees() {
        let mut pool = DagPool::new();
        let t = Tree::node(F, vec![Tree::node(G, vec![a()]), Tree::node(G, vec![a()])]);
        let x = pool.import_tree(&t);
        let y = pool.import(&Dag::from_tree(&t));
        assert_eq!(x, y);
        assert_eq!(pool.len(), 3);
        assert_eq!(pool.height(x), 2);
        assert_eq!(pool.extract(x), Dag::from_tree(&t));
    }
}
