//! Finite presentations of infinite trees.
//!
//! A [`RegularTree`] is a finite rooted labelled multigraph with a total edge
//! relation; the structure the logics and automata are interpreted on is its
//! unfolding, the infinite tree of finite edge paths from the root. Parallel
//! edges are allowed and each edge spawns a distinct unfolding child, so small
//! graphs can witness graded counting.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// At most this many atomic propositions per signature; letters are bitmasks.
pub const MAX_PROPS: usize = 16;

/// A letter of the alphabet `2^AP`, as a bitmask over the signature's
/// proposition list.
pub type Letter = u32;

/// An ordered list of proposition names defining the alphabet `2^AP`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Signature {
    props: Vec<String>,
}

impl Signature {
    pub fn new(mut props: Vec<String>) -> Result<Self, TreeError> {
        props.sort();
        props.dedup();
        if props.len() > MAX_PROPS {
            return Err(TreeError::TooManyProps(props.len()));
        }
        Ok(Signature { props })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.props.iter().position(|p| p == name)
    }

    /// Number of letters, `2^|AP|`.
    pub fn num_letters(&self) -> usize {
        1usize << self.props.len()
    }

    pub fn letter_of<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Option<Letter> {
        let mut mask = 0u32;
        for n in names {
            mask |= 1u32 << self.index_of(n)?;
        }
        Some(mask)
    }

    pub fn letter_contains(&self, letter: Letter, name: &str) -> bool {
        match self.index_of(name) {
            Some(i) => letter & (1 << i) != 0,
            None => false,
        }
    }

    pub fn letter_names(&self, letter: Letter) -> Vec<&str> {
        self.props
            .iter()
            .enumerate()
            .filter(|(i, _)| letter & (1 << i) != 0)
            .map(|(_, p)| p.as_str())
            .collect()
    }

    pub fn display_letter(&self, letter: Letter) -> String {
        let mut s = String::from("{");
        let mut first = true;
        for name in self.letter_names(letter) {
            if !first {
                s.push(',');
            }
            s.push_str(name);
            first = false;
        }
        s.push('}');
        s
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// Finite rooted labelled multigraph with total edge relation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegularTree {
    pub sig: Signature,
    /// Node names; the index is the node id.
    pub nodes: Vec<String>,
    pub root: usize,
    /// Letter per node, total.
    pub labels: Vec<Letter>,
    pub edges: Vec<Edge>,
    /// Outgoing edge indices per node, derived.
    out: Vec<Vec<usize>>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TreeError {
    TotalityViolation(String),
    DanglingEdge(String),
    MissingLabel(String),
    DuplicateNode(String),
    DuplicateEdge(String),
    UnknownRoot(String),
    UnknownProp(String),
    TooManyProps(usize),
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::TotalityViolation(n) => write!(f, "node {n} has no outgoing edge"),
            TreeError::DanglingEdge(e) => write!(f, "edge {e} references an undeclared node"),
            TreeError::MissingLabel(n) => write!(f, "node {n} has no label"),
            TreeError::DuplicateNode(n) => write!(f, "node {n} declared twice"),
            TreeError::DuplicateEdge(e) => write!(f, "edge {e} declared twice"),
            TreeError::UnknownRoot(n) => write!(f, "root {n} is not a declared node"),
            TreeError::UnknownProp(p) => write!(f, "label uses undeclared proposition {p}"),
            TreeError::TooManyProps(n) => write!(f, "{n} propositions exceed the limit of {MAX_PROPS}"),
        }
    }
}

impl RegularTree {
    /// Builds and validates a tree from named parts. The label map must cover
    /// every node; labels use proposition names of the signature.
    pub fn from_parts(
        props: Vec<String>,
        node_names: Vec<String>,
        labels: &BTreeMap<String, BTreeSet<String>>,
        root: &str,
        edge_list: Vec<(String, String, String)>,
    ) -> Result<Self, TreeError> {
        let sig = Signature::new(props)?;
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, n) in node_names.iter().enumerate() {
            if index.insert(n.as_str(), i).is_some() {
                return Err(TreeError::DuplicateNode(n.clone()));
            }
        }
        let root = *index
            .get(root)
            .ok_or_else(|| TreeError::UnknownRoot(root.to_string()))?;
        let mut node_labels = Vec::with_capacity(node_names.len());
        for n in &node_names {
            let set = labels.get(n).ok_or_else(|| TreeError::MissingLabel(n.clone()))?;
            let mut mask = 0u32;
            for p in set {
                let i = sig
                    .index_of(p)
                    .ok_or_else(|| TreeError::UnknownProp(p.clone()))?;
                mask |= 1 << i;
            }
            node_labels.push(mask);
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut seen_edges = BTreeSet::new();
        for (name, src, dst) in edge_list {
            if !seen_edges.insert(name.clone()) {
                return Err(TreeError::DuplicateEdge(name));
            }
            let src = *index.get(src.as_str()).ok_or_else(|| TreeError::DanglingEdge(name.clone()))?;
            let dst = *index.get(dst.as_str()).ok_or_else(|| TreeError::DanglingEdge(name.clone()))?;
            edges.push(Edge { name, src, dst });
        }
        let tree = RegularTree::assemble(sig, node_names, root, node_labels, edges);
        tree.validate()?;
        Ok(tree)
    }

    fn assemble(
        sig: Signature,
        nodes: Vec<String>,
        root: usize,
        labels: Vec<Letter>,
        edges: Vec<Edge>,
    ) -> Self {
        let mut out = vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            out[e.src].push(i);
        }
        RegularTree { sig, nodes, root, labels, edges, out }
    }

    /// Checks every structural invariant: total labels, declared endpoints,
    /// unique ids and totality of the edge relation.
    pub fn validate(&self) -> Result<(), TreeError> {
        let mut names = BTreeSet::new();
        for n in &self.nodes {
            if !names.insert(n) {
                return Err(TreeError::DuplicateNode(n.clone()));
            }
        }
        if self.root >= self.nodes.len() {
            return Err(TreeError::UnknownRoot(format!("#{}", self.root)));
        }
        if self.labels.len() != self.nodes.len() {
            let missing = self.nodes.get(self.labels.len()).cloned().unwrap_or_default();
            return Err(TreeError::MissingLabel(missing));
        }
        let mut edge_names = BTreeSet::new();
        for e in &self.edges {
            if !edge_names.insert(&e.name) {
                return Err(TreeError::DuplicateEdge(e.name.clone()));
            }
            if e.src >= self.nodes.len() || e.dst >= self.nodes.len() {
                return Err(TreeError::DanglingEdge(e.name.clone()));
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if !self.edges.iter().any(|e| e.src == i) {
                return Err(TreeError::TotalityViolation(n.clone()));
            }
        }
        Ok(())
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn out_edges(&self, node: usize) -> &[usize] {
        &self.out[node]
    }

    pub fn label(&self, node: usize) -> Letter {
        self.labels[node]
    }

    /// Unfolds the depth-bounded prefix of the infinite tree. Children of an
    /// unfolding node are in bijection with the outgoing edges of its graph
    /// node; every leaf at depth `depth` is cut-marked.
    pub fn unfold(&self, depth: usize) -> TruncatedTree {
        let mut nodes = vec![TruncNode {
            graph_node: self.root,
            parent: None,
            depth: 0,
            children: Vec::new(),
            cut: depth == 0,
        }];
        let mut frontier = vec![0usize];
        for d in 0..depth {
            let mut next = Vec::new();
            for &u in &frontier {
                let g = nodes[u].graph_node;
                for &e in &self.out[g] {
                    let idx = nodes.len();
                    nodes.push(TruncNode {
                        graph_node: self.edges[e].dst,
                        parent: Some((u, e)),
                        depth: d + 1,
                        children: Vec::new(),
                        cut: d + 1 == depth,
                    });
                    nodes[u].children.push((e, idx));
                    next.push(idx);
                }
            }
            frontier = next;
        }
        TruncatedTree { nodes, depth }
    }

    /// Deterministic random tree: node count uniform in `[1, max_nodes]`,
    /// out-degree uniform in `[1, 3]`, targets uniform, each proposition
    /// present with probability 1/2.
    pub fn random(seed: u64, max_nodes: usize, ap: &[&str]) -> RegularTree {
        assert!(max_nodes >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = Signature::new(ap.iter().map(|s| s.to_string()).collect()).expect("small ap");
        let n = rng.gen_range(1..=max_nodes);
        let nodes: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let mut mask = 0u32;
            for b in 0..sig.len() {
                if rng.gen_bool(0.5) {
                    mask |= 1 << b;
                }
            }
            labels.push(mask);
        }
        let mut edges = Vec::new();
        for v in 0..n {
            let degree = rng.gen_range(1..=3usize);
            for _ in 0..degree {
                let dst = rng.gen_range(0..n);
                edges.push(Edge {
                    name: format!("e{}", edges.len()),
                    src: v,
                    dst,
                });
            }
        }
        RegularTree::assemble(sig, nodes, 0, labels, edges)
    }
}

/// One node of a truncated unfolding.
#[derive(Clone, Debug)]
pub struct TruncNode {
    pub graph_node: usize,
    /// Parent in the truncation plus the graph edge taken to get here.
    pub parent: Option<(usize, usize)>,
    pub depth: usize,
    /// `(graph edge index, child truncation node)` pairs.
    pub children: Vec<(usize, usize)>,
    pub cut: bool,
}

/// Explicit unfolding of a [`RegularTree`] up to a depth bound. Node 0 is the
/// root; cut leaves sit exactly at the bound.
#[derive(Clone, Debug)]
pub struct TruncatedTree {
    pub nodes: Vec<TruncNode>,
    pub depth: usize,
}

impl TruncatedTree {
    pub fn root(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// A path through the graph, as a sequence of edge indices starting at a
/// designated node (by default the root). Consecutive edges must compose.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreePath {
    pub start: usize,
    pub edges: Vec<usize>,
}

impl TreePath {
    /// The visited node sequence, `edges.len() + 1` long.
    pub fn node_seq(&self, t: &RegularTree) -> Option<Vec<usize>> {
        let mut seq = vec![self.start];
        let mut at = self.start;
        for &e in &self.edges {
            let edge = t.edges.get(e)?;
            if edge.src != at {
                return None;
            }
            at = edge.dst;
            seq.push(at);
        }
        Some(seq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn self_loop(label: &[&str]) -> RegularTree {
        let mut labels = BTreeMap::new();
        labels.insert("v0".to_string(), label.iter().map(|s| s.to_string()).collect());
        RegularTree::from_parts(
            vec!["p".into(), "q".into()],
            vec!["v0".into()],
            &labels,
            "v0",
            vec![("e0".into(), "v0".into(), "v0".into())],
        )
        .unwrap()
    }

    #[test]
    fn minimal_total_graph_is_valid() {
        let t = self_loop(&["p"]);
        assert!(t.validate().is_ok());
    }

    #[test]
    fn totality_violation_detected() {
        let mut labels = BTreeMap::new();
        labels.insert("v0".to_string(), BTreeSet::new());
        let err = RegularTree::from_parts(
            vec!["p".into()],
            vec!["v0".into()],
            &labels,
            "v0",
            vec![],
        )
        .unwrap_err();
        assert_eq!(err, TreeError::TotalityViolation("v0".into()));
    }

    #[test]
    fn dangling_edge_detected() {
        let mut labels = BTreeMap::new();
        labels.insert("v0".to_string(), BTreeSet::new());
        let err = RegularTree::from_parts(
            vec!["p".into()],
            vec!["v0".into()],
            &labels,
            "v0",
            vec![("e0".into(), "v0".into(), "v9".into())],
        )
        .unwrap_err();
        assert_eq!(err, TreeError::DanglingEdge("e0".into()));
    }

    #[test]
    fn missing_label_detected() {
        let labels = BTreeMap::new();
        let err = RegularTree::from_parts(
            vec!["p".into()],
            vec!["v0".into()],
            &labels,
            "v0",
            vec![("e0".into(), "v0".into(), "v0".into())],
        )
        .unwrap_err();
        assert_eq!(err, TreeError::MissingLabel("v0".into()));
    }

    #[test]
    fn unfold_self_loop_is_chain() {
        let t = self_loop(&["p"]);
        let u = t.unfold(3);
        assert_eq!(u.len(), 4);
        for (i, n) in u.nodes.iter().enumerate() {
            assert_eq!(n.graph_node, 0);
            assert_eq!(n.cut, i == 3);
        }
    }

    #[test]
    fn unfold_depth_zero_is_cut_root() {
        let t = self_loop(&[]);
        let u = t.unfold(0);
        assert_eq!(u.len(), 1);
        assert!(u.nodes[0].cut);
    }

    #[test]
    fn parallel_edges_give_distinct_children() {
        let mut labels = BTreeMap::new();
        labels.insert("v0".to_string(), BTreeSet::new());
        labels.insert("v1".to_string(), BTreeSet::new());
        let t = RegularTree::from_parts(
            vec!["p".into()],
            vec!["v0".into(), "v1".into()],
            &labels,
            "v0",
            vec![
                ("e1".into(), "v0".into(), "v1".into()),
                ("e2".into(), "v0".into(), "v1".into()),
                ("e3".into(), "v1".into(), "v1".into()),
            ],
        )
        .unwrap();
        let u = t.unfold(1);
        assert_eq!(u.nodes[0].children.len(), 2);
    }

    /// Node count of the unfolding equals the number of edge paths of
    /// length <= depth, counted by independent enumeration.
    #[test]
    fn unfold_counts_match_path_enumeration() {
        for seed in 0..20u64 {
            let t = RegularTree::random(seed, 5, &["p", "q"]);
            for depth in 0..4 {
                let mut count = 0usize;
                let mut stack = vec![(t.root, 0usize)];
                while let Some((v, d)) = stack.pop() {
                    count += 1;
                    if d < depth {
                        for &e in t.out_edges(v) {
                            stack.push((t.edges[e].dst, d + 1));
                        }
                    }
                }
                assert_eq!(t.unfold(depth).len(), count, "seed {seed} depth {depth}");
            }
        }
    }

    #[test]
    fn unfold_monotone_prefix() {
        let t = RegularTree::random(11, 4, &["p"]);
        let a = t.unfold(2);
        let b = t.unfold(3);
        // The depth-2 prefix of the depth-3 unfolding has the same nodes in
        // the same breadth-first order.
        let prefix: Vec<_> = b.nodes.iter().filter(|n| n.depth <= 2).map(|n| n.graph_node).collect();
        let own: Vec<_> = a.nodes.iter().map(|n| n.graph_node).collect();
        assert_eq!(prefix, own);
    }

    #[test]
    fn random_trees_validate_and_are_deterministic() {
        for seed in 0..50u64 {
            let a = RegularTree::random(seed, 6, &["p", "q"]);
            let b = RegularTree::random(seed, 6, &["p", "q"]);
            assert!(a.validate().is_ok());
            assert_eq!(a, b);
        }
        let single = RegularTree::random(3, 1, &["p"]);
        assert_eq!(single.num_nodes(), 1);
        assert_eq!(single.edges.iter().filter(|e| e.src == 0 && e.dst == 0).count(), single.edges.len());
    }

    #[test]
    fn path_node_sequence_composes() {
        let t = self_loop(&["p"]);
        let p = TreePath { start: 0, edges: vec![0, 0] };
        assert_eq!(p.node_seq(&t), Some(vec![0, 0, 0]));
        let bad = TreePath { start: 0, edges: vec![5] };
        assert_eq!(bad.node_seq(&t), None);
    }
}
