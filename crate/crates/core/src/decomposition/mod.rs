//! Tree-decompositions: data model, validation, PACE `.td` I/O and the
//! constructions specific to gadget graphs.

mod claw;
mod forward;
mod greedy;
mod pace;
mod validate;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::Graph;
use crate::lowerbound::CoverError;

pub use claw::{center_cover, claw_shape, decode_assignment, normalize_to_claw, ClawShape, Decoded};
pub use forward::build_from_assignment;
pub use greedy::{greedy_decomposition, min_fill_ordering};
pub use pace::{read_td, write_td};
pub use validate::{validate, ValidationReport, Violation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("assignment has {found} values but the formula has {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("no bag contains the whole vertex set (not a clique, or an invalid decomposition)")]
    NoCommonBag,
    #[error("invalid tree-decomposition: {0}")]
    Invalid(Violation),
    #[error("not a subdivided claw with leaves holding A, B and C: {0}")]
    NotClaw(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A tree with a bag of graph vertices on every node. Bags are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, edges }
    }

    /// One node holding every vertex.
    pub fn trivial(num_vertices: usize) -> Self {
        TreeDecomposition {
            bags: vec![(0..num_vertices).collect()],
            edges: Vec::new(),
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.bags.len()
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn bag(&self, node: usize) -> &[usize] {
        &self.bags[node]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    /// Node adjacency lists; assumes edge endpoints are in range.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(s, t) in &self.edges {
            adj[s].push(t);
            adj[t].push(s);
        }
        adj
    }

    pub fn bag_contains(&self, node: usize, v: usize) -> bool {
        self.bags[node].binary_search(&v).is_ok()
    }

    /// Whether the bag of `node` contains every vertex of `set`.
    pub fn bag_contains_all(&self, node: usize, set: &[usize]) -> bool {
        set.iter().all(|&v| self.bag_contains(node, v))
    }

    /// Whether the bag of `node` contains the contiguous range `range`.
    pub(crate) fn bag_contains_range(&self, node: usize, range: std::ops::Range<usize>) -> bool {
        let bag = &self.bags[node];
        let lo = bag.partition_point(|&v| v < range.start);
        let hi = bag.partition_point(|&v| v < range.end);
        hi - lo == range.len()
    }
}

/// Smallest node whose bag contains all of `set` (a clique has one in every
/// valid decomposition).
pub fn find_clique_node(td: &TreeDecomposition, set: &[usize]) -> Result<usize, DecompositionError> {
    (0..td.num_nodes())
        .find(|&t| td.bag_contains_all(t, set))
        .ok_or(DecompositionError::NoCommonBag)
}

/// Decomposition induced by eliminating vertices in `order`: vertex `v` gets
/// the bag `{v} ∪ (later neighbors in the fill-in graph)`, hanging below its
/// earliest-eliminated later neighbor. Bags contained in a neighboring bag are
/// merged away afterwards.
pub fn decomposition_from_ordering(graph: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = graph.num_vertices();
    assert_eq!(order.len(), n, "ordering must list every vertex once");
    if n == 0 {
        return TreeDecomposition::trivial(0);
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        assert!(position[v] == usize::MAX, "vertex {v} repeated in ordering");
        position[v] = i;
    }
    let mut adj: Vec<FixedBitSet> = (0..n)
        .map(|v| {
            let mut set = FixedBitSet::with_capacity(n);
            set.extend(graph.neighbors(v).iter().copied());
            set
        })
        .collect();
    let mut alive = FixedBitSet::with_capacity(n);
    alive.insert_range(..);

    // node i belongs to order[i]
    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut parent: Vec<Option<usize>> = Vec::with_capacity(n);
    for &v in order {
        alive.set(v, false);
        let mut later = adj[v].clone();
        later.intersect_with(&alive);
        let later_list: Vec<usize> = later.ones().collect();
        for &u in &later_list {
            adj[u].union_with(&later);
            adj[u].set(u, false);
        }
        parent.push(later_list.iter().map(|&u| position[u]).min());
        let mut bag = later_list;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    // join the roots of a forest into one tree
    let last = n - 1;
    for (i, p) in parent.iter_mut().enumerate() {
        if p.is_none() && i != last {
            *p = Some(last);
        }
    }
    contract_subset_bags(bags, parent)
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
    }
    true
}

/// Removes tree nodes whose bag is contained in their parent's (or the other
/// way around, the parent taking over the larger bag). Children precede their
/// parents in the input.
fn contract_subset_bags(mut bags: Vec<Vec<usize>>, mut parent: Vec<Option<usize>>) -> TreeDecomposition {
    let k = bags.len();
    let mut removed = vec![false; k];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (c, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            children[p].push(c);
        }
    }
    for c in 0..k {
        let Some(p) = parent[c] else { continue };
        let merge = if is_subset(&bags[c], &bags[p]) {
            true
        } else if is_subset(&bags[p], &bags[c]) {
            bags[p] = std::mem::take(&mut bags[c]);
            true
        } else {
            false
        };
        if merge {
            removed[c] = true;
            for g in std::mem::take(&mut children[c]) {
                parent[g] = Some(p);
                children[p].push(g);
            }
            children[p].retain(|&x| x != c);
        }
    }
    let mut new_id = vec![usize::MAX; k];
    let mut out_bags = Vec::new();
    for t in 0..k {
        if !removed[t] {
            new_id[t] = out_bags.len();
            out_bags.push(std::mem::take(&mut bags[t]));
        }
    }
    let edges = (0..k)
        .filter(|&t| !removed[t])
        .filter_map(|t| parent[t].map(|p| (new_id[p], new_id[t])))
        .collect();
    TreeDecomposition::new(out_bags, edges)
}
