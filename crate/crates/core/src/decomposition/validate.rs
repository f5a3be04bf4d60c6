use std::fmt;

use fixedbitset::FixedBitSet;

use crate::graph::Graph;

use super::TreeDecomposition;

/// The first tree-decomposition axiom found violated. Node and vertex ids in
/// the rendered message are 1-based, as in `.td` files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoNodes,
    TreeEdgeOutOfRange { node: usize },
    TreeSelfLoop { node: usize },
    NotATree { edge: (usize, usize) },
    TreeDisconnected { num_edges: usize, num_nodes: usize },
    UnknownVertex { node: usize, vertex: usize },
    MissingVertex { vertex: usize },
    TraceDisconnected { vertex: usize },
    EdgeUncovered { u: usize, v: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NoNodes => write!(f, "decomposition has no nodes"),
            Violation::TreeEdgeOutOfRange { node } => write!(f, "tree edge uses unknown node {}", node + 1),
            Violation::TreeSelfLoop { node } => write!(f, "tree edge loops at node {}", node + 1),
            Violation::NotATree { edge: (s, t) } => write!(f, "tree edge {}-{} closes a cycle", s + 1, t + 1),
            Violation::TreeDisconnected { num_edges, num_nodes } => {
                write!(f, "tree is disconnected ({num_edges} edges for {num_nodes} nodes)")
            }
            Violation::UnknownVertex { node, vertex } => {
                write!(
                    f,
                    "bag {} holds vertex {} which is not in the graph",
                    node + 1,
                    vertex + 1
                )
            }
            Violation::MissingVertex { vertex } => write!(f, "vertex {} is in no bag", vertex + 1),
            Violation::TraceDisconnected { vertex } => {
                write!(f, "the bags holding vertex {} are not connected", vertex + 1)
            }
            Violation::EdgeUncovered { u, v } => write!(f, "edge {}-{} is in no bag", u + 1, v + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub width: usize,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn check(graph: &Graph, td: &TreeDecomposition) -> Result<(), Violation> {
    let k = td.num_nodes();
    let n = graph.num_vertices();
    if k == 0 {
        return Err(Violation::NoNodes);
    }
    let mut uf: Vec<usize> = (0..k).collect();
    for &(s, t) in td.edges() {
        if s >= k || t >= k {
            return Err(Violation::TreeEdgeOutOfRange {
                node: if s >= k { s } else { t },
            });
        }
        if s == t {
            return Err(Violation::TreeSelfLoop { node: s });
        }
        let (rs, rt) = (find(&mut uf, s), find(&mut uf, t));
        if rs == rt {
            return Err(Violation::NotATree { edge: (s, t) });
        }
        uf[rs] = rt;
    }
    if td.edges().len() != k - 1 {
        return Err(Violation::TreeDisconnected {
            num_edges: td.edges().len(),
            num_nodes: k,
        });
    }

    // traces as node sets; a subset of a tree is connected iff it spans
    // exactly |nodes| - 1 tree edges
    let mut traces = vec![FixedBitSet::with_capacity(k); n];
    let mut trace_size = vec![0usize; n];
    for (t, bag) in td.bags().iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(Violation::UnknownVertex { node: t, vertex: v });
            }
            traces[v].insert(t);
            trace_size[v] += 1;
        }
    }
    if let Some(vertex) = (0..n).find(|&v| trace_size[v] == 0) {
        return Err(Violation::MissingVertex { vertex });
    }
    let mut inner_edges = vec![0usize; n];
    for &(s, t) in td.edges() {
        let (a, b) = (td.bag(s), td.bag(t));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    inner_edges[a[i]] += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    if let Some(vertex) = (0..n).find(|&v| inner_edges[v] + 1 != trace_size[v]) {
        return Err(Violation::TraceDisconnected { vertex });
    }
    for (u, v) in graph.edges() {
        if traces[u].is_disjoint(&traces[v]) {
            return Err(Violation::EdgeUncovered { u, v });
        }
    }
    Ok(())
}

/// Checks the tree-decomposition axioms for `td` against `graph`.
pub fn validate(graph: &Graph, td: &TreeDecomposition) -> ValidationReport {
    ValidationReport {
        width: td.width(),
        violation: check(graph, td).err(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn single_bag_is_valid() {
        let g = Graph::complete(4);
        let report = validate(&g, &TreeDecomposition::trivial(4));
        assert!(report.is_valid());
        assert_eq!(report.width, 3);
    }

    #[test]
    fn detects_each_axiom() {
        let g = path3();
        let ok = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(validate(&g, &ok).is_valid());

        let cases = [
            (TreeDecomposition::new(vec![], vec![]), Violation::NoNodes),
            (
                TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 5)]),
                Violation::TreeEdgeOutOfRange { node: 5 },
            ),
            (
                TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![]),
                Violation::TreeDisconnected {
                    num_edges: 0,
                    num_nodes: 2,
                },
            ),
            (
                TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1), (1, 0)]),
                Violation::NotATree { edge: (1, 0) },
            ),
            (
                TreeDecomposition::new(vec![vec![0, 1], vec![1, 7]], vec![(0, 1)]),
                Violation::UnknownVertex { node: 1, vertex: 7 },
            ),
            (
                TreeDecomposition::new(vec![vec![0, 1], vec![1]], vec![(0, 1)]),
                Violation::MissingVertex { vertex: 2 },
            ),
            (
                TreeDecomposition::new(vec![vec![0, 1], vec![2], vec![1, 2]], vec![(0, 1), (1, 2)]),
                Violation::TraceDisconnected { vertex: 1 },
            ),
            (
                TreeDecomposition::new(vec![vec![0, 1], vec![2]], vec![(0, 1)]),
                Violation::EdgeUncovered { u: 1, v: 2 },
            ),
        ];
        for (td, expected) in cases {
            assert_eq!(validate(&g, &td).violation, Some(expected));
        }
    }

    #[test]
    fn messages_are_one_based() {
        let msg = Violation::EdgeUncovered { u: 0, v: 4 }.to_string();
        assert_eq!(msg, "edge 1-5 is in no bag");
    }
}
