//! Exact treewidth oracles.
//!
//! [`weighted_treewidth_exact`] runs a dynamic program over vertex subsets:
//! `dp[S]` is the least possible maximum bag weight when the vertices of `S`
//! are eliminated first. Eliminating `v` after `S` creates the bag
//! `{v} ∪ Q(S, v)`, where `Q(S, v)` holds the vertices outside `S ∪ {v}`
//! reachable from `v` through `S`. Every clique can be eliminated last in some
//! optimal ordering, so the table only ranges over subsets of the vertices
//! outside one greedily chosen clique.
//!
//! [`brute_force_ordering_tw`] enumerates every elimination ordering and is
//! only meant to validate the dynamic program on tiny graphs.

use std::fmt::Write as _;
use std::ops::Range;

use thiserror::Error;

use crate::graph::{parse_num, parse_vertex, Graph, GraphError};
use crate::reduction::ReductionInstance;

/// Largest vertex count accepted by the subset dynamic program.
pub const MAX_DP_VERTICES: usize = 26;
/// Largest vertex count accepted by the ordering brute force.
pub const MAX_BRUTE_FORCE_VERTICES: usize = 9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreewidthError {
    #[error("{num_vertices} vertices exceed the oracle budget of {max}")]
    TooLarge { num_vertices: usize, max: usize },
    #[error("vertex {0} has weight 0")]
    ZeroWeight(usize),
    #[error("expected {expected} weights, got {found}")]
    WeightCount { expected: usize, found: usize },
    #[error(transparent)]
    Format(#[from] GraphError),
}

/// A graph with a positive weight on every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    graph: Graph,
    weights: Vec<usize>,
}

impl WeightedGraph {
    pub fn new(graph: Graph, weights: Vec<usize>) -> Result<Self, TreewidthError> {
        if weights.len() != graph.num_vertices() {
            return Err(TreewidthError::WeightCount {
                expected: graph.num_vertices(),
                found: weights.len(),
            });
        }
        if let Some(v) = weights.iter().position(|&w| w == 0) {
            return Err(TreewidthError::ZeroWeight(v));
        }
        Ok(WeightedGraph { graph, weights })
    }

    pub fn unit(graph: Graph) -> Self {
        let weights = vec![1; graph.num_vertices()];
        WeightedGraph { graph, weights }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> usize {
        self.weights[v]
    }

    /// Replaces every vertex by a clique of its weight; returns the expanded
    /// graph and the vertex range of each clique.
    pub fn expand(&self) -> (Graph, Vec<Range<usize>>) {
        let mut ranges = Vec::with_capacity(self.weights.len());
        let mut next = 0;
        for &w in &self.weights {
            ranges.push(next..next + w);
            next += w;
        }
        let mut edges = Vec::new();
        for r in &ranges {
            for u in r.clone() {
                edges.extend((u + 1..r.end).map(|v| (u, v)));
            }
        }
        for (a, b) in self.graph.edges() {
            for u in ranges[a].clone() {
                edges.extend(ranges[b].clone().map(|v| (u, v)));
            }
        }
        (
            Graph::from_edges(next, edges).expect("expanded edges are in range"),
            ranges,
        )
    }
}

/// Exact treewidth, for graphs with at most [`MAX_DP_VERTICES`] vertices.
pub fn treewidth_exact(graph: &Graph) -> Result<usize, TreewidthError> {
    weighted_treewidth_exact(&WeightedGraph::unit(graph.clone()))
}

/// Minimum over elimination orderings of `max_v w(v) + w(Q(v)) − 1`.
pub fn weighted_treewidth_exact(graph: &WeightedGraph) -> Result<usize, TreewidthError> {
    weighted_treewidth_with_budget(graph, MAX_DP_VERTICES)
}

pub fn weighted_treewidth_with_budget(graph: &WeightedGraph, max_vertices: usize) -> Result<usize, TreewidthError> {
    SubsetDp::new(graph, max_vertices)?.solve().map(|(w, _)| w)
}

/// An elimination ordering attaining the exact (weighted) treewidth.
pub fn optimal_elimination_ordering(
    graph: &WeightedGraph,
    max_vertices: usize,
) -> Result<(usize, Vec<usize>), TreewidthError> {
    SubsetDp::new(graph, max_vertices)?.solve()
}

const INF: u32 = u32::MAX;

struct SubsetDp {
    /// Adjacency masks in the relabelled order: free vertices first, clique last.
    adj: Vec<u32>,
    weight: Vec<u32>,
    /// `relabel[i]` is the original vertex at position `i`.
    relabel: Vec<usize>,
    free: usize,
    /// Weight sums of 11-bit chunks.
    chunk_sums: [Vec<u32>; 3],
}

impl SubsetDp {
    fn new(graph: &WeightedGraph, max_vertices: usize) -> Result<Self, TreewidthError> {
        let n = graph.graph.num_vertices();
        let cap = max_vertices.min(31);
        if n > cap {
            return Err(TreewidthError::TooLarge {
                num_vertices: n,
                max: cap,
            });
        }
        let clique = greedy_clique(&graph.graph);
        let mut in_clique = vec![false; n];
        for &v in &clique {
            in_clique[v] = true;
        }
        let relabel: Vec<usize> = (0..n)
            .filter(|&v| !in_clique[v])
            .chain(clique.iter().copied())
            .collect();
        let mut position = vec![0; n];
        for (i, &v) in relabel.iter().enumerate() {
            position[v] = i;
        }
        let adj: Vec<u32> = relabel
            .iter()
            .map(|&v| {
                graph
                    .graph
                    .neighbors(v)
                    .iter()
                    .fold(0u32, |acc, &u| acc | 1 << position[u])
            })
            .collect();
        let weight: Vec<u32> = relabel.iter().map(|&v| graph.weights[v] as u32).collect();
        let chunk_sums = std::array::from_fn(|c| {
            (0..1usize << 11)
                .map(|bits| {
                    (0..11)
                        .filter(|b| bits >> b & 1 == 1)
                        .map(|b| weight.get(11 * c + b).copied().unwrap_or(0))
                        .sum()
                })
                .collect()
        });
        Ok(SubsetDp {
            adj,
            weight,
            relabel,
            free: n - clique.len(),
            chunk_sums,
        })
    }

    fn weight_of(&self, mask: u32) -> u32 {
        self.chunk_sums[0][(mask & 0x7ff) as usize]
            + self.chunk_sums[1][(mask >> 11 & 0x7ff) as usize]
            + self.chunk_sums[2][(mask >> 22) as usize]
    }

    /// Components of `G[set]` with their outside neighborhoods.
    fn components(&self, set: u32) -> Vec<(u32, u32)> {
        let mut comps = Vec::new();
        let mut rest = set;
        while rest != 0 {
            let seed = rest & rest.wrapping_neg();
            let mut comp = seed;
            let mut frontier = seed;
            let mut reach = 0;
            while frontier != 0 {
                let mut next = 0;
                for b in bits(frontier) {
                    next |= self.adj[b];
                }
                reach |= next;
                frontier = next & set & !comp;
                comp |= frontier;
            }
            comps.push((comp, reach & !set));
            rest &= !comp;
        }
        comps
    }

    /// Weight of the bag created by eliminating `v` right after `set`.
    fn bag_weight(&self, set: u32, v: usize, comps: &[(u32, u32)]) -> u32 {
        let bit = 1u32 << v;
        let mut q = self.adj[v] & !set;
        for &(_, nb) in comps {
            if nb & bit != 0 {
                q |= nb;
            }
        }
        self.weight[v] + self.weight_of(q & !bit)
    }

    /// Bag weight of a greedy (minimum weighted degree) ordering of the free
    /// vertices followed by the clique.
    fn greedy_bound(&self) -> u32 {
        let n = self.adj.len();
        let mut adj = self.adj.clone();
        let mut alive: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
        let mut worst = 0;
        for _ in 0..n {
            let candidates = if alive & ((1 << self.free) - 1) != 0 {
                alive & ((1 << self.free) - 1)
            } else {
                alive
            };
            let v = bits(candidates)
                .min_by_key(|&v| self.weight_of(adj[v] & alive))
                .expect("candidates are non-empty");
            let nb = adj[v] & alive & !(1 << v);
            worst = worst.max(self.weight[v] + self.weight_of(nb));
            for u in bits(nb) {
                adj[u] |= nb & !(1 << u);
            }
            alive &= !(1 << v);
        }
        worst
    }

    fn solve(&self) -> Result<(usize, Vec<usize>), TreewidthError> {
        let n = self.adj.len();
        if n == 0 {
            return Ok((0, Vec::new()));
        }
        let free = self.free;
        let full_free: u32 = (1u32 << free) - 1;
        let clique_mask = ((1u64 << n) - 1) as u32 & !full_free;
        let clique_weight = self.weight_of(clique_mask);
        let bound = self.greedy_bound();

        let mut dp = vec![INF; 1usize << free];
        dp[0] = 0;
        for set in 0..=full_free {
            let val = dp[set as usize];
            if val == INF || val > bound {
                continue;
            }
            let comps = self.components(set);
            for v in bits(full_free & !set) {
                let cand = val.max(self.bag_weight(set, v, &comps));
                let slot = &mut dp[(set | 1 << v) as usize];
                if cand < *slot {
                    *slot = cand;
                }
            }
        }
        let best = dp[full_free as usize].max(clique_weight);
        debug_assert!(best <= bound);

        // walk back through the table to recover an ordering
        let mut order = Vec::with_capacity(n);
        let mut set = full_free;
        while set != 0 {
            let target = dp[set as usize];
            let v = bits(set)
                .find(|&v| {
                    let prev = set & !(1 << v);
                    let before = dp[prev as usize];
                    before != INF && before.max(self.bag_weight(prev, v, &self.components(prev))) == target
                })
                .expect("dp entries have a predecessor");
            order.push(self.relabel[v]);
            set &= !(1 << v);
        }
        order.reverse();
        order.extend(self.relabel[free..].iter().copied());
        Ok((best as usize - 1, order))
    }
}

fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// Largest clique found by greedy extension from every seed vertex.
fn greedy_clique(graph: &Graph) -> Vec<usize> {
    let n = graph.num_vertices();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| std::cmp::Reverse(graph.degree(v)));
    let mut best = Vec::new();
    for seed in 0..n {
        let mut clique = vec![seed];
        for &v in &by_degree {
            if v != seed && clique.iter().all(|&u| graph.has_edge(u, v)) {
                clique.push(v);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

/// Width of a given elimination ordering (maximum back-degree in the fill-in
/// process), with unit weights.
pub fn ordering_width(graph: &Graph, order: &[usize]) -> usize {
    let n = graph.num_vertices();
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut higher: Vec<std::collections::BTreeSet<usize>> = (0..n)
        .map(|v| {
            graph
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| position[u] > position[v])
                .collect()
        })
        .collect();
    let mut width = 0;
    for &v in order {
        let nb: Vec<usize> = higher[v].iter().copied().collect();
        width = width.max(nb.len());
        let Some(&first) = nb.iter().min_by_key(|&&u| position[u]) else {
            continue;
        };
        for &u in &nb {
            if u != first {
                higher[first].insert(u);
            }
        }
    }
    width
}

/// Treewidth by trying every elimination ordering. Only for tiny graphs.
pub fn brute_force_ordering_tw(graph: &Graph) -> Result<usize, TreewidthError> {
    let n = graph.num_vertices();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(TreewidthError::TooLarge {
            num_vertices: n,
            max: MAX_BRUTE_FORCE_VERTICES,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<u16> = (0..n)
        .map(|v| graph.neighbors(v).iter().fold(0u16, |acc, &u| acc | 1 << u))
        .collect();
    fn search(adj: &[u16], alive: u16, width: usize, best: &mut usize) {
        if alive == 0 {
            *best = (*best).min(width);
            return;
        }
        for v in 0..adj.len() {
            if alive >> v & 1 == 0 {
                continue;
            }
            let nb = adj[v] & alive;
            let mut next = adj.to_vec();
            for u in 0..adj.len() {
                if nb >> u & 1 == 1 {
                    next[u] |= nb & !(1 << u);
                }
            }
            search(&next, alive & !(1 << v), width.max(nb.count_ones() as usize), best);
        }
    }
    let mut best = usize::MAX;
    search(&adj, ((1u32 << n) - 1) as u16, 0, &mut best);
    Ok(best)
}

/// The gadget graph with every `B(x_i)` and `C(x_i)` contracted to one vertex
/// of weight `γ_i`. Quotient vertices are the clause vertices, then the `B`
/// modules, then the `C` modules; `modules[q]` is the expanded range of `q`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub graph: WeightedGraph,
    pub modules: Vec<Range<usize>>,
}

pub fn quotient(instance: &ReductionInstance) -> Quotient {
    let n = instance.formula().num_vars();
    let a = instance.a_range();
    let mut modules: Vec<Range<usize>> = a.clone().map(|v| v..v + 1).collect();
    modules.extend((1..=n).map(|i| instance.b_module(i)));
    modules.extend((1..=n).map(|i| instance.c_module(i)));
    let mut owner = vec![0; instance.num_vertices()];
    for (q, range) in modules.iter().enumerate() {
        for v in range.clone() {
            owner[v] = q;
        }
    }
    let edges: Vec<(usize, usize)> = instance
        .graph()
        .edges()
        .map(|(u, v)| (owner[u], owner[v]))
        .filter(|(u, v)| u != v)
        .collect();
    let graph = Graph::from_edges(modules.len(), edges).expect("quotient edges are in range");
    let weights = modules.iter().map(|r| r.len()).collect();
    Quotient {
        graph: WeightedGraph { graph, weights },
        modules,
    }
}

/// Exact treewidth of the gadget graph through its module quotient.
pub fn treewidth_via_quotient(instance: &ReductionInstance) -> Result<usize, TreewidthError> {
    weighted_treewidth_exact(&quotient(instance).graph)
}

/// Optimal elimination ordering of the gadget graph, found on the quotient
/// and expanded module by module.
pub fn optimal_ordering_via_quotient(
    instance: &ReductionInstance,
    max_vertices: usize,
) -> Result<(usize, Vec<usize>), TreewidthError> {
    let q = quotient(instance);
    let (width, order) = optimal_elimination_ordering(&q.graph, max_vertices)?;
    let expanded = order.into_iter().flat_map(|v| q.modules[v].clone()).collect();
    Ok((width, expanded))
}

/// Reads the weighted `.gr` extension: a `.gr` document with optional
/// `w <vertex> <weight>` lines. Missing weights default to 1.
pub fn read_weighted_gr(text: &str) -> Result<WeightedGraph, TreewidthError> {
    let mut plain = String::new();
    let mut weight_lines = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('w') {
            weight_lines.push((lineno + 1, line.to_string()));
            // keep line numbers aligned for errors from the plain reader
            plain.push_str("c\n");
        } else {
            plain.push_str(line);
            plain.push('\n');
        }
    }
    let graph = crate::graph::read_gr(&plain)?;
    let n = graph.num_vertices();
    let mut weights: Vec<Option<usize>> = vec![None; n];
    for (lineno, line) in weight_lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "w" {
            return Err(GraphError::parse(lineno, "expected `w <vertex> <weight>`").into());
        }
        let v = parse_vertex(lineno, fields[1], n)?;
        let w = parse_num(lineno, fields[2])?;
        if weights[v].replace(w).is_some() {
            return Err(GraphError::parse(lineno, format!("second weight for vertex {}", v + 1)).into());
        }
    }
    WeightedGraph::new(graph, weights.into_iter().map(|w| w.unwrap_or(1)).collect())
}

pub fn write_weighted_gr(graph: &WeightedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "p tw {} {}", graph.graph.num_vertices(), graph.graph.num_edges()).unwrap();
    for (v, w) in graph.weights.iter().enumerate() {
        writeln!(out, "w {} {}", v + 1, w).unwrap();
    }
    for (u, v) in graph.graph.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Formula;
    use crate::reduction::{build_graph, GammaProfile};

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
    }

    #[test]
    fn small_known_values() {
        assert_eq!(treewidth_exact(&Graph::complete(5)), Ok(4));
        assert_eq!(treewidth_exact(&cycle(5)), Ok(2));
        assert_eq!(treewidth_exact(&Graph::empty(3)), Ok(0));
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(treewidth_exact(&path), Ok(1));
        assert_eq!(brute_force_ordering_tw(&path), Ok(1));
        let k4_minus = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(brute_force_ordering_tw(&k4_minus), Ok(2));
        assert_eq!(treewidth_exact(&k4_minus), Ok(2));
    }

    #[test]
    fn petersen_graph() {
        assert_eq!(treewidth_exact(&petersen()), Ok(4));
        assert!(matches!(
            brute_force_ordering_tw(&petersen()),
            Err(TreewidthError::TooLarge { .. })
        ));
    }

    #[test]
    fn ordering_matches_width() {
        let g = petersen();
        let (w, order) = optimal_elimination_ordering(&WeightedGraph::unit(g.clone()), 26).unwrap();
        assert_eq!(w, 4);
        assert_eq!(ordering_width(&g, &order), 4);
    }

    #[test]
    fn weighted_basics() {
        let single = WeightedGraph::new(Graph::empty(1), vec![5]).unwrap();
        assert_eq!(weighted_treewidth_exact(&single), Ok(4));
        assert_eq!(
            weighted_treewidth_exact(&WeightedGraph::unit(Graph::complete(5))),
            Ok(4)
        );
        assert_eq!(
            WeightedGraph::new(Graph::empty(2), vec![1, 0]),
            Err(TreewidthError::ZeroWeight(1))
        );
        // an edge with weights 2 and 3 expands to K5
        let edge = WeightedGraph::new(Graph::from_edges(2, [(0, 1)]).unwrap(), vec![2, 3]).unwrap();
        assert_eq!(weighted_treewidth_exact(&edge), Ok(4));
        let (expanded, ranges) = edge.expand();
        assert_eq!(expanded, Graph::complete(5));
        assert_eq!(ranges, vec![0..2, 2..5]);
    }

    #[test]
    fn budget() {
        assert_eq!(
            treewidth_exact(&Graph::empty(27)),
            Err(TreewidthError::TooLarge {
                num_vertices: 27,
                max: 26
            })
        );
    }

    #[test]
    fn single_clause_quotient() {
        let f = Formula::from_dimacs_clauses(3, &[[1, 2, 3]]).unwrap();
        let r = build_graph(&f, &GammaProfile::uniform(3, 4)).unwrap();
        let q = quotient(&r);
        assert_eq!(q.graph.graph().num_vertices(), 13);
        assert_eq!(q.graph.weights()[7..], [4; 6]);
        let (expanded, _) = q.graph.expand();
        assert_eq!(expanded.num_edges(), r.graph().num_edges());
        let tw = treewidth_via_quotient(&r).unwrap();
        assert!((17..=21).contains(&tw), "tw = {tw}");
    }

    #[test]
    fn weighted_gr_round_trip() {
        let g = WeightedGraph::new(cycle(4), vec![1, 3, 2, 7]).unwrap();
        let text = write_weighted_gr(&g);
        assert_eq!(read_weighted_gr(&text).unwrap(), g);
        let defaulted = read_weighted_gr("p tw 2 1\nw 2 4\n1 2\n").unwrap();
        assert_eq!(defaulted.weights(), &[1, 4]);
        assert!(read_weighted_gr("p tw 2 1\nw 3 4\n1 2\n").is_err());
        assert!(read_weighted_gr("p tw 2 1\nw 1 0\n1 2\n").is_err());
        assert!(read_weighted_gr("p tw 2 1\nw 1 1\nw 1 2\n1 2\n").is_err());
    }
}
