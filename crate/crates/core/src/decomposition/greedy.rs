//! Min-fill elimination.
//!
//! True twins (equal closed neighborhoods) can be eliminated one after the
//! other at no extra cost, so the heuristic runs on the graph of twin classes
//! with class sizes as weights. Gadget graphs collapse from `7m + 2Σγ` vertices
//! to `7m + 2n` classes this way. Fill counts are maintained incrementally.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::graph::Graph;

use super::{decomposition_from_ordering, TreeDecomposition};

fn weight_of(set: &FixedBitSet, weight: &[u64]) -> u64 {
    set.ones().map(|v| weight[v]).sum()
}

/// Weight of `adj[x] \ adj[y] \ {y}`.
fn weight_outside(adj: &[FixedBitSet], weight: &[u64], x: usize, y: usize) -> u64 {
    let mut diff = adj[x].clone();
    diff.difference_with(&adj[y]);
    diff.set(y, false);
    weight_of(&diff, weight)
}

struct MinFill {
    adj: Vec<FixedBitSet>,
    weight: Vec<u64>,
    fill: Vec<u64>,
    alive: Vec<bool>,
}

impl MinFill {
    fn new(adj: Vec<FixedBitSet>, weight: Vec<u64>) -> Self {
        let k = adj.len();
        let fill = (0..k)
            .map(|v| {
                let pairs: u64 = adj[v]
                    .ones()
                    .map(|u| {
                        let mut rest = adj[v].clone();
                        rest.difference_with(&adj[u]);
                        rest.set(u, false);
                        weight[u] * weight_of(&rest, &weight)
                    })
                    .sum();
                pairs / 2
            })
            .collect();
        MinFill {
            adj,
            weight,
            fill,
            alive: vec![true; k],
        }
    }

    fn add_edge(&mut self, x: usize, y: usize) {
        let (wx, wy) = (self.weight[x], self.weight[y]);
        let mut common = self.adj[x].clone();
        common.intersect_with(&self.adj[y]);
        for z in common.ones() {
            self.fill[z] -= wx * wy;
        }
        self.fill[x] += wy * weight_outside(&self.adj, &self.weight, x, y);
        self.fill[y] += wx * weight_outside(&self.adj, &self.weight, y, x);
        self.adj[x].insert(y);
        self.adj[y].insert(x);
    }

    fn eliminate(&mut self, v: usize) {
        let nb: Vec<usize> = self.adj[v].ones().collect();
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                if !self.adj[x].contains(y) {
                    self.add_edge(x, y);
                }
            }
        }
        let wv = self.weight[v];
        for &u in &nb {
            let mut rest = self.adj[u].clone();
            rest.difference_with(&self.adj[v]);
            rest.set(v, false);
            self.fill[u] -= wv * weight_of(&rest, &self.weight);
            self.adj[u].set(v, false);
        }
        self.adj[v].clear();
        self.alive[v] = false;
    }

    fn next(&self) -> Option<usize> {
        (0..self.adj.len())
            .filter(|&v| self.alive[v])
            .min_by_key(|&v| (self.fill[v], weight_of(&self.adj[v], &self.weight), v))
    }
}

/// Min-fill elimination ordering (ties: smaller weighted degree, then smaller
/// id), computed on twin classes.
pub fn min_fill_ordering(graph: &Graph) -> Vec<usize> {
    let n = graph.num_vertices();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; n];
    for v in 0..n {
        let mut closed = graph.neighbors(v).to_vec();
        let at = closed.partition_point(|&u| u < v);
        closed.insert(at, v);
        let c = *index.entry(closed).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(v);
        class_of[v] = c;
    }
    let k = classes.len();
    let adj: Vec<FixedBitSet> = classes
        .iter()
        .enumerate()
        .map(|(c, members)| {
            let mut set = FixedBitSet::with_capacity(k);
            set.extend(graph.neighbors(members[0]).iter().map(|&u| class_of[u]));
            set.set(c, false);
            set
        })
        .collect();
    let weight = classes.iter().map(|c| c.len() as u64).collect();
    let mut state = MinFill::new(adj, weight);
    let mut order = Vec::with_capacity(n);
    while let Some(c) = state.next() {
        state.eliminate(c);
        order.extend_from_slice(&classes[c]);
    }
    order
}

/// Tree-decomposition from the min-fill ordering. Always valid, not
/// necessarily optimal.
pub fn greedy_decomposition(graph: &Graph) -> TreeDecomposition {
    decomposition_from_ordering(graph, &min_fill_ordering(graph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate;
    use crate::exacttw::ordering_width;

    #[test]
    fn small_families() {
        let k5 = Graph::complete(5);
        let td = greedy_decomposition(&k5);
        assert!(validate(&k5, &td).is_valid());
        assert_eq!(td.width(), 4);
        assert_eq!(td.num_nodes(), 1);

        let tree = Graph::from_edges(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap();
        let td = greedy_decomposition(&tree);
        assert!(validate(&tree, &td).is_valid());
        assert_eq!(td.width(), 1);

        let grid = Graph::from_edges(
            9,
            (0..9).flat_map(|v| {
                let mut e = Vec::new();
                if v % 3 < 2 {
                    e.push((v, v + 1));
                }
                if v < 6 {
                    e.push((v, v + 3));
                }
                e
            }),
        )
        .unwrap();
        let order = min_fill_ordering(&grid);
        assert_eq!(ordering_width(&grid, &order), 3);
        assert!(validate(&grid, &greedy_decomposition(&grid)).is_valid());
    }

    #[test]
    fn incremental_fill_matches_recount() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let adj: Vec<FixedBitSet> = (0..6)
            .map(|v| {
                let mut s = FixedBitSet::with_capacity(6);
                s.extend(g.neighbors(v).iter().copied());
                s
            })
            .collect();
        let mut state = MinFill::new(adj, vec![1, 2, 1, 3, 1, 1]);
        for v in [1, 4, 0] {
            state.eliminate(v);
            let fresh = MinFill::new(state.adj.clone(), state.weight.clone());
            for u in (0..6).filter(|&u| state.alive[u]) {
                assert_eq!(state.fill[u], fresh.fill[u], "vertex {u} after eliminating {v}");
            }
        }
    }
}
