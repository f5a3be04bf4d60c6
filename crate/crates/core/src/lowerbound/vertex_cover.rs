//! Exact minimum vertex cover by branch and bound.
//!
//! Vertices with identical open neighborhoods (false twins, e.g. the members
//! of one `B(x_i)` in `I(G)`) are either all in a minimum cover or all out of
//! it, so they are merged into one weighted vertex before the search. The
//! search itself branches on a vertex of maximum remaining degree: either the
//! vertex joins the cover, or all of its neighbors do.

use std::collections::HashMap;

use crate::graph::Graph;

use super::CoverError;

/// Search nodes explored before giving up.
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCover {
    pub size: usize,
    /// Sorted witness.
    pub cover: Vec<usize>,
}

pub fn min_vertex_cover_exact(graph: &Graph) -> Result<VertexCover, CoverError> {
    min_vertex_cover_with_budget(graph, DEFAULT_NODE_BUDGET)
}

pub fn min_vertex_cover_with_budget(graph: &Graph, node_budget: u64) -> Result<VertexCover, CoverError> {
    let (classes, adj) = twin_quotient(graph);
    let weight: Vec<u64> = classes.iter().map(|c| c.len() as u64).collect();
    let mut search = Search {
        adj,
        weight,
        best_cost: u64::MAX,
        best: Vec::new(),
        nodes: 0,
        budget: node_budget,
    };
    let greedy = search.greedy();
    search.best_cost = cost_of(&greedy, &search.weight);
    search.best = greedy;
    let state = vec![Status::Open; classes.len()];
    search.branch(state, 0)?;

    let mut cover: Vec<usize> = search
        .best
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == Status::In)
        .flat_map(|(c, _)| classes[c].iter().copied())
        .collect();
    cover.sort_unstable();
    Ok(VertexCover {
        size: cover.len(),
        cover,
    })
}

/// Groups false twins; returns the classes and the class adjacency lists.
fn twin_quotient(graph: &Graph) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut index: HashMap<&[usize], usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; graph.num_vertices()];
    for v in 0..graph.num_vertices() {
        let c = *index.entry(graph.neighbors(v)).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(v);
        class_of[v] = c;
    }
    let adj = classes
        .iter()
        .map(|members| {
            graph
                .neighbors(members[0])
                .iter()
                .map(|&u| class_of[u])
                .collect::<Vec<_>>()
        })
        .map(|mut list| {
            list.sort_unstable();
            list.dedup();
            list
        })
        .collect();
    (classes, adj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Open,
    In,
    Out,
}

fn cost_of(state: &[Status], weight: &[u64]) -> u64 {
    state
        .iter()
        .zip(weight)
        .filter(|(&s, _)| s == Status::In)
        .map(|(_, &w)| w)
        .sum()
}

struct Search {
    adj: Vec<Vec<usize>>,
    weight: Vec<u64>,
    best_cost: u64,
    best: Vec<Status>,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn open_neighbors<'a>(&'a self, state: &'a [Status], v: usize) -> impl Iterator<Item = usize> + 'a {
        self.adj[v].iter().copied().filter(move |&u| state[u] == Status::Open)
    }

    /// Max-degree greedy cover, used as the first incumbent.
    fn greedy(&self) -> Vec<Status> {
        let mut state = vec![Status::Open; self.adj.len()];
        loop {
            let pick = (0..self.adj.len())
                .filter(|&v| state[v] == Status::Open)
                .map(|v| (self.open_neighbors(&state, v).count(), v))
                .filter(|&(d, _)| d > 0)
                .max_by_key(|&(d, v)| (d, std::cmp::Reverse(v)));
            match pick {
                Some((_, v)) => state[v] = Status::In,
                None => break,
            }
        }
        for s in &mut state {
            if *s == Status::Open {
                *s = Status::Out;
            }
        }
        state
    }

    /// Applies the safe rules until none fires: an isolated vertex stays out,
    /// and a vertex at least as heavy as its open neighborhood is replaced by
    /// that neighborhood.
    fn reduce(&self, state: &mut [Status], cost: &mut u64) {
        loop {
            let mut changed = false;
            for v in 0..state.len() {
                if state[v] != Status::Open {
                    continue;
                }
                let nb: Vec<usize> = self.open_neighbors(state, v).collect();
                let nb_weight: u64 = nb.iter().map(|&u| self.weight[u]).sum();
                if nb.is_empty() || nb_weight <= self.weight[v] {
                    state[v] = Status::Out;
                    for u in nb {
                        state[u] = Status::In;
                        *cost += self.weight[u];
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Greedy fractional edge packing: a lower bound on the remaining cost.
    fn packing_bound(&self, state: &[Status]) -> u64 {
        let mut residual: Vec<u64> = self.weight.clone();
        let mut total = 0;
        for v in 0..state.len() {
            if state[v] != Status::Open {
                continue;
            }
            for u in self.open_neighbors(state, v).filter(|&u| u > v) {
                let y = residual[v].min(residual[u]);
                residual[v] -= y;
                residual[u] -= y;
                total += y;
            }
        }
        total
    }

    fn branch(&mut self, mut state: Vec<Status>, mut cost: u64) -> Result<(), CoverError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CoverError::BudgetExceeded { nodes: self.nodes });
        }
        self.reduce(&mut state, &mut cost);
        if cost + self.packing_bound(&state) >= self.best_cost {
            return Ok(());
        }
        let pick = (0..state.len())
            .filter(|&v| state[v] == Status::Open)
            .map(|v| (self.open_neighbors(&state, v).count(), v))
            .max_by_key(|&(d, v)| (d, std::cmp::Reverse(v)));
        let Some((_, v)) = pick else {
            self.best_cost = cost;
            self.best = state;
            return Ok(());
        };

        let mut take = state.clone();
        take[v] = Status::In;
        self.branch(take, cost + self.weight[v])?;

        let nb: Vec<usize> = self.open_neighbors(&state, v).collect();
        let mut skip = state;
        skip[v] = Status::Out;
        let mut skip_cost = cost;
        for u in nb {
            skip[u] = Status::In;
            skip_cost += self.weight[u];
        }
        self.branch(skip, skip_cost)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowerbound::is_vertex_cover;

    #[test]
    fn known_values() {
        let star = Graph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        assert_eq!(min_vertex_cover_exact(&star).unwrap().size, 1);
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let vc = min_vertex_cover_exact(&c5).unwrap();
        assert_eq!(vc.size, 3);
        assert_eq!(is_vertex_cover(&c5, &vc.cover), Ok(true));
        assert_eq!(min_vertex_cover_exact(&Graph::empty(4)).unwrap().size, 0);
        assert_eq!(min_vertex_cover_exact(&Graph::complete(6)).unwrap().size, 5);
    }

    #[test]
    fn twins_are_merged() {
        // K_{3,4}: the side of size 3 is optimal
        let edges = (0..3).flat_map(|u| (3..7).map(move |v| (u, v)));
        let g = Graph::from_edges(7, edges).unwrap();
        assert_eq!(min_vertex_cover_exact(&g).unwrap().cover, vec![0, 1, 2]);
    }

    #[test]
    fn budget_is_enforced() {
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(
            min_vertex_cover_with_budget(&c5, 0),
            Err(CoverError::BudgetExceeded { nodes: 1 })
        );
    }
}
