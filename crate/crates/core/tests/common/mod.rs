#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::Rng;
use twreduce::cnf::{Formula, Literal};
use twreduce::graph::Graph;
use twreduce::reduction::{build_graph, compute_gammas, GammaPolicy, ReductionInstance};

/// `m` clauses over `n ≥ 3` variables, each on three distinct variables with
/// random signs.
pub fn random_formula(rng: &mut StdRng, n: usize, m: usize) -> Formula {
    let clauses = (0..m)
        .map(|_| {
            let vars = sample(rng, n, 3);
            let mut clause = [Literal::positive(1); 3];
            for (slot, var) in clause.iter_mut().zip(vars.iter()) {
                *slot = Literal::new(var + 1, rng.gen_bool(0.5));
            }
            clause
        })
        .collect();
    Formula::new(n, clauses).expect("distinct variables")
}

pub fn instance(formula: &Formula, policy: GammaPolicy) -> ReductionInstance {
    let gammas = compute_gammas(formula, policy).expect("auto policies are feasible");
    build_graph(formula, &gammas).expect("feasible gammas")
}

/// G(n, p) random graph.
pub fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}
