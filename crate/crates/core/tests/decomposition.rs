mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{instance, random_formula, random_graph};
use twreduce::cnf::{max_sat_bruteforce, Assignment};
use twreduce::decomposition::{
    build_from_assignment, center_cover, decode_assignment, decomposition_from_ordering, greedy_decomposition,
    normalize_to_claw, read_td, validate, write_td, TreeDecomposition,
};
use twreduce::exacttw::{optimal_ordering_via_quotient, ordering_width, treewidth_exact, MAX_DP_VERTICES};
use twreduce::graph::Graph;
use twreduce::lowerbound::is_vertex_cover;
use twreduce::reduction::{incidence_graph, GammaPolicy, ReductionInstance};

/// Straightforward re-statement of the axioms, quadratic and slow.
fn naive_valid(graph: &Graph, td: &TreeDecomposition) -> bool {
    let k = td.num_nodes();
    if k == 0 || td.edges().len() + 1 != k {
        return false;
    }
    if td.edges().iter().any(|&(s, t)| s >= k || t >= k || s == t) {
        return false;
    }
    let connected_within = |keep: &dyn Fn(usize) -> bool| -> bool {
        let nodes: Vec<usize> = (0..k).filter(|&t| keep(t)).collect();
        let Some(&start) = nodes.first() else { return false };
        let mut seen = vec![false; k];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            for &(a, b) in td.edges() {
                for (x, y) in [(a, b), (b, a)] {
                    if x == t && keep(y) && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        nodes.iter().all(|&t| seen[t])
    };
    if !connected_within(&|_| true) {
        return false;
    }
    if td.bags().iter().flatten().any(|&v| v >= graph.num_vertices()) {
        return false;
    }
    for v in 0..graph.num_vertices() {
        if !connected_within(&|t| td.bag(t).contains(&v)) {
            return false;
        }
    }
    graph
        .edges()
        .all(|(u, v)| td.bags().iter().any(|b| b.contains(&u) && b.contains(&v)))
}

fn arb_decomposition(n: usize) -> impl Strategy<Value = TreeDecomposition> {
    (1usize..7).prop_flat_map(move |k| {
        let bags = proptest::collection::vec(proptest::collection::vec(0..n + 1, 0..n + 1), k);
        let parents: Vec<BoxedStrategy<usize>> = (1..k).map(|t| (0..t).boxed()).collect();
        let extra = proptest::option::weighted(0.2, (0..k, 0..k));
        (bags, parents, extra).prop_map(move |(bags, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.into_iter().enumerate().map(|(i, p)| (p, i + 1)).collect();
            if let Some(e) = extra {
                edges.push(e);
            }
            TreeDecomposition::new(bags, edges)
        })
    })
}

fn arb_graph(n: usize) -> impl Strategy<Value = Graph> {
    proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
    })
}

fn small_instance(seed: u64) -> ReductionInstance {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.gen_range(3..=5);
    let m = rng.gen_range(1..=2);
    let f = random_formula(&mut rng, n, m);
    instance(&f, GammaPolicy::PerVariableAuto)
}

/// Adds vertices to bags next to a bag that already holds them, which keeps
/// the decomposition valid and widens it.
fn pad(td: &TreeDecomposition, rng: &mut StdRng, steps: usize) -> TreeDecomposition {
    let mut bags = td.bags().to_vec();
    let edges = td.edges().to_vec();
    if edges.is_empty() {
        return td.clone();
    }
    for _ in 0..steps {
        let (s, t) = edges[rng.gen_range(0..edges.len())];
        let (from, to) = if rng.gen_bool(0.5) { (s, t) } else { (t, s) };
        if let Some(&v) = bags[from].get(rng.gen_range(0..bags[from].len().max(1))) {
            bags[to].push(v);
        }
    }
    TreeDecomposition::new(bags, edges)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn validator_agrees_with_naive(g in arb_graph(5), td in arb_decomposition(5)) {
        prop_assert_eq!(validate(&g, &td).is_valid(), naive_valid(&g, &td));
    }

    #[test]
    fn td_round_trips(td in arb_decomposition(5)) {
        let text = write_td(&td, 6);
        prop_assert_eq!(read_td(&text, 6).unwrap(), td);
    }

    #[test]
    fn ordering_decompositions_are_valid(g in arb_graph(8), order in Just((0..8).collect::<Vec<usize>>()).prop_shuffle()) {
        let td = decomposition_from_ordering(&g, &order);
        prop_assert!(validate(&g, &td).is_valid());
        prop_assert_eq!(td.width(), ordering_width(&g, &order));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_is_valid_and_not_below_treewidth(g in arb_graph(9)) {
        let td = greedy_decomposition(&g);
        prop_assert!(validate(&g, &td).is_valid());
        prop_assert!(td.width() >= treewidth_exact(&g).unwrap());
    }

    #[test]
    fn claw_normal_form(seed in any::<u64>(), pad_steps in 0usize..40) {
        let r = small_instance(seed);
        let mut rng = StdRng::seed_from_u64(seed);
        let td = pad(&greedy_decomposition(r.graph()), &mut rng, pad_steps);
        prop_assert!(validate(r.graph(), &td).is_valid());
        let claw = normalize_to_claw(&r, &td).unwrap();
        prop_assert!(validate(r.graph(), &claw).is_valid());
        prop_assert!(claw.width() <= td.width());
        let cover = center_cover(&r, &claw).unwrap();
        prop_assert_eq!(is_vertex_cover(&incidence_graph(&r), &cover), Ok(true));
        prop_assert_eq!(normalize_to_claw(&r, &claw).unwrap(), claw);
    }

    #[test]
    fn decoding_guarantee_on_greedy_optimal_and_padded(seed in any::<u64>(), pad_steps in 0usize..60) {
        let r = small_instance(seed);
        let mut rng = StdRng::seed_from_u64(seed ^ 0xabc);
        let base = r.gammas().sum() + 7 * r.formula().num_clauses();
        let (tw, order) = optimal_ordering_via_quotient(&r, MAX_DP_VERTICES).unwrap();
        let optimal = decomposition_from_ordering(r.graph(), &order);
        prop_assert_eq!(optimal.width(), tw);
        let greedy = greedy_decomposition(r.graph());
        let padded = pad(&greedy, &mut rng, pad_steps);
        for td in [optimal, greedy, padded] {
            let decoded = decode_assignment(&r, &td).unwrap();
            prop_assert!(decoded.satisfied + td.width() + 1 >= base);
        }
    }

    #[test]
    fn forward_round_trip_loses_at_most_max_gamma(seed in any::<u64>()) {
        let r = small_instance(seed);
        let best = max_sat_bruteforce(r.formula()).unwrap();
        let td = build_from_assignment(&r, &best.witness).unwrap();
        let decoded = decode_assignment(&r, &td).unwrap();
        prop_assert!(decoded.satisfied + r.gammas().max() >= best.satisfied);
    }
}

#[test]
fn adding_an_edge_never_lowers_treewidth() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(2..=10);
        let g = random_graph(&mut rng, n, 0.4);
        let missing: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        if missing.is_empty() {
            continue;
        }
        let extra = missing[rng.gen_range(0..missing.len())];
        let bigger = Graph::from_edges(n, g.edges().chain([extra])).unwrap();
        assert!(treewidth_exact(&bigger).unwrap() >= treewidth_exact(&g).unwrap());
    }
}

#[test]
fn forward_decompositions_are_not_below_treewidth() {
    for seed in 0..20 {
        let r = small_instance(seed);
        let (tw, _) = optimal_ordering_via_quotient(&r, MAX_DP_VERTICES).unwrap();
        for mask in 0..1u64 << r.formula().num_vars() {
            let a = Assignment::from_mask(r.formula().num_vars(), mask);
            let td = build_from_assignment(&r, &a).unwrap();
            assert!(validate(r.graph(), &td).is_valid());
            assert!(td.width() >= tw);
        }
    }
}
