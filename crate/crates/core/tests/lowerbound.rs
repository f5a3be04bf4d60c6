mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{instance, random_formula};
use twreduce::cnf::{evaluate, max_sat_bruteforce, Assignment};
use twreduce::exacttw::treewidth_via_quotient;
use twreduce::lowerbound::{
    certify_lower_bound, cover_from_assignment, extract_assignment, is_vertex_cover, normalize_cover,
};
use twreduce::reduction::{incidence_graph, GammaPolicy, ReductionInstance};

fn small_instance(seed: u64, policy: GammaPolicy) -> ReductionInstance {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.gen_range(3..=5);
    let m = rng.gen_range(1..=3);
    instance(&random_formula(&mut rng, n, m), policy)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn assignment_covers_have_exact_size(seed in any::<u64>(), mask in any::<u64>()) {
        let r = small_instance(seed, GammaPolicy::PerVariableAuto);
        let n = r.formula().num_vars();
        let a = Assignment::from_mask(n, mask & ((1 << n) - 1));
        let cover = cover_from_assignment(&r, &a).unwrap();
        let ig = incidence_graph(&r);
        prop_assert_eq!(is_vertex_cover(&ig, &cover), Ok(true));
        let sat = evaluate(r.formula(), &a).unwrap();
        prop_assert_eq!(cover.len(), r.gammas().sum() + 7 * r.formula().num_clauses() - sat);
        let cert = normalize_cover(&r, &cover).unwrap();
        prop_assert_eq!(&cert.normalized, &cover);
        prop_assert_eq!(extract_assignment(&r, &cert).unwrap(), a);
    }

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>(), density in 0.3f64..1.0) {
        let r = small_instance(seed, GammaPolicy::UniformAuto);
        let mut rng = StdRng::seed_from_u64(seed);
        let ig = incidence_graph(&r);
        let mut inside: Vec<bool> = (0..r.num_vertices()).map(|_| rng.gen_bool(density)).collect();
        for (u, v) in ig.edges() {
            if !inside[u] && !inside[v] {
                inside[u] = true;
            }
        }
        let cover: Vec<usize> = (0..inside.len()).filter(|&v| inside[v]).collect();
        let once = normalize_cover(&r, &cover).unwrap();
        let twice = normalize_cover(&r, &once.normalized).unwrap();
        prop_assert_eq!(&twice.normalized, &once.normalized);
        prop_assert!(once.normalized.len() <= cover.len());
    }
}

#[test]
fn certified_bound_matches_max_sat_and_treewidth() {
    for seed in 0..25 {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = rng.gen_range(1..=2);
        let n = rng.gen_range(3..=5);
        let r = instance(&random_formula(&mut rng, n, m), GammaPolicy::PerVariableAuto);
        let lb = certify_lower_bound(&r).unwrap();
        let msat = max_sat_bruteforce(r.formula()).unwrap().satisfied;
        assert_eq!(lb.bound + 1, r.gammas().sum() + 7 * m - msat);
        assert!(lb.bound <= treewidth_via_quotient(&r).unwrap());
        let a = extract_assignment(&r, &lb.certificate).unwrap();
        assert_eq!(evaluate(r.formula(), &a).unwrap(), msat);
    }
}
