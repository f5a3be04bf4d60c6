use num_rational::Ratio;

use twreduce::cnf::{duplicate, max_sat_bruteforce, validate_32b, Formula};
use twreduce::reduction::{build_graph, compute_gammas, predicted_bounds, GammaPolicy};

/// Every variable twice positive and twice negative, `n = 3m/4`.
fn three_two_b() -> Formula {
    Formula::from_dimacs_clauses(3, &[[1, 2, 3], [-1, -2, -3], [1, -2, -3], [-1, 2, 3]]).unwrap()
}

#[test]
fn fragment_gets_gamma_fourteen() {
    let f = three_two_b();
    assert!(validate_32b(&f).passes());
    let gammas = compute_gammas(&f, GammaPolicy::UniformAuto).unwrap();
    assert_eq!(gammas.as_slice(), &[14, 14, 14]);
    let r = build_graph(&f, &gammas).unwrap();
    assert_eq!(r.num_vertices(), 2 * 14 * 3 + 7 * 4);
    assert!(build_graph(&f, &twreduce::reduction::GammaProfile::uniform(3, 13)).is_err());
}

#[test]
fn duplication_multiplies_max_sat() {
    let f = Formula::from_dimacs_clauses(
        3,
        &[
            [1, 2, 3],
            [-1, 2, 3],
            [1, -2, 3],
            [1, 2, -3],
            [-1, -2, 3],
            [-1, 2, -3],
            [1, -2, -3],
            [-1, -2, -3],
        ],
    )
    .unwrap();
    let single = max_sat_bruteforce(&f).unwrap().satisfied;
    assert_eq!(single, 7);
    for k in 1..=3 {
        let dup = duplicate(&f, k).unwrap();
        assert_eq!(dup.num_vars(), 3 * k);
        assert_eq!(max_sat_bruteforce(&dup).unwrap().satisfied, 7 * k);
    }
}

#[test]
fn predicted_window_width_is_max_gamma() {
    let f = three_two_b();
    let r = build_graph(&f, &compute_gammas(&f, GammaPolicy::UniformAuto).unwrap()).unwrap();
    let msat = max_sat_bruteforce(&f).unwrap().satisfied;
    let b = predicted_bounds(&r, msat).unwrap();
    assert_eq!(b.upper - b.lower, 14);
    assert_eq!(b.lower, 42 + 28 - msat - 1);
}

fn ratio(m: i128, eps: Ratio<i128>) -> Ratio<i128> {
    let m = Ratio::from_integer(m);
    let num = (Ratio::new(35, 2) - Ratio::new(1015, 1016) - eps) * m - Ratio::from_integer(1);
    let den = (Ratio::new(33, 2) + eps) * m + Ratio::from_integer(13);
    num / den
}

#[test]
fn gap_ratio_exceeds_threshold_for_small_epsilon() {
    let threshold = Ratio::new(100_005, 100_000);
    for m in [1_000_000, 10_000_000, 100_000_000] {
        assert!(ratio(m, Ratio::new(1, 100_000)) > threshold);
    }
    // the limit as m grows, at eps = 0
    let limit = (Ratio::new(35, 2) - Ratio::new(1015, 1016)) / Ratio::new(33, 2);
    assert!(limit > threshold);
}
