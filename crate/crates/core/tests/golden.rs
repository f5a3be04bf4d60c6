use std::path::PathBuf;

use twreduce::cnf::{Assignment, Formula};
use twreduce::decomposition::{build_from_assignment, read_td, validate, write_td};
use twreduce::reduction::{build_graph, GammaProfile};

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/single_clause_all_true.td")
}

/// `(x1 ∨ x2 ∨ x3)` with γ = 4 under the all-true assignment. Set
/// `TWREDUCE_BLESS=1` to rewrite the frozen file.
#[test]
fn single_clause_decomposition_matches_golden_file() {
    let f = Formula::from_dimacs_clauses(3, &[[1, 2, 3]]).unwrap();
    let r = build_graph(&f, &GammaProfile::uniform(3, 4)).unwrap();
    let td = build_from_assignment(&r, &Assignment::all(3, true)).unwrap();
    let text = write_td(&td, r.num_vertices());
    if std::env::var_os("TWREDUCE_BLESS").is_some() {
        std::fs::write(golden_path(), &text).unwrap();
    }
    let frozen = std::fs::read_to_string(golden_path()).unwrap();
    assert_eq!(text, frozen);

    assert!(frozen.starts_with("s td 14 22 31\n"));
    let parsed = read_td(&frozen, 31).unwrap();
    assert!(validate(r.graph(), &parsed).is_valid());
    // center: every clause vertex but a_1(x1,x2,x3), plus B
    let mut center: Vec<usize> = (1..7).collect();
    center.extend(7..19);
    assert_eq!(parsed.bag(0), center.as_slice());
}
