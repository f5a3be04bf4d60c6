use std::collections::BTreeSet;

use crate::cnf::{Assignment, Literal};
use crate::lowerbound::cover_from_assignment;
use crate::reduction::ReductionInstance;

use super::{DecompositionError, TreeDecomposition};

struct Builder {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn attach(&mut self, parent: usize, bag: &BTreeSet<usize>) -> usize {
        self.bags.push(bag.iter().copied().collect());
        let id = self.bags.len() - 1;
        self.edges.push((parent, id));
        id
    }
}

/// The subdivided claw built from a truth assignment.
///
/// Node 0 is the center with bag `A' ∪ B' ∪ C'`. Then come the path to the
/// `B` leaf (for each false variable in increasing order: add `B(x_i)`, then
/// drop `C(x_i)`), the mirrored path to the `C` leaf over the true variables,
/// and the path to the `A` leaf (for `i = 1..n`: add the clause neighbors of
/// the module in the center, then drop `B(x_i) ∪ C(x_i)`). When a path would
/// be empty, the leaf is one extra node with bag `A' ∪ B` (resp. `A' ∪ C`).
pub fn build_from_assignment(
    instance: &ReductionInstance,
    assignment: &Assignment,
) -> Result<TreeDecomposition, DecompositionError> {
    let n = instance.formula().num_vars();
    if assignment.len() != n {
        return Err(DecompositionError::AssignmentLength {
            expected: n,
            found: assignment.len(),
        });
    }
    let center: BTreeSet<usize> = cover_from_assignment(instance, assignment)?.into_iter().collect();
    let mut b = Builder {
        bags: vec![center.iter().copied().collect()],
        edges: Vec::new(),
    };

    for value in [false, true] {
        // false: path to the B leaf, true: path to the C leaf
        let (mut bag, mut active) = (center.clone(), 0);
        let vars: Vec<usize> = (1..=n).filter(|&i| assignment.value(i) == value).collect();
        if vars.is_empty() {
            b.attach(0, &bag);
            continue;
        }
        for i in vars {
            let (gain, lose) = if value {
                (instance.c_module(i), instance.b_module(i))
            } else {
                (instance.b_module(i), instance.c_module(i))
            };
            bag.extend(gain);
            active = b.attach(active, &bag);
            for v in lose {
                bag.remove(&v);
            }
            active = b.attach(active, &bag);
        }
    }

    let (mut bag, mut active) = (center, 0);
    for i in 1..=n {
        let lit = Literal::new(i, assignment.value(i));
        bag.extend(instance.module_a_neighbors(i, lit.is_positive()));
        active = b.attach(active, &bag);
        for v in instance.b_module(i).chain(instance.c_module(i)) {
            bag.remove(&v);
        }
        active = b.attach(active, &bag);
    }
    Ok(TreeDecomposition::new(b.bags, b.edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{evaluate, Formula};
    use crate::decomposition::validate;
    use crate::reduction::{build_graph, compute_gammas, GammaPolicy, GammaProfile};

    fn single_clause() -> ReductionInstance {
        let f = Formula::from_dimacs_clauses(3, &[[1, 2, 3]]).unwrap();
        build_graph(&f, &GammaProfile::uniform(3, 4)).unwrap()
    }

    #[test]
    fn single_clause_all_true() {
        let r = single_clause();
        let a = Assignment::all(3, true);
        let td = build_from_assignment(&r, &a).unwrap();
        assert!(validate(r.graph(), &td).is_valid());
        // center: 12 + 7 - 1
        assert_eq!(td.bag(0).len(), 18);
        assert!(td.width() <= 21);
        // B path empty: one extra leaf, then C path of 6, A path of 6
        assert_eq!(td.num_nodes(), 1 + 1 + 6 + 6);
        let a_prime: Vec<usize> = (1..7).collect();
        let mut leaf_b = a_prime.clone();
        leaf_b.extend(r.b_range());
        assert_eq!(td.bag(1), leaf_b.as_slice());
        let mut leaf_c = a_prime;
        leaf_c.extend(r.c_range());
        assert_eq!(td.bag(7), leaf_c.as_slice());
        assert_eq!(td.bag(13), (0..7).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn every_assignment_gives_valid_bounded_claw() {
        let f = Formula::from_dimacs_clauses(4, &[[1, -2, 3], [-1, 2, 4], [-3, -4, 2]]).unwrap();
        let gammas = compute_gammas(&f, GammaPolicy::PerVariableAuto).unwrap();
        let r = build_graph(&f, &gammas).unwrap();
        let (sum, max) = (gammas.sum(), gammas.max());
        for mask in 0..16u64 {
            let a = Assignment::from_mask(4, mask);
            let td = build_from_assignment(&r, &a).unwrap();
            let report = validate(r.graph(), &td);
            assert!(report.is_valid(), "{:?}", report.violation);
            let sat = evaluate(&f, &a).unwrap();
            assert_eq!(td.bag(0).len(), sum + 21 - sat);
            assert!(td.max_bag_size() <= sum + max + 21 - sat);
        }
    }

    #[test]
    fn length_mismatch() {
        let r = single_clause();
        assert_eq!(
            build_from_assignment(&r, &Assignment::all(2, true)),
            Err(DecompositionError::AssignmentLength { expected: 3, found: 2 })
        );
    }
}
