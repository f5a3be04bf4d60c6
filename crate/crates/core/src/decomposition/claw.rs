use std::collections::VecDeque;

use crate::cnf::{evaluate, Assignment};
use crate::lowerbound::{extract_assignment, normalize_cover, CoverCertificate};
use crate::reduction::{Part, ReductionInstance};

use super::{find_clique_node, validate, DecompositionError, TreeDecomposition};

/// Position of the center and leaves in a claw-shaped decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClawShape {
    pub center: usize,
    pub leaf_a: usize,
    pub leaf_b: usize,
    pub leaf_c: usize,
}

/// Recognizes a subdivided claw (three leaves, one node of degree 3, all
/// others of degree 2) whose leaves can be matched to `B`, `C` and `A`.
///
/// The tree is assumed valid. Leaf matchings are tried in lexicographic order
/// of the (sorted) leaves assigned to `B`, `C`, `A`.
pub fn claw_shape(instance: &ReductionInstance, td: &TreeDecomposition) -> Result<ClawShape, DecompositionError> {
    let adj = td.adjacency();
    let mut leaves = Vec::new();
    let mut centers = Vec::new();
    for (t, nb) in adj.iter().enumerate() {
        match nb.len() {
            1 => leaves.push(t),
            2 => {}
            3 => centers.push(t),
            d => return Err(DecompositionError::NotClaw(format!("node {} has degree {d}", t + 1))),
        }
    }
    if leaves.len() != 3 || centers.len() != 1 {
        return Err(DecompositionError::NotClaw(format!(
            "{} leaves and {} nodes of degree 3",
            leaves.len(),
            centers.len()
        )));
    }
    const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let holds = |leaf: usize, part: Part| td.bag_contains_range(leaf, instance.part_range(part));
    let [leaf_b, leaf_c, leaf_a] = PERMUTATIONS
        .iter()
        .map(|p| p.map(|i| leaves[i]))
        .find(|&[b, c, a]| holds(b, Part::B) && holds(c, Part::C) && holds(a, Part::A))
        .ok_or_else(|| DecompositionError::NotClaw("the leaves cannot be matched to A, B and C".into()))?;
    Ok(ClawShape {
        center: centers[0],
        leaf_a,
        leaf_b,
        leaf_c,
    })
}

/// Nodes on the tree path from `from` to `to`, both included.
fn tree_path(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; adj.len()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(t) = queue.pop_front() {
        if t == to {
            break;
        }
        for &u in &adj[t] {
            if parent[u] == usize::MAX {
                parent[u] = t;
                queue.push_back(u);
            }
        }
    }
    let mut path = vec![to];
    let mut t = to;
    while t != from {
        t = parent[t];
        path.push(t);
    }
    path.reverse();
    path
}

/// Builds a claw from a center node and the three arms (each listed from the
/// center outwards, without the center; an empty arm becomes a copy of the
/// center bag). Node 0 is the center, followed by the `B`, `C` and `A` arms.
fn assemble(td: &TreeDecomposition, center: usize, arms: [Vec<usize>; 3]) -> TreeDecomposition {
    let mut bags = vec![td.bag(center).to_vec()];
    let mut edges = Vec::new();
    for arm in arms {
        let arm = if arm.is_empty() { vec![center] } else { arm };
        let mut prev = 0;
        for t in arm {
            bags.push(td.bag(t).to_vec());
            edges.push((prev, bags.len() - 1));
            prev = bags.len() - 1;
        }
    }
    TreeDecomposition::new(bags, edges)
}

/// Restricts a decomposition of `G(φ)` to the minimal subtree spanning nodes
/// holding `A`, `B` and `C`, which is a subdivided claw (a path gets
/// duplicated leaves). A decomposition that already has this shape is only
/// relabeled.
pub fn normalize_to_claw(
    instance: &ReductionInstance,
    td: &TreeDecomposition,
) -> Result<TreeDecomposition, DecompositionError> {
    if let Some(v) = validate(instance.graph(), td).violation {
        return Err(DecompositionError::Invalid(v));
    }
    let adj = td.adjacency();
    if let Ok(shape) = claw_shape(instance, td) {
        let arm = |leaf| tree_path(&adj, shape.center, leaf)[1..].to_vec();
        return Ok(assemble(
            td,
            shape.center,
            [arm(shape.leaf_b), arm(shape.leaf_c), arm(shape.leaf_a)],
        ));
    }
    let holder = |part: Part| {
        let set: Vec<usize> = instance.part_range(part).collect();
        find_clique_node(td, &set)
    };
    let (t_a, t_b, t_c) = (holder(Part::A)?, holder(Part::B)?, holder(Part::C)?);
    // the median of t_a, t_b, t_c: where the paths from t_a to t_b and to t_c split
    let to_b = tree_path(&adj, t_a, t_b);
    let to_c = tree_path(&adj, t_a, t_c);
    let shared = to_b.iter().zip(&to_c).take_while(|(x, y)| x == y).count();
    let median = to_b[shared - 1];
    let arm_b = to_b[shared..].to_vec();
    let arm_c = to_c[shared..].to_vec();
    let mut arm_a: Vec<usize> = to_b[..shared - 1].to_vec();
    arm_a.reverse();
    Ok(assemble(td, median, [arm_b, arm_c, arm_a]))
}

/// Bag of the degree-3 node of a claw from [`normalize_to_claw`]; a vertex
/// cover of `I(G)`.
pub fn center_cover(instance: &ReductionInstance, claw: &TreeDecomposition) -> Result<Vec<usize>, DecompositionError> {
    let shape = claw_shape(instance, claw)?;
    Ok(claw.bag(shape.center).to_vec())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub assignment: Assignment,
    pub satisfied: usize,
    pub certificate: CoverCertificate,
}

/// Reads a truth assignment off any valid decomposition of `G(φ)` of width
/// `w`; it satisfies at least `Σγ + 7m − w − 1` clauses.
pub fn decode_assignment(instance: &ReductionInstance, td: &TreeDecomposition) -> Result<Decoded, DecompositionError> {
    let claw = normalize_to_claw(instance, td)?;
    let cover = center_cover(instance, &claw)?;
    let certificate = normalize_cover(instance, &cover)?;
    let assignment = extract_assignment(instance, &certificate)?;
    let satisfied = evaluate(instance.formula(), &assignment).expect("assignment sized by the formula");
    Ok(Decoded {
        assignment,
        satisfied,
        certificate,
    })
}
