//! Vertex covers of `I(G)` and the treewidth lower bounds they certify.

mod vertex_cover;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Assignment, Literal};
use crate::graph::Graph;
use crate::reduction::{incidence_graph, ReductionInstance, ID_SCHEME};

pub use vertex_cover::{min_vertex_cover_exact, min_vertex_cover_with_budget, VertexCover, DEFAULT_NODE_BUDGET};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("vertex {vertex} is not a vertex of the graph ({num_vertices} vertices)")]
    UnknownVertex { vertex: usize, num_vertices: usize },
    #[error("edge {u}-{v} is not covered")]
    NotACover { u: usize, v: usize },
    #[error("cover is not normalized at variable {var}")]
    NotNormalized { var: usize },
    #[error("assignment has {found} values but the formula has {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("branch-and-bound gave up after {nodes} search nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub fn is_vertex_cover(graph: &Graph, cover: &[usize]) -> Result<bool, CoverError> {
    Ok(first_uncovered(graph, &membership(graph.num_vertices(), cover)?).is_none())
}

fn membership(num_vertices: usize, set: &[usize]) -> Result<Vec<bool>, CoverError> {
    let mut inside = vec![false; num_vertices];
    for &v in set {
        if v >= num_vertices {
            return Err(CoverError::UnknownVertex {
                vertex: v,
                num_vertices,
            });
        }
        inside[v] = true;
    }
    Ok(inside)
}

fn first_uncovered(graph: &Graph, inside: &[bool]) -> Option<(usize, usize)> {
    graph.edges().find(|&(u, v)| !inside[u] && !inside[v])
}

fn members(inside: &[bool]) -> Vec<usize> {
    (0..inside.len()).filter(|&v| inside[v]).collect()
}

/// A vertex cover of `I(G)` together with its normalized form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    /// The cover `S` as given (sorted).
    pub cover: Vec<usize>,
    /// `S'`: takes exactly one whole module per variable and is no larger than `S`.
    pub normalized: Vec<usize>,
    /// `x_i` is true iff `B(x_i) ⊆ S'`.
    pub assignment: Assignment,
    /// `Â = A \ S'`.
    pub removed_a: Vec<usize>,
    /// `|S'| − 1`; a treewidth lower bound whenever `S` is a minimum cover.
    pub bound: usize,
}

/// Turns any vertex cover of `I(G)` into one that, for every variable,
/// contains exactly one of `B(x_i)` and `C(x_i)`.
///
/// The cover is first made inclusion-minimal (dropping redundant vertices in
/// ascending order). Every variable with both modules present then loses
/// `C(x_i)` in exchange for the clause vertices adjacent to it, which is never
/// more than `γ_i` vertices. A final pass drops clause vertices made redundant
/// by the exchange.
pub fn normalize_cover(instance: &ReductionInstance, cover: &[usize]) -> Result<CoverCertificate, CoverError> {
    normalize_cover_in(instance, &incidence_graph(instance), cover)
}

/// [`normalize_cover`] with a precomputed `I(G)`.
pub fn normalize_cover_in(
    instance: &ReductionInstance,
    incidence: &Graph,
    cover: &[usize],
) -> Result<CoverCertificate, CoverError> {
    let mut inside = membership(instance.num_vertices(), cover)?;
    if let Some((u, v)) = first_uncovered(incidence, &inside) {
        return Err(CoverError::NotACover { u, v });
    }
    let original = members(&inside);
    make_minimal(incidence, &mut inside);

    let n = instance.formula().num_vars();
    for var in 1..=n {
        let full = |r: std::ops::Range<usize>, inside: &[bool]| r.clone().all(|v| inside[v]);
        if full(instance.b_module(var), &inside) && full(instance.c_module(var), &inside) {
            for v in instance.c_module(var) {
                inside[v] = false;
            }
            for a in instance.module_a_neighbors(var, false) {
                inside[a] = true;
            }
        }
    }
    make_minimal(incidence, &mut inside);

    let normalized = members(&inside);
    let assignment = shape_assignment(instance, &inside)?;
    let removed_a = instance.a_range().filter(|&v| !inside[v]).collect();
    Ok(CoverCertificate {
        cover: original,
        bound: normalized.len().saturating_sub(1),
        normalized,
        assignment,
        removed_a,
    })
}

fn make_minimal(graph: &Graph, inside: &mut [bool]) {
    for v in 0..inside.len() {
        if inside[v] && graph.neighbors(v).iter().all(|&u| inside[u]) {
            inside[v] = false;
        }
    }
}

fn shape_assignment(instance: &ReductionInstance, inside: &[bool]) -> Result<Assignment, CoverError> {
    let n = instance.formula().num_vars();
    let mut values = Vec::with_capacity(n);
    for var in 1..=n {
        let count = |r: std::ops::Range<usize>| r.filter(|&v| inside[v]).count();
        let (b, c) = (instance.b_module(var), instance.c_module(var));
        let (in_b, in_c) = (count(b.clone()), count(c.clone()));
        match (in_b == b.len() && in_c == 0, in_c == c.len() && in_b == 0) {
            (true, false) => values.push(true),
            (false, true) => values.push(false),
            _ => return Err(CoverError::NotNormalized { var }),
        }
    }
    Ok(Assignment::new(values))
}

/// Reads the assignment off a normalized certificate.
pub fn extract_assignment(instance: &ReductionInstance, cert: &CoverCertificate) -> Result<Assignment, CoverError> {
    let inside = membership(instance.num_vertices(), &cert.normalized)?;
    shape_assignment(instance, &inside)
}

/// `A' ∪ B' ∪ C'` for `assignment`: the modules of the true literals plus every
/// clause vertex except, for each satisfied clause, the one whose three
/// literals all hold.
pub fn cover_from_assignment(instance: &ReductionInstance, assignment: &Assignment) -> Result<Vec<usize>, CoverError> {
    let formula = instance.formula();
    if assignment.len() != formula.num_vars() {
        return Err(CoverError::AssignmentLength {
            expected: formula.num_vars(),
            found: assignment.len(),
        });
    }
    let mut cover: Vec<usize> = (0..formula.num_clauses())
        .flat_map(|j| instance.clause_block(j).iter())
        .filter(|cv| !cv.triple.iter().all(|l| l.is_satisfied_by(assignment)))
        .map(|cv| cv.id)
        .collect();
    for var in 1..=formula.num_vars() {
        cover.extend(instance.literal_module(Literal::new(var, assignment.value(var))));
    }
    cover.sort_unstable();
    Ok(cover)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    /// `min |S| − 1` over vertex covers `S` of `I(G)`.
    pub bound: usize,
    pub certificate: CoverCertificate,
}

/// Treewidth lower bound from an exact minimum vertex cover of `I(G)`.
pub fn certify_lower_bound(instance: &ReductionInstance) -> Result<LowerBound, CoverError> {
    certify_lower_bound_with_budget(instance, DEFAULT_NODE_BUDGET)
}

pub fn certify_lower_bound_with_budget(
    instance: &ReductionInstance,
    node_budget: u64,
) -> Result<LowerBound, CoverError> {
    let incidence = incidence_graph(instance);
    let min = min_vertex_cover_with_budget(&incidence, node_budget)?;
    let certificate = normalize_cover_in(instance, &incidence, &min.cover)?;
    debug_assert_eq!(certificate.normalized.len(), min.size);
    Ok(LowerBound {
        bound: min.size - 1,
        certificate,
    })
}

/// Cover files: one 1-based vertex per line, `c` comments allowed.
pub fn read_cover(text: &str, num_vertices: usize) -> Result<Vec<usize>, CoverError> {
    let mut cover = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let v: usize = line.parse().map_err(|_| CoverError::Parse {
            line: lineno + 1,
            message: format!("`{line}` is not a vertex id"),
        })?;
        if v == 0 || v > num_vertices {
            return Err(CoverError::Parse {
                line: lineno + 1,
                message: format!("vertex {v} outside 1..={num_vertices}"),
            });
        }
        cover.push(v - 1);
    }
    cover.sort_unstable();
    cover.dedup();
    Ok(cover)
}

pub fn write_cover(cover: &[usize]) -> String {
    let mut out = String::new();
    for v in cover {
        writeln!(out, "{}", v + 1).unwrap();
    }
    out
}

/// Serialized certificate, in the same key/value format as the instance
/// sidecar. Vertex ids are 1-based; `bound` is always the last line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub id_scheme: String,
    pub num_vertices: usize,
    pub cover_size: usize,
    pub normalized_size: usize,
    pub cover: Vec<usize>,
    pub normalized: Vec<usize>,
    pub removed_a: Vec<usize>,
    /// DIMACS-style signed literals.
    pub assignment: Vec<i64>,
    pub bound: usize,
}

impl CertificateDocument {
    pub fn new(instance: &ReductionInstance, cert: &CoverCertificate) -> Self {
        let one_based = |s: &[usize]| s.iter().map(|v| v + 1).collect::<Vec<_>>();
        CertificateDocument {
            id_scheme: ID_SCHEME.to_string(),
            num_vertices: instance.num_vertices(),
            cover_size: cert.cover.len(),
            normalized_size: cert.normalized.len(),
            cover: one_based(&cert.cover),
            normalized: one_based(&cert.normalized),
            removed_a: one_based(&cert.removed_a),
            assignment: (1..=cert.assignment.len())
                .map(|v| Literal::new(v, cert.assignment.value(v)).to_dimacs())
                .collect(),
            bound: cert.bound,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("certificate serializes")
    }
}
