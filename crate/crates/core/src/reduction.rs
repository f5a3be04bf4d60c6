//! Compiles a 3-CNF formula into its co-tripartite gadget graph.
//!
//! Vertex layout (0-based here, 1-based in files):
//!
//! * `0..7m`: clause vertices. Vertex `7j + code` stands for the satisfying
//!   partial assignment of clause `j` whose slot `p` (most significant bit
//!   first) is negated when bit `2 - p` of `code` is set. Code 7 would falsify
//!   the clause and does not exist.
//! * then `B(x_1), ..., B(x_n)` as contiguous blocks of `γ_i` vertices,
//! * then `C(x_1), ..., C(x_n)` likewise.
//!
//! `A`, `B` and `C` are cliques, `B(x_i)` is complete to `C(x_i)`, and a
//! clause vertex is complete to the module of each literal of its triple.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{occurrence_profile, Formula, Literal};
use crate::graph::Graph;

/// Version tag written into metadata sidecars.
pub const ID_SCHEME: &str = "twreduce-v1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error(
        "gamma {gamma} for variable {var} is too small: literal {literal} has {p} positive and \
         {q} negative occurrences, 4p+3q = {required}"
    )]
    GammaConstraint {
        var: usize,
        literal: String,
        p: usize,
        q: usize,
        required: usize,
        gamma: usize,
    },
    #[error("gamma for variable {var} must be at least 1")]
    ZeroGamma { var: usize },
    #[error("gamma profile has {found} entries for {expected} variables")]
    GammaLength { expected: usize, found: usize },
    #[error("max-sat value {msat} exceeds the clause count {m}")]
    MaxSatOutOfRange { msat: usize, m: usize },
    #[error("unknown gamma policy `{0}` (expected auto, fixed:N, pervar or occ4)")]
    UnknownPolicy(String),
    #[error("sidecar: {0}")]
    Sidecar(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaPolicy {
    /// One shared value, the smallest satisfying the occurrence constraint.
    UniformAuto,
    /// One shared, user-chosen value.
    UniformFixed(usize),
    /// Smallest feasible value per variable.
    PerVariableAuto,
    /// Four times the occurrence count of each variable.
    PerVariableOccurrences,
}

impl FromStr for GammaPolicy {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(GammaPolicy::UniformAuto),
            "pervar" => Ok(GammaPolicy::PerVariableAuto),
            "occ4" => Ok(GammaPolicy::PerVariableOccurrences),
            _ => s
                .strip_prefix("fixed:")
                .and_then(|n| n.parse().ok())
                .map(GammaPolicy::UniformFixed)
                .ok_or_else(|| ReductionError::UnknownPolicy(s.to_string())),
        }
    }
}

impl fmt::Display for GammaPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaPolicy::UniformAuto => write!(f, "auto"),
            GammaPolicy::UniformFixed(g) => write!(f, "fixed:{g}"),
            GammaPolicy::PerVariableAuto => write!(f, "pervar"),
            GammaPolicy::PerVariableOccurrences => write!(f, "occ4"),
        }
    }
}

/// Module size `γ_i` for every variable (index 0 is variable 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaProfile(Vec<usize>);

impl GammaProfile {
    pub fn new(gammas: Vec<usize>) -> Self {
        GammaProfile(gammas)
    }

    pub fn uniform(num_vars: usize, gamma: usize) -> Self {
        GammaProfile(vec![gamma; num_vars])
    }

    /// `γ` of variable `var` (1-based).
    pub fn of(&self, var: usize) -> usize {
        self.0[var - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn max(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Checks `γ_i ≥ 1` and `γ_i ≥ 4p+3q` for both literals of every variable.
    pub fn check(&self, formula: &Formula) -> Result<(), ReductionError> {
        if self.0.len() != formula.num_vars() {
            return Err(ReductionError::GammaLength {
                expected: formula.num_vars(),
                found: self.0.len(),
            });
        }
        let profile = occurrence_profile(formula);
        for var in 1..=formula.num_vars() {
            let gamma = self.of(var);
            if gamma == 0 {
                return Err(ReductionError::ZeroGamma { var });
            }
            let (pos, neg) = profile.of(var);
            // literal x_i, then literal ~x_i (whose positive occurrences are the negations)
            for (lit, p, q) in [(Literal::positive(var), pos, neg), (Literal::negative(var), neg, pos)] {
                if 4 * p + 3 * q > gamma {
                    return Err(ReductionError::GammaConstraint {
                        var,
                        literal: lit.to_string(),
                        p,
                        q,
                        required: 4 * p + 3 * q,
                        gamma,
                    });
                }
            }
        }
        Ok(())
    }
}

pub fn compute_gammas(formula: &Formula, policy: GammaPolicy) -> Result<GammaProfile, ReductionError> {
    let profile = occurrence_profile(formula);
    let need = |i: usize| {
        let (p, q) = (profile.positive[i], profile.negative[i]);
        (4 * p + 3 * q).max(4 * q + 3 * p).max(1)
    };
    let n = formula.num_vars();
    let gammas = match policy {
        GammaPolicy::UniformAuto => {
            let gamma = (0..n).map(need).max().unwrap_or(1);
            GammaProfile::uniform(n, gamma)
        }
        GammaPolicy::UniformFixed(gamma) => GammaProfile::uniform(n, gamma),
        GammaPolicy::PerVariableAuto => GammaProfile((0..n).map(need).collect()),
        GammaPolicy::PerVariableOccurrences => GammaProfile(
            (0..n)
                .map(|i| (4 * (profile.positive[i] + profile.negative[i])).max(1))
                .collect(),
        ),
    };
    gammas.check(formula)?;
    Ok(gammas)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    A,
    B,
    C,
}

/// One of the seven vertices of a clause block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClauseVertex {
    pub id: usize,
    pub code: u8,
    /// The partial assignment `(s_1, s_2, s_3)`, written as the literals it makes true.
    pub triple: [Literal; 3],
}

/// The gadget graph together with its layout.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    formula: Formula,
    gammas: GammaProfile,
    graph: Graph,
    /// First vertex of `B(x_i)`; `C(x_i)` starts `Σγ` later.
    module_starts: Vec<usize>,
    clause_vertices: Vec<[ClauseVertex; 7]>,
}

/// Partial assignment of a clause block for `code`.
pub fn clause_triple(clause: &[Literal; 3], code: u8) -> [Literal; 3] {
    debug_assert!(code < 7);
    std::array::from_fn(|p| {
        if code >> (2 - p) & 1 == 1 {
            clause[p].negated()
        } else {
            clause[p]
        }
    })
}

pub fn build_graph(formula: &Formula, gammas: &GammaProfile) -> Result<ReductionInstance, ReductionError> {
    gammas.check(formula)?;
    let m = formula.num_clauses();
    let n = formula.num_vars();
    let a_len = 7 * m;
    let total_gamma = gammas.sum();

    let mut module_starts = Vec::with_capacity(n);
    let mut next = a_len;
    for &g in gammas.as_slice() {
        module_starts.push(next);
        next += g;
    }

    let clause_vertices: Vec<[ClauseVertex; 7]> = formula
        .clauses()
        .iter()
        .enumerate()
        .map(|(j, clause)| {
            std::array::from_fn(|code| ClauseVertex {
                id: 7 * j + code,
                code: code as u8,
                triple: clause_triple(clause, code as u8),
            })
        })
        .collect();

    let num_vertices = a_len + 2 * total_gamma;
    let module = |lit: Literal| -> Range<usize> {
        let start = module_starts[lit.var() - 1] + if lit.is_positive() { 0 } else { total_gamma };
        start..start + gammas.of(lit.var())
    };

    let mut edges = Vec::new();
    for block in [0..a_len, a_len..a_len + total_gamma, a_len + total_gamma..num_vertices] {
        for u in block.clone() {
            edges.extend((u + 1..block.end).map(|v| (u, v)));
        }
    }
    for var in 1..=n {
        for b in module(Literal::positive(var)) {
            edges.extend(module(Literal::negative(var)).map(|c| (b, c)));
        }
    }
    for block in &clause_vertices {
        for vertex in block {
            for &lit in &vertex.triple {
                edges.extend(module(lit).map(|w| (vertex.id, w)));
            }
        }
    }
    let graph = Graph::from_edges(num_vertices, edges).expect("gadget edges are in range");

    Ok(ReductionInstance {
        formula: formula.clone(),
        gammas: gammas.clone(),
        graph,
        module_starts,
        clause_vertices,
    })
}

impl ReductionInstance {
    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn gammas(&self) -> &GammaProfile {
        &self.gammas
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn a_range(&self) -> Range<usize> {
        0..7 * self.formula.num_clauses()
    }

    pub fn b_range(&self) -> Range<usize> {
        let a = self.a_range().end;
        a..a + self.gammas.sum()
    }

    pub fn c_range(&self) -> Range<usize> {
        self.b_range().end..self.num_vertices()
    }

    pub fn part_range(&self, part: Part) -> Range<usize> {
        match part {
            Part::A => self.a_range(),
            Part::B => self.b_range(),
            Part::C => self.c_range(),
        }
    }

    /// `B(x_var)`.
    pub fn b_module(&self, var: usize) -> Range<usize> {
        let start = self.module_starts[var - 1];
        start..start + self.gammas.of(var)
    }

    /// `C(x_var)`.
    pub fn c_module(&self, var: usize) -> Range<usize> {
        let r = self.b_module(var);
        let shift = self.gammas.sum();
        r.start + shift..r.end + shift
    }

    /// Module that makes `lit` true: `B(x_i)` for `x_i`, `C(x_i)` for `~x_i`.
    pub fn literal_module(&self, lit: Literal) -> Range<usize> {
        if lit.is_positive() {
            self.b_module(lit.var())
        } else {
            self.c_module(lit.var())
        }
    }

    /// The seven vertices of clause `j` (0-based).
    pub fn clause_block(&self, j: usize) -> &[ClauseVertex; 7] {
        &self.clause_vertices[j]
    }

    pub fn clause_vertex(&self, v: usize) -> Option<&ClauseVertex> {
        self.a_range().contains(&v).then(|| &self.clause_vertices[v / 7][v % 7])
    }

    pub fn part_of(&self, v: usize) -> Part {
        if self.a_range().contains(&v) {
            Part::A
        } else if self.b_range().contains(&v) {
            Part::B
        } else {
            Part::C
        }
    }

    /// Variable (1-based) whose module contains `v`, if `v ∉ A`.
    pub fn variable_of(&self, v: usize) -> Option<usize> {
        let offset = match self.part_of(v) {
            Part::A => return None,
            Part::B => v,
            Part::C => v - self.gammas.sum(),
        };
        let idx = self.module_starts.partition_point(|&s| s <= offset);
        Some(idx)
    }

    /// Neighbors in `A` of the module `B(x_var)` (if `positive`) or `C(x_var)`.
    pub fn module_a_neighbors(&self, var: usize, positive: bool) -> Vec<usize> {
        let module = if positive {
            self.b_module(var)
        } else {
            self.c_module(var)
        };
        let a_end = self.a_range().end;
        self.graph
            .neighbors(module.start)
            .iter()
            .copied()
            .take_while(|&u| u < a_end)
            .collect()
    }

    /// Human-readable name such as `a_3(x1,~x4,x6)`, `b_2^5` or `c_7^1`.
    pub fn label(&self, v: usize) -> String {
        match self.part_of(v) {
            Part::A => {
                let cv = &self.clause_vertices[v / 7][v % 7];
                let [s1, s2, s3] = cv.triple;
                format!("a_{}({s1},{s2},{s3})", v / 7 + 1)
            }
            part => {
                let var = self.variable_of(v).expect("module vertex");
                let (prefix, module) = match part {
                    Part::B => ("b", self.b_module(var)),
                    _ => ("c", self.c_module(var)),
                };
                format!("{prefix}_{var}^{}", v - module.start + 1)
            }
        }
    }
}

/// `I(G)`: the gadget graph without the edges inside `A`, `B` and `C`.
pub fn incidence_graph(instance: &ReductionInstance) -> Graph {
    instance
        .graph
        .filter_edges(|u, v| instance.part_of(u) != instance.part_of(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WidthBounds {
    pub lower: usize,
    pub upper: usize,
}

/// Treewidth window `[Σγ + 7m − m* − 1, Σγ + 7m − m* + max γ − 1]` for the
/// maximum number `msat` of simultaneously satisfiable clauses.
pub fn predicted_bounds(instance: &ReductionInstance, msat: usize) -> Result<WidthBounds, ReductionError> {
    let m = instance.formula.num_clauses();
    if msat > m {
        return Err(ReductionError::MaxSatOutOfRange { msat, m });
    }
    let base = instance.gammas.sum() + 7 * m - msat;
    Ok(WidthBounds {
        lower: base - 1,
        upper: base + instance.gammas.max() - 1,
    })
}

/// Machine-readable description of an instance's layout (TOML).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub id_scheme: String,
    pub num_vars: usize,
    pub num_clauses: usize,
    pub num_vertices: usize,
    pub num_edges: usize,
    /// 1-based first vertex of `A`, `B` and `C`.
    pub a_offset: usize,
    pub b_offset: usize,
    pub c_offset: usize,
    pub gammas: Vec<usize>,
    /// 1-based first vertex of each `B(x_i)` and `C(x_i)`.
    pub b_modules: Vec<usize>,
    pub c_modules: Vec<usize>,
    pub clauses: Vec<[i64; 3]>,
}

impl Sidecar {
    pub fn from_instance(instance: &ReductionInstance) -> Self {
        let n = instance.formula.num_vars();
        Sidecar {
            id_scheme: ID_SCHEME.to_string(),
            num_vars: n,
            num_clauses: instance.formula.num_clauses(),
            num_vertices: instance.num_vertices(),
            num_edges: instance.graph.num_edges(),
            a_offset: instance.a_range().start + 1,
            b_offset: instance.b_range().start + 1,
            c_offset: instance.c_range().start + 1,
            gammas: instance.gammas.as_slice().to_vec(),
            b_modules: (1..=n).map(|i| instance.b_module(i).start + 1).collect(),
            c_modules: (1..=n).map(|i| instance.c_module(i).start + 1).collect(),
            clauses: instance
                .formula
                .clauses()
                .iter()
                .map(|c| c.map(Literal::to_dimacs))
                .collect(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sidecar serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, ReductionError> {
        toml::from_str(text).map_err(|e| ReductionError::Sidecar(e.to_string()))
    }

    /// Rebuilds the instance the sidecar describes.
    pub fn instance(&self) -> Result<ReductionInstance, ReductionError> {
        if self.id_scheme != ID_SCHEME {
            return Err(ReductionError::Sidecar(format!(
                "unsupported id scheme `{}`",
                self.id_scheme
            )));
        }
        let formula = Formula::from_dimacs_clauses(self.num_vars, &self.clauses)
            .map_err(|e| ReductionError::Sidecar(e.to_string()))?;
        build_graph(&formula, &GammaProfile::new(self.gammas.clone()))
    }
}
