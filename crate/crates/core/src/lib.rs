//! Tools for the 3-SAT to treewidth gadget reduction.
//!
//! * [`cnf`]: formulas, DIMACS I/O and brute-force Max-SAT.
//! * [`reduction`]: the co-tripartite gadget graph and its layout.
//! * [`decomposition`]: tree-decompositions, validation, PACE `.td` I/O, the
//!   assignment-driven construction and the claw normal form.
//! * [`lowerbound`]: vertex covers of `I(G)`, the replacement normalization and
//!   an exact minimum vertex cover solver.
//! * [`exacttw`]: exact treewidth oracles.

pub mod cnf;
pub mod decomposition;
pub mod exacttw;
pub mod graph;
pub mod lowerbound;
pub mod reduction;
