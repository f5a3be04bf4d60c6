//! 3-CNF formulas: model, DIMACS I/O, occurrence statistics and brute-force
//! satisfiability oracles.

use std::fmt;

use thiserror::Error;

/// Largest variable count the exhaustive Max-SAT oracle accepts.
pub const MAX_BRUTE_FORCE_VARS: usize = 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: malformed header: {message}")]
    Header { line: usize, message: String },
    #[error("line {line}: unexpected token `{token}`")]
    Token { line: usize, token: String },
    #[error("clause {clause} has {len} literals, expected exactly 3")]
    ClauseWidth { clause: usize, len: usize },
    #[error("clause {clause} mentions variable {var} more than once")]
    RepeatedVariable { clause: usize, var: usize },
    #[error("literal {literal} is out of range for {num_vars} variables")]
    VariableOutOfRange { literal: i64, num_vars: usize },
    #[error("header announces {expected} clauses but {found} were read")]
    ClauseCountMismatch { expected: usize, found: usize },
    #[error("a formula needs at least one variable and one clause")]
    Empty,
    #[error("assignment has {found} values but the formula has {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("assignment: {0}")]
    Assignment(String),
    #[error("{num_vars} variables exceed the brute-force budget of {max}")]
    TooManyVariables { num_vars: usize, max: usize },
    #[error("duplication factor must be positive")]
    ZeroCopies,
    #[error("duplicating {num_vars} variables {copies} times overflows the index range")]
    Overflow { num_vars: usize, copies: usize },
}

/// A variable or its negation. Variables are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: u32,
    positive: bool,
}

impl Literal {
    pub fn new(var: usize, positive: bool) -> Self {
        assert!(
            var >= 1 && var <= u32::MAX as usize,
            "variable index {var} out of range"
        );
        Literal {
            var: var as u32,
            positive,
        }
    }

    pub fn positive(var: usize) -> Self {
        Literal::new(var, true)
    }

    pub fn negative(var: usize) -> Self {
        Literal::new(var, false)
    }

    /// Parses a non-zero DIMACS integer.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        if lit == 0 || lit.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Literal::new(lit.unsigned_abs() as usize, lit > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    /// 1-based variable index.
    pub fn var(self) -> usize {
        self.var as usize
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    pub fn is_satisfied_by(self, assignment: &Assignment) -> bool {
        assignment.value(self.var()) == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "~x{}", self.var)
        }
    }
}

pub type Clause = [Literal; 3];

/// A 3-CNF formula whose clauses each mention three distinct variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        if num_vars == 0 || clauses.is_empty() {
            return Err(CnfError::Empty);
        }
        for (idx, clause) in clauses.iter().enumerate() {
            check_clause(idx + 1, clause, num_vars)?;
        }
        Ok(Formula { num_vars, clauses })
    }

    /// Builds a formula from signed DIMACS triples.
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[[i64; 3]]) -> Result<Self, CnfError> {
        let mut out = Vec::with_capacity(clauses.len());
        for triple in clauses {
            let mut clause = [Literal::positive(1); 3];
            for (slot, &lit) in clause.iter_mut().zip(triple) {
                *slot = Literal::from_dimacs(lit).ok_or(CnfError::VariableOutOfRange { literal: lit, num_vars })?;
            }
            out.push(clause);
        }
        Formula::new(num_vars, out)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, j: usize) -> &Clause {
        &self.clauses[j]
    }
}

fn check_clause(idx: usize, clause: &[Literal], num_vars: usize) -> Result<(), CnfError> {
    if clause.len() != 3 {
        return Err(CnfError::ClauseWidth {
            clause: idx,
            len: clause.len(),
        });
    }
    for (p, lit) in clause.iter().enumerate() {
        if lit.var() > num_vars {
            return Err(CnfError::VariableOutOfRange {
                literal: lit.to_dimacs(),
                num_vars,
            });
        }
        if clause[..p].iter().any(|other| other.var() == lit.var()) {
            return Err(CnfError::RepeatedVariable {
                clause: idx,
                var: lit.var(),
            });
        }
    }
    Ok(())
}

/// Parses a DIMACS CNF document. Clauses may span lines; literal order is kept.
pub fn parse_dimacs(text: &str) -> Result<Formula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::Header {
                    line: lineno,
                    message: "duplicate problem line".into(),
                });
            }
            header = Some(parse_header(lineno, trimmed)?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(CnfError::Header {
                line: lineno,
                message: "clause data before the problem line".into(),
            });
        };
        for token in trimmed.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| CnfError::Token {
                line: lineno,
                token: token.to_string(),
            })?;
            if value == 0 {
                check_clause(clauses.len() + 1, &pending, num_vars)?;
                clauses.push([pending[0], pending[1], pending[2]]);
                pending.clear();
                continue;
            }
            let lit =
                Literal::from_dimacs(value)
                    .filter(|l| l.var() <= num_vars)
                    .ok_or(CnfError::VariableOutOfRange {
                        literal: value,
                        num_vars,
                    })?;
            pending.push(lit);
        }
    }

    let Some((num_vars, expected)) = header else {
        return Err(CnfError::Header {
            line: 0,
            message: "missing `p cnf` line".into(),
        });
    };
    if !pending.is_empty() {
        return Err(CnfError::ClauseWidth {
            clause: clauses.len() + 1,
            len: pending.len(),
        });
    }
    if clauses.len() != expected {
        return Err(CnfError::ClauseCountMismatch {
            expected,
            found: clauses.len(),
        });
    }
    Formula::new(num_vars, clauses)
}

fn parse_header(line: usize, text: &str) -> Result<(usize, usize), CnfError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    let bad = |message: &str| CnfError::Header {
        line,
        message: message.to_string(),
    };
    if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
        return Err(bad("expected `p cnf <vars> <clauses>`"));
    }
    let num_vars = fields[2].parse().map_err(|_| bad("variable count is not a number"))?;
    let num_clauses = fields[3].parse().map_err(|_| bad("clause count is not a number"))?;
    Ok((num_vars, num_clauses))
}

/// Canonical DIMACS rendering: header, then one clause per line.
pub fn write_dimacs(formula: &Formula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.num_vars, formula.clauses.len());
    for clause in &formula.clauses {
        for lit in clause {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

/// Per-variable occurrence counts, indexed from 0 for variable 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceProfile {
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

impl OccurrenceProfile {
    /// Occurrences of variable `var` (1-based) as `(p, q)`.
    pub fn of(&self, var: usize) -> (usize, usize) {
        (self.positive[var - 1], self.negative[var - 1])
    }

    pub fn total(&self) -> usize {
        self.positive.iter().sum::<usize>() + self.negative.iter().sum::<usize>()
    }
}

pub fn occurrence_profile(formula: &Formula) -> OccurrenceProfile {
    let mut positive = vec![0; formula.num_vars];
    let mut negative = vec![0; formula.num_vars];
    for lit in formula.clauses.iter().flatten() {
        if lit.is_positive() {
            positive[lit.var() - 1] += 1;
        } else {
            negative[lit.var() - 1] += 1;
        }
    }
    OccurrenceProfile { positive, negative }
}

/// Outcome of checking membership in the (3,2B)-SAT fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentReport {
    /// Variables (1-based) not occurring exactly twice with each sign.
    pub offending: Vec<usize>,
    /// Whether `4n = 3m`.
    pub variable_count_matches: bool,
}

impl FragmentReport {
    pub fn passes(&self) -> bool {
        self.offending.is_empty()
    }
}

pub fn validate_32b(formula: &Formula) -> FragmentReport {
    let profile = occurrence_profile(formula);
    let offending = (1..=formula.num_vars).filter(|&v| profile.of(v) != (2, 2)).collect();
    FragmentReport {
        offending,
        variable_count_matches: 4 * formula.num_vars == 3 * formula.num_clauses(),
    }
}

/// `copies` variable-disjoint copies of `formula`; copy `t` maps `x_i` to `x_{t*n+i}`.
pub fn duplicate(formula: &Formula, copies: usize) -> Result<Formula, CnfError> {
    if copies == 0 {
        return Err(CnfError::ZeroCopies);
    }
    let n = formula.num_vars;
    let total = n
        .checked_mul(copies)
        .filter(|&t| t <= u32::MAX as usize)
        .ok_or(CnfError::Overflow { num_vars: n, copies })?;
    let mut clauses = Vec::with_capacity(formula.clauses.len() * copies);
    for t in 0..copies {
        for clause in &formula.clauses {
            clauses.push(clause.map(|l| Literal::new(t * n + l.var(), l.is_positive())));
        }
    }
    Formula::new(total, clauses)
}

/// A total truth assignment; `values[i]` is the value of variable `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn all(num_vars: usize, value: bool) -> Self {
        Assignment {
            values: vec![value; num_vars],
        }
    }

    /// Bit `i` of `mask` is the value of variable `i + 1`.
    pub fn from_mask(num_vars: usize, mask: u64) -> Self {
        Assignment {
            values: (0..num_vars).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value of variable `var` (1-based).
    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Variables set to true, ascending.
    pub fn true_vars(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.values.len()).filter(|&v| self.values[v - 1])
    }

    /// Variables set to false, ascending.
    pub fn false_vars(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.values.len()).filter(|&v| !self.values[v - 1])
    }
}

/// Reads an assignment in solver-output style: signed integers, one per
/// variable, optionally prefixed by `v` and terminated by `0`.
pub fn parse_assignment(text: &str, num_vars: usize) -> Result<Assignment, CnfError> {
    let mut values: Vec<Option<bool>> = vec![None; num_vars];
    let mut terminated = false;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('s') {
            continue;
        }
        let line = line.strip_prefix('v').unwrap_or(line);
        for token in line.split_whitespace() {
            if terminated {
                return Err(CnfError::Assignment(format!("token `{token}` after terminating 0")));
            }
            let lit: i64 = token
                .parse()
                .map_err(|_| CnfError::Assignment(format!("`{token}` is not an integer")))?;
            if lit == 0 {
                terminated = true;
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > num_vars {
                return Err(CnfError::VariableOutOfRange { literal: lit, num_vars });
            }
            if values[var - 1].replace(lit > 0).is_some() {
                return Err(CnfError::Assignment(format!("variable {var} assigned twice")));
            }
        }
    }
    let found = values.iter().filter(|v| v.is_some()).count();
    if found != num_vars {
        return Err(CnfError::AssignmentLength {
            expected: num_vars,
            found,
        });
    }
    Ok(Assignment::new(values.into_iter().flatten().collect()))
}

pub fn write_assignment(assignment: &Assignment) -> String {
    let mut out = String::new();
    for (i, &value) in assignment.values.iter().enumerate() {
        let var = (i + 1) as i64;
        out.push_str(&(if value { var } else { -var }).to_string());
        out.push(' ');
    }
    out.push_str("0\n");
    out
}

/// Number of clauses with at least one true literal.
pub fn evaluate(formula: &Formula, assignment: &Assignment) -> Result<usize, CnfError> {
    if assignment.len() != formula.num_vars {
        return Err(CnfError::AssignmentLength {
            expected: formula.num_vars,
            found: assignment.len(),
        });
    }
    Ok(formula
        .clauses
        .iter()
        .filter(|clause| clause.iter().any(|l| l.is_satisfied_by(assignment)))
        .count())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxSat {
    pub satisfied: usize,
    pub witness: Assignment,
}

/// Exhaustive Max-SAT over all `2^n` assignments. The witness is the
/// numerically smallest optimal assignment mask.
pub fn max_sat_bruteforce(formula: &Formula) -> Result<MaxSat, CnfError> {
    let n = formula.num_vars;
    if n > MAX_BRUTE_FORCE_VARS {
        return Err(CnfError::TooManyVariables {
            num_vars: n,
            max: MAX_BRUTE_FORCE_VARS,
        });
    }
    // (positive mask, negative mask) per clause
    let masks: Vec<(u64, u64)> = formula
        .clauses
        .iter()
        .map(|clause| {
            clause.iter().fold((0, 0), |(pos, neg), l| {
                let bit = 1u64 << (l.var() - 1);
                if l.is_positive() {
                    (pos | bit, neg)
                } else {
                    (pos, neg | bit)
                }
            })
        })
        .collect();
    let m = masks.len();
    let mut best = (0usize, 0u64);
    for mask in 0..(1u64 << n) {
        let sat = masks
            .iter()
            .filter(|&&(pos, neg)| mask & pos != 0 || !mask & neg != 0)
            .count();
        if sat > best.0 || mask == 0 {
            best = (sat, mask);
            if sat == m {
                break;
            }
        }
    }
    Ok(MaxSat {
        satisfied: best.0,
        witness: Assignment::from_mask(n, best.1),
    })
}
