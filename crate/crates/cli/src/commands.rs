use std::path::Path;

use anyhow::Context;
use twreduce::cnf::{
    duplicate as duplicate_formula, evaluate, max_sat_bruteforce, parse_assignment, parse_dimacs,
    validate_32b as check_32b, write_assignment, write_dimacs, Formula,
};
use twreduce::decomposition::{build_from_assignment, read_td, validate, write_td};
use twreduce::exacttw::{quotient, read_weighted_gr, weighted_treewidth_with_budget};
use twreduce::graph::write_gr_with_comments;
use twreduce::lowerbound::{certify_lower_bound_with_budget, CertificateDocument};
use twreduce::reduction::{
    build_graph, compute_gammas, predicted_bounds, GammaPolicy, ReductionInstance, Sidecar, ID_SCHEME,
};

use crate::report::{Failure, Report};

fn read(path: &Path) -> Result<String, Failure> {
    Ok(std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    Ok(std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?)
}

fn read_formula(path: &Path) -> Result<Formula, Failure> {
    parse_dimacs(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn reduce_formula(formula: &Formula, policy: GammaPolicy) -> Result<ReductionInstance, Failure> {
    let gammas = compute_gammas(formula, policy)?;
    Ok(build_graph(formula, &gammas)?)
}

fn max_sat(formula: &Formula, max_vars: usize) -> Result<twreduce::cnf::MaxSat, Failure> {
    if formula.num_vars() > max_vars {
        return Err(Failure::budget(format!(
            "{} variables exceed the brute-force budget of {max_vars}",
            formula.num_vars()
        )));
    }
    Ok(max_sat_bruteforce(formula)?)
}

fn describe(report: &mut Report, r: &ReductionInstance, policy: GammaPolicy) {
    report
        .line("variables", r.formula().num_vars())
        .line("clauses", r.formula().num_clauses())
        .line("gamma_policy", policy)
        .line("gamma_sum", r.gammas().sum())
        .line("gamma_max", r.gammas().max())
        .line("vertices", r.num_vertices());
}

pub fn reduce(cnf: &Path, output: &Path, sidecar: &Path, policy: GammaPolicy) -> Result<Report, Failure> {
    let formula = read_formula(cnf)?;
    let r = reduce_formula(&formula, policy)?;
    let comments = vec![
        format!("{ID_SCHEME} gadget graph"),
        format!(
            "variables {} clauses {} gamma {}",
            formula.num_vars(),
            formula.num_clauses(),
            policy
        ),
    ];
    write(output, &write_gr_with_comments(r.graph(), &comments))?;
    write(sidecar, &Sidecar::from_instance(&r).to_toml())?;
    let mut report = Report::default();
    describe(&mut report, &r, policy);
    report
        .line("edges", r.graph().num_edges())
        .line("graph", output.display())
        .line("sidecar", sidecar.display());
    Ok(report.pass(""))
}

pub fn build_td(cnf: &Path, assignment: &Path, output: &Path, policy: GammaPolicy) -> Result<Report, Failure> {
    let formula = read_formula(cnf)?;
    let a = parse_assignment(&read(assignment)?, formula.num_vars())?;
    let r = reduce_formula(&formula, policy)?;
    let td = build_from_assignment(&r, &a)?;
    write(output, &write_td(&td, r.num_vertices()))?;
    let satisfied = evaluate(&formula, &a)?;
    let cap = r.gammas().sum() + r.gammas().max() + 7 * formula.num_clauses() - satisfied - 1;
    let mut report = Report::default();
    describe(&mut report, &r, policy);
    report
        .line("satisfied", satisfied)
        .line("nodes", td.num_nodes())
        .line("width", td.width())
        .line("width_cap", cap)
        .line("td", output.display());
    Ok(if td.width() <= cap {
        report.pass(format!("width {} <= {cap}", td.width()))
    } else {
        report.fail(format!("width {} > {cap}", td.width()))
    })
}

pub fn verify_td(graph: &Path, td: &Path) -> Result<Report, Failure> {
    let g = read_weighted_gr(&read(graph)?)?.graph().clone();
    let td = read_td(&read(td)?, g.num_vertices())?;
    let outcome = validate(&g, &td);
    let mut report = Report::default();
    report
        .line("vertices", g.num_vertices())
        .line("nodes", td.num_nodes())
        .line("width", outcome.width);
    Ok(match outcome.violation {
        None => report.pass(format!("valid width {}", outcome.width)),
        Some(v) => report.fail(format!("invalid: {v}")),
    })
}

pub fn certify_lb(cnf: &Path, output: Option<&Path>, policy: GammaPolicy, budget: u64) -> Result<Report, Failure> {
    let formula = read_formula(cnf)?;
    let r = reduce_formula(&formula, policy)?;
    let lb = certify_lower_bound_with_budget(&r, budget)?;
    let document = CertificateDocument::new(&r, &lb.certificate).to_toml();
    if let Some(path) = output {
        write(path, &document)?;
    }
    let mut report = Report::default();
    report.raw(&document);
    Ok(report.pass(format!("bound {}", lb.bound)))
}

pub fn exact_tw(input: &Path, cnf: Option<GammaPolicy>, max_dp_vertices: usize) -> Result<Report, Failure> {
    let mut report = Report::default();
    let graph = match cnf {
        Some(policy) => {
            let r = reduce_formula(&read_formula(input)?, policy)?;
            describe(&mut report, &r, policy);
            quotient(&r).graph
        }
        None => read_weighted_gr(&read(input)?)?,
    };
    report.line("solved_vertices", graph.graph().num_vertices());
    let tw = weighted_treewidth_with_budget(&graph, max_dp_vertices)?;
    report.line("treewidth", tw);
    Ok(report.pass(format!("treewidth {tw}")))
}

pub fn maxsat(cnf: &Path, output: Option<&Path>, max_vars: usize) -> Result<Report, Failure> {
    let formula = read_formula(cnf)?;
    let best = max_sat(&formula, max_vars)?;
    let witness = write_assignment(&best.witness);
    if let Some(path) = output {
        write(path, &witness)?;
    }
    let mut report = Report::default();
    report
        .line("variables", formula.num_vars())
        .line("clauses", formula.num_clauses())
        .line("satisfied", best.satisfied)
        .line("witness", witness.trim_end());
    Ok(report.pass(format!("max_sat {}", best.satisfied)))
}

pub fn gap_check(
    cnf: &Path,
    copies: usize,
    policy: GammaPolicy,
    max_vars: usize,
    max_dp_vertices: usize,
) -> Result<Report, Failure> {
    let mut formula = read_formula(cnf)?;
    if copies > 1 {
        formula = duplicate_formula(&formula, copies)?;
    }
    let r = reduce_formula(&formula, policy)?;
    let mut report = Report::default();
    describe(&mut report, &r, policy);
    report.line("copies", copies);
    let msat = max_sat(&formula, max_vars)?.satisfied;
    let bounds = predicted_bounds(&r, msat)?;
    report
        .line("max_sat", msat)
        .line("lower", bounds.lower)
        .line("upper", bounds.upper);
    let tw = weighted_treewidth_with_budget(&quotient(&r).graph, max_dp_vertices)?;
    report.line("treewidth", tw);
    let window = format!("tw {tw} in [{}, {}]", bounds.lower, bounds.upper);
    Ok(if (bounds.lower..=bounds.upper).contains(&tw) {
        report.pass(window)
    } else {
        report.fail(format!("tw {tw} outside [{}, {}]", bounds.lower, bounds.upper))
    })
}

pub fn duplicate(cnf: &Path, k: usize, output: &Path) -> Result<Report, Failure> {
    let formula = read_formula(cnf)?;
    let copies = duplicate_formula(&formula, k)?;
    write(output, &write_dimacs(&copies))?;
    let mut report = Report::default();
    report
        .line("variables", copies.num_vars())
        .line("clauses", copies.num_clauses())
        .line("output", output.display());
    Ok(report.pass(""))
}

pub fn validate_32b(cnf: &Path) -> Result<Report, Failure> {
    let formula = read_formula(cnf)?;
    let check = check_32b(&formula);
    let mut report = Report::default();
    let offending: Vec<String> = check.offending.iter().map(|v| v.to_string()).collect();
    report
        .line("variables", formula.num_vars())
        .line("clauses", formula.num_clauses())
        .line(
            "offending",
            if offending.is_empty() {
                "none".into()
            } else {
                offending.join(" ")
            },
        )
        .line("variable_count_matches", check.variable_count_matches);
    Ok(if check.passes() {
        report.pass("")
    } else {
        report.fail(format!("{} offending variables", check.offending.len()))
    })
}
