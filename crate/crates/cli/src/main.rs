//! `twreduce`: command-line front end for the gadget reduction.
//!
//! Every subcommand prints `key value` lines on standard output and ends with
//! a `result` line. Exit codes: 0 pass, 1 a checked property failed, 2 bad
//! input, 3 an oracle budget was exceeded.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twreduce::cnf::MAX_BRUTE_FORCE_VARS;
use twreduce::exacttw::MAX_DP_VERTICES;
use twreduce::lowerbound::DEFAULT_NODE_BUDGET;
use twreduce::reduction::GammaPolicy;

use report::Failure;

#[derive(Debug, Parser)]
#[command(name = "twreduce", version, about = "3-SAT to treewidth gadget reduction toolkit")]
struct Cli {
    /// Print only the final result line.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
struct GammaArg {
    /// Module sizes: auto, fixed:N, pervar or occ4.
    #[arg(long, default_value = "auto", value_parser = parse_gamma)]
    gamma: GammaPolicy,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_gamma(s: &str) -> Result<GammaPolicy, String> {
    s.parse()
        .map_err(|e: twreduce::reduction::ReductionError| e.to_string())
}

#[derive(Debug, Args, Clone, Copy)]
struct Budgets {
    /// Largest (quotient) graph handed to the subset dynamic program.
    #[arg(long, default_value_t = MAX_DP_VERTICES, value_parser = positive)]
    max_dp_vertices: usize,
    /// Largest variable count for brute-force Max-SAT.
    #[arg(long, default_value_t = MAX_BRUTE_FORCE_VARS, value_parser = positive)]
    max_vars: usize,
    /// Search nodes for the exact vertex cover solver.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    vc_budget: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a 3-CNF formula into a gadget graph (.gr) and its layout sidecar.
    Reduce {
        cnf: PathBuf,
        /// Graph output.
        #[arg(long, short)]
        output: PathBuf,
        /// Sidecar output (default: the graph path with extension `toml`).
        #[arg(long)]
        sidecar: Option<PathBuf>,
        #[command(flatten)]
        gamma: GammaArg,
    },
    /// Build the tree-decomposition induced by a truth assignment.
    BuildTd {
        cnf: PathBuf,
        assignment: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        #[command(flatten)]
        gamma: GammaArg,
    },
    /// Check a .td file against a .gr file.
    VerifyTd { graph: PathBuf, td: PathBuf },
    /// Certify a treewidth lower bound with an exact minimum vertex cover.
    CertifyLb {
        cnf: PathBuf,
        /// Also write the certificate here.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        gamma: GammaArg,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Exact treewidth of a (weighted) .gr file, or of a formula's gadget graph.
    ExactTw {
        input: PathBuf,
        /// Treat the input as a CNF formula and solve its gadget graph.
        #[arg(long)]
        cnf: bool,
        #[command(flatten)]
        gamma: GammaArg,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Brute-force Max-SAT.
    Maxsat {
        cnf: PathBuf,
        /// Write an optimal assignment here.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Check that the exact treewidth lies in the window predicted from Max-SAT.
    GapCheck {
        cnf: PathBuf,
        /// Check the formula made of this many disjoint copies instead.
        #[arg(long, default_value_t = 1, value_parser = positive)]
        duplicate: usize,
        #[command(flatten)]
        gamma: GammaArg,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Write `k` variable-disjoint copies of a formula.
    Duplicate {
        cnf: PathBuf,
        #[arg(short, long, value_parser = positive)]
        k: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Check whether every variable occurs exactly twice with each sign.
    #[command(name = "validate-32b")]
    Validate32b { cnf: PathBuf },
}

/// Input and output files of one invocation.
#[derive(Debug)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

impl RunConfig {
    /// Rejects an output that would overwrite an input or another output.
    pub fn check(&self) -> Result<(), Failure> {
        let key =
            |p: &PathBuf| std::fs::canonicalize(p).unwrap_or_else(|_| std::path::absolute(p).unwrap_or(p.clone()));
        for (i, out) in self.outputs.iter().enumerate() {
            if self.inputs.iter().any(|inp| key(inp) == key(out)) {
                return Err(Failure::input(format!("output {} is also an input", out.display())));
            }
            if self.outputs[..i].iter().any(|o| key(o) == key(out)) {
                return Err(Failure::input(format!("output {} given twice", out.display())));
            }
        }
        Ok(())
    }
}

impl Command {
    fn paths(&self) -> RunConfig {
        let (inputs, outputs): (Vec<&PathBuf>, Vec<PathBuf>) = match self {
            Command::Reduce {
                cnf, output, sidecar, ..
            } => (
                vec![cnf],
                vec![
                    output.clone(),
                    sidecar.clone().unwrap_or_else(|| output.with_extension("toml")),
                ],
            ),
            Command::BuildTd {
                cnf,
                assignment,
                output,
                ..
            } => (vec![cnf, assignment], vec![output.clone()]),
            Command::VerifyTd { graph, td } => (vec![graph, td], vec![]),
            Command::CertifyLb { cnf, output, .. } | Command::Maxsat { cnf, output, .. } => {
                (vec![cnf], output.iter().cloned().collect())
            }
            Command::ExactTw { input, .. } => (vec![input], vec![]),
            Command::GapCheck { cnf, .. } | Command::Validate32b { cnf } => (vec![cnf], vec![]),
            Command::Duplicate { cnf, output, .. } => (vec![cnf], vec![output.clone()]),
        };
        RunConfig {
            inputs: inputs.into_iter().cloned().collect(),
            outputs,
        }
    }
}

fn run(cli: &Cli) -> Result<report::Report, Failure> {
    cli.command.paths().check()?;
    match &cli.command {
        Command::Reduce {
            cnf,
            output,
            sidecar,
            gamma,
        } => {
            let sidecar = sidecar.clone().unwrap_or_else(|| output.with_extension("toml"));
            commands::reduce(cnf, output, &sidecar, gamma.gamma)
        }
        Command::BuildTd {
            cnf,
            assignment,
            output,
            gamma,
        } => commands::build_td(cnf, assignment, output, gamma.gamma),
        Command::VerifyTd { graph, td } => commands::verify_td(graph, td),
        Command::CertifyLb {
            cnf,
            output,
            gamma,
            budgets,
        } => commands::certify_lb(cnf, output.as_deref(), gamma.gamma, budgets.vc_budget),
        Command::ExactTw {
            input,
            cnf,
            gamma,
            budgets,
        } => commands::exact_tw(input, cnf.then_some(gamma.gamma), budgets.max_dp_vertices),
        Command::Maxsat { cnf, output, budgets } => commands::maxsat(cnf, output.as_deref(), budgets.max_vars),
        Command::GapCheck {
            cnf,
            duplicate,
            gamma,
            budgets,
        } => commands::gap_check(cnf, *duplicate, gamma.gamma, budgets.max_vars, budgets.max_dp_vertices),
        Command::Duplicate { cnf, k, output } => commands::duplicate(cnf, *k, output),
        Command::Validate32b { cnf } => commands::validate_32b(cnf),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            report.print(cli.quiet);
            ExitCode::from(report.exit_code())
        }
        Err(failure) => {
            eprintln!("twreduce: {}", failure.message);
            println!("result {}", failure.verdict());
            ExitCode::from(failure.code)
        }
    }
}
