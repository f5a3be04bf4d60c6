use std::fmt::Display;

use twreduce::cnf::CnfError;
use twreduce::decomposition::DecompositionError;
use twreduce::exacttw::TreewidthError;
use twreduce::graph::GraphError;
use twreduce::lowerbound::CoverError;
use twreduce::reduction::ReductionError;

pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

/// Output lines of a successful run, the last one being the verdict.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<String>,
    failed: bool,
}

impl Report {
    pub fn line(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.lines.push(format!("{key} {value}"));
        self
    }

    pub fn raw(&mut self, text: &str) -> &mut Self {
        self.lines.extend(text.lines().map(str::to_string));
        self
    }

    pub fn pass(mut self, detail: impl Display) -> Self {
        self.lines.push(format!("result PASS {detail}").trim_end().to_string());
        self
    }

    pub fn fail(mut self, detail: impl Display) -> Self {
        self.failed = true;
        self.lines.push(format!("result FAIL {detail}").trim_end().to_string());
        self
    }

    pub fn print(&self, quiet: bool) {
        let shown = if quiet {
            &self.lines[self.lines.len().saturating_sub(1)..]
        } else {
            &self.lines[..]
        };
        for line in shown {
            println!("{line}");
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.failed {
            EXIT_VIOLATION
        } else {
            0
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn budget(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_BUDGET,
            message: message.into(),
        }
    }

    pub fn verdict(&self) -> &'static str {
        match self.code {
            EXIT_BUDGET => "BUDGET",
            EXIT_VIOLATION => "FAIL",
            _ => "ERROR",
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::input(format!("{e:#}"))
    }
}

impl From<CnfError> for Failure {
    fn from(e: CnfError) -> Self {
        match e {
            CnfError::TooManyVariables { .. } => Failure::budget(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<TreewidthError> for Failure {
    fn from(e: TreewidthError) -> Self {
        match e {
            TreewidthError::TooLarge { .. } => Failure::budget(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<CoverError> for Failure {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::BudgetExceeded { .. } => Failure::budget(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<DecompositionError> for Failure {
    fn from(e: DecompositionError) -> Self {
        Failure::input(e.to_string())
    }
}
