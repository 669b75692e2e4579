//! Command implementations behind the `locomp` binary. Every command turns a
//! class-definition file into a [`Report`]; the binary only parses flags and
//! writes the chosen encoding.

mod commands;
mod report;
mod spec_file;

pub use commands::{asym, compare, count, enumerate, run_stats, validate, NRange};
pub use report::{ratio_string, Cell, Report};
pub use spec_file::{ClassSpecFile, PartsDef, RoleDef, RuleDef, RunDef, VertexDef, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Spec(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Hypothesis(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    /// 0 success, 2 spec error, 3 resource cap, 4 hypothesis violation,
    /// 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Hypothesis(_) => 4,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<locomp::Error> for CliError {
    fn from(e: locomp::Error) -> Self {
        use locomp::Error as E;
        let msg = e.to_string();
        match e {
            E::InvalidSpec(_) | E::InvalidArgument(_) | E::IndexOutOfRange { .. } => CliError::Spec(msg),
            E::BudgetExceeded { .. } | E::EnumerationTooLarge { .. } => CliError::Resource(msg),
            E::NotBorderFree { .. } | E::Hypothesis(_) => CliError::Hypothesis(msg),
            E::MalformedImage(_) | E::Numerical(_) => CliError::Failure(msg),
        }
    }
}
