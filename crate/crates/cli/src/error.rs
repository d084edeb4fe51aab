use std::path::Path;

/// CLI failures carrying their process exit code:
/// 2 file-not-found, 3 parse, 4 invalid parameters, 5 budget exceeded,
/// 6 report-write failure.
#[derive(Debug)]
pub enum CliError {
    FileNotFound(String),
    Parse(String),
    InvalidParams(String),
    BudgetExceeded(String),
    ReportWrite(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::FileNotFound(_) => 2,
            CliError::Parse(_) => 3,
            CliError::InvalidParams(_) => 4,
            CliError::BudgetExceeded(_) => 5,
            CliError::ReportWrite(_) => 6,
        }
    }

    pub fn read(path: &Path, err: std::io::Error) -> Self {
        CliError::FileNotFound(format!("{}: {err}", path.display()))
    }

    pub fn write(path: &Path, err: std::io::Error) -> Self {
        CliError::ReportWrite(format!("{}: {err}", path.display()))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::FileNotFound(m) => write!(f, "cannot read {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::InvalidParams(m) => write!(f, "invalid parameters: {m}"),
            CliError::BudgetExceeded(m) => write!(f, "budget exceeded: {m}"),
            CliError::ReportWrite(m) => write!(f, "cannot write {m}"),
        }
    }
}

impl From<teamsel::Error> for CliError {
    fn from(err: teamsel::Error) -> Self {
        use teamsel::Error::*;
        match err {
            Parse(m) => CliError::Parse(m),
            BudgetExceeded(need, budget) => {
                CliError::BudgetExceeded(format!("{need} needed, {budget} allowed"))
            }
            other => CliError::InvalidParams(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
