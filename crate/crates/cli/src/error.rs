use thiserror::Error;

use spa_core::point::PointError;
use spa_core::presentation::PresentationError;
use spa_core::series::ParseError;
use spa_core::sheafcheck::SheafError;
use spa_core::subset::SubsetError;
use spa_core::valgroup::ValueError;
use spa_core::SeriesError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{0}`: {1}")]
    Io(String, String),
    #[error("malformed scenario: {0}")]
    Scenario(String),
    #[error("{0}")]
    Resolve(String),
    #[error("precondition failed for `{name}`: {message}")]
    Precondition { name: String, message: String },
    #[error("undecidable for `{name}` at this precision: {message}")]
    Undecidable { name: String, message: String },
    #[error("missing argument `{0}`")]
    MissingArg(String),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
}

impl CliError {
    pub fn unknown(what: &str, name: &str) -> Self {
        CliError::Resolve(format!("unknown {what} `{name}`"))
    }

    /// Wraps a library error raised while handling `name`.
    pub fn precondition(name: &str, e: impl Classify) -> Self {
        let name = name.to_string();
        let message = e.to_string();
        if e.undecidable() {
            CliError::Undecidable { name, message }
        } else {
            CliError::Precondition { name, message }
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Undecidable { .. } => 3,
            _ => 2,
        }
    }
}

/// Whether an error reflects missing precision rather than bad input.
pub trait Classify: std::fmt::Display {
    fn undecidable(&self) -> bool {
        false
    }
}

impl Classify for SeriesError {
    fn undecidable(&self) -> bool {
        matches!(
            self,
            SeriesError::UnknownTail(_)
                | SeriesError::Undecidable(_)
                | SeriesError::ZeroAtPrecision(_)
                | SeriesError::NoDominantTerm
        )
    }
}

impl Classify for PointError {
    fn undecidable(&self) -> bool {
        matches!(self, PointError::Series(e) if e.undecidable())
    }
}

impl Classify for SubsetError {
    fn undecidable(&self) -> bool {
        match self {
            SubsetError::Point(e) => e.undecidable(),
            SubsetError::Series(e) => e.undecidable(),
            _ => false,
        }
    }
}

impl Classify for PresentationError {
    fn undecidable(&self) -> bool {
        match self {
            PresentationError::Series(e) => e.undecidable(),
            PresentationError::Subset(e) => e.undecidable(),
            _ => false,
        }
    }
}

impl Classify for SheafError {
    fn undecidable(&self) -> bool {
        matches!(self, SheafError::Presentation(e) if e.undecidable())
    }
}

impl Classify for ParseError {}
impl Classify for ValueError {}
