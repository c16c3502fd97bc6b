use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("no binding for generator {0}")]
    MissingBinding(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computation would exceed one of the configured budgets.
    #[error("resource budget exceeded: {what} needs {required}, limit is {limit}")]
    Resource {
        what: String,
        required: u128,
        limit: u128,
    },

    #[error("invalid group: {0}")]
    Group(String),

    #[error("malformed certificate: {0}")]
    Certificate(String),

    #[error("inconsistent bounds for {quantity}: {existing} (from {existing_source}) vs {incoming} (from {incoming_source})")]
    Inconsistent {
        quantity: String,
        existing: String,
        existing_source: String,
        incoming: String,
        incoming_source: String,
    },

    #[error("unknown quantity: {0}")]
    UnknownQuantity(String),

    #[error("unknown experiment '{name}'{}", suggest(.suggestions))]
    UnknownExperiment {
        name: String,
        suggestions: Vec<String>,
    },

    #[error("seed facts do not provide {0}")]
    MissingSeed(String),

    #[error("propagation did not reach a fixpoint within {0} rounds")]
    IterationCap(usize),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn suggest(names: &[String]) -> String {
    if names.is_empty() {
        String::new()
    } else {
        format!("; did you mean: {}", names.join(", "))
    }
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    /// Short stable code used as the prefix of one-line error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "E_PARSE",
            Error::MissingBinding(_) => "E_BINDING",
            Error::InvalidArgument(_) => "E_ARG",
            Error::Resource { .. } => "E_BUDGET",
            Error::Group(_) => "E_GROUP",
            Error::Certificate(_) => "E_CERT",
            Error::Inconsistent { .. } => "E_INCONSISTENT",
            Error::UnknownQuantity(_) => "E_QUANTITY",
            Error::UnknownExperiment { .. } => "E_EXPERIMENT",
            Error::MissingSeed(_) => "E_SEED",
            Error::IterationCap(_) => "E_ITERATION_CAP",
            Error::Io { .. } => "E_IO",
        }
    }
}
