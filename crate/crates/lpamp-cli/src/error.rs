use lpamp::amp::AmpError;
use lpamp::instance::InstanceError;
use lpamp::minimax::MinimaxError;
use lpamp::montecarlo::McError;
use lpamp::prox::ProxError;
use lpamp::se::SeError;
use thiserror::Error;

/// CLI failure, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(String),
    /// The reader of stdout went away; not reported.
    #[error("broken pipe")]
    BrokenPipe,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Numerical(_) => 3,
            Self::Io(_) => 4,
            Self::BrokenPipe => 0,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Self::BrokenPipe;
        }
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if let csv::ErrorKind::Io(io) = e.kind() {
            if io.kind() == std::io::ErrorKind::BrokenPipe {
                return Self::BrokenPipe;
            }
            Self::Io(e.to_string())
        } else {
            Self::Config(e.to_string())
        }
    }
}

impl From<ProxError> for CliError {
    fn from(e: ProxError) -> Self {
        match e {
            ProxError::NoConvergence(_) => Self::Numerical(e.to_string()),
            _ => Self::Config(e.to_string()),
        }
    }
}

impl From<AmpError> for CliError {
    fn from(e: AmpError) -> Self {
        match e {
            AmpError::Diverged { .. } => Self::Numerical(e.to_string()),
            AmpError::Prox(p) => p.into(),
            _ => Self::Config(e.to_string()),
        }
    }
}

impl From<SeError> for CliError {
    fn from(e: SeError) -> Self {
        match e {
            SeError::Prox(p) => p.into(),
            _ => Self::Config(e.to_string()),
        }
    }
}

impl From<MinimaxError> for CliError {
    fn from(e: MinimaxError) -> Self {
        match e {
            MinimaxError::Prox(p) => p.into(),
            _ => Self::Config(e.to_string()),
        }
    }
}

impl From<InstanceError> for CliError {
    fn from(e: InstanceError) -> Self {
        match e {
            InstanceError::Amp(a) => a.into(),
            _ => Self::Config(e.to_string()),
        }
    }
}

impl From<McError> for CliError {
    fn from(e: McError) -> Self {
        match e {
            McError::Instance(i) => i.into(),
            McError::Amp(a) => a.into(),
            McError::Se(s) => s.into(),
            McError::Config(m) => Self::Config(m),
        }
    }
}
