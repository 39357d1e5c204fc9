use std::fmt;

/// Maps to the process exit status: 1 for data problems, 2 for usage.
#[derive(Debug)]
pub enum CliError {
    Data(String),
    Usage(String),
}

impl CliError {
    pub fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Data(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<posekit::PoseError> for CliError {
    fn from(e: posekit::PoseError) -> Self {
        CliError::Data(e.to_string())
    }
}
