use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] otw_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 1 for a broken internal invariant, 2 for bad input, 3 for I/O trouble.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(otw_core::Error::Invariant(_)) => 1,
            CliError::Core(otw_core::Error::Io { .. }) | CliError::Io { .. } | CliError::Csv(_) => {
                3
            }
            CliError::Usage(_) | CliError::Core(_) => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn write_file(path: &std::path::Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
