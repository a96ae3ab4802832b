use std::io;
use std::path::{Path, PathBuf};

/// Failures of the file-level layer. Every variant maps onto one of the
/// two non-zero process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {msg}", path.display())]
    Format { path: PathBuf, msg: String },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{context}: {source}")]
    Core {
        context: String,
        source: partfuse_core::Error,
    },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Exit status for I/O failures.
pub const EXIT_IO: i32 = 2;
/// Exit status for invalid input, configuration or domain errors.
pub const EXIT_INVALID: i32 = 3;

impl Error {
    pub fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        Error::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    pub fn format(path: impl AsRef<Path>, msg: impl Into<String>) -> Self {
        Error::Format {
            path: path.as_ref().to_path_buf(),
            msg: msg.into(),
        }
    }

    pub fn core(context: impl Into<String>, source: partfuse_core::Error) -> Self {
        Error::Core {
            context: context.into(),
            source,
        }
    }

    /// A missing input is a precondition failure (3); any other I/O error
    /// is 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { source, .. } if source.kind() == io::ErrorKind::NotFound => EXIT_INVALID,
            Error::Io { .. } => EXIT_IO,
            _ => EXIT_INVALID,
        }
    }
}

pub(crate) trait CoreContext<T> {
    fn context(self, what: impl Into<String>) -> Result<T>;
}

impl<T> CoreContext<T> for partfuse_core::Result<T> {
    fn context(self, what: impl Into<String>) -> Result<T> {
        self.map_err(|e| Error::core(what, e))
    }
}

pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
