use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    ConfigParse(String),
    #[error("{command} failed{}{}: {source}", fmt_time(.time), fmt_level(.level))]
    Model {
        command: &'static str,
        time: Option<f64>,
        level: Option<usize>,
        #[source]
        source: opendiv_core::Error,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn fmt_time(t: &Option<f64>) -> String {
    t.map(|t| format!(" at t = {t}")).unwrap_or_default()
}

fn fmt_level(l: &Option<usize>) -> String {
    l.map(|l| format!(", level {l}")).unwrap_or_default()
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigParse(_) => 2,
            CliError::Model { .. } => 3,
            CliError::Io { .. } => 1,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        CliError::ConfigParse(msg.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
