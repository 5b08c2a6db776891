//! Command-line surface: TOML scenario/system ingestion, built-in scenarios,
//! and the four subcommands (`solve`, `generators`, `integrate`, `check`).
//!
//! Exit-code contract: 0 pass, 1 audit fail, 2 input error, 3 rank or
//! degeneracy error, 4 integration divergence.

pub mod builtins;
pub mod commands;
pub mod config;

use thiserror::Error;

use crate::error::Error as CoreError;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_AUDIT_FAIL: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_RANK_ERROR: i32 = 3;
pub const EXIT_DIVERGED: i32 = 4;

/// Errors surfaced by the CLI, each mapped to an exit code. Configuration
/// diagnostics name the offending field or CSV row.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                CoreError::RankDeficient { .. }
                | CoreError::RankDeficientAt { .. }
                | CoreError::RegionTooLarge { .. },
            ) => EXIT_RANK_ERROR,
            CliError::Core(CoreError::Diverged { .. }) => EXIT_DIVERGED,
            _ => EXIT_INPUT_ERROR,
        }
    }
}
