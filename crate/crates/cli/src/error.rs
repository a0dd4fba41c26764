use thiserror::Error;

use crate::expr::ExprError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("numerics: {0}")]
    Numeric(#[from] varnorm_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Every error is an input problem: bad flags, bad configuration, or a
    /// scenario the numerics cannot resolve.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
