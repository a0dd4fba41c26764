use core::fmt;

/// Failure modes shared by every module of the crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Adaptive quadrature could not reach its tolerance at the depth cap.
    DepthExhausted {
        lo: f64,
        hi: f64,
    },
    /// An integrand or evaluator returned NaN or an infinity.
    NonFiniteSample {
        x: f64,
    },
    /// A monotone root search found no bracket between its floor and ceiling.
    NoBracket,
    InvalidInterval {
        lo: f64,
        hi: f64,
    },
    InvalidParameter(&'static str),
    /// A derived weight left the floating point range at a sample point.
    Overflow {
        x: f64,
    },
    UnsupportedOrder {
        order: usize,
    },
    /// An operation needs a compact support hint the function does not carry.
    MissingSupport,
    /// Sequence family members disagree on exponents, weights or length.
    MismatchedSequences,
    EmptyFamily,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DepthExhausted { lo, hi } => {
                write!(f, "quadrature depth exhausted on [{lo}, {hi}]")
            }
            Error::NonFiniteSample { x } => write!(f, "non-finite sample at x = {x}"),
            Error::NoBracket => f.write_str("no bracket for monotone root"),
            Error::InvalidInterval { lo, hi } => write!(f, "invalid interval [{lo}, {hi}]"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::Overflow { x } => write!(f, "value overflows at x = {x}"),
            Error::UnsupportedOrder { order } => {
                write!(f, "derivative of order {order} needs exact derivative data")
            }
            Error::MissingSupport => f.write_str("function has no compact support hint"),
            Error::MismatchedSequences => {
                f.write_str("sequences do not share exponents, weights and length")
            }
            Error::EmptyFamily => f.write_str("function family is empty"),
        }
    }
}

impl core::error::Error for Error {}
