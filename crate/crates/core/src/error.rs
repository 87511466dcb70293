use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The Hankel matrix of the requested order is exactly singular; the
    /// data only support a model of order `max_feasible_order`.
    #[error("singular Hankel matrix; largest feasible order is {max_feasible_order}")]
    SingularHankel { max_feasible_order: usize },

    #[error("root polishing stalled for root {root_index}; raise the working precision")]
    NoConvergence { root_index: usize },

    #[error("ill-conditioned solve: about {digits_lost:.1} of {digits} digits lost")]
    IllConditioned { digits_lost: f64, digits: u32 },

    #[error("moment sequence is not normalized (nu_0 != 1)")]
    NotNormalized,

    #[error("exponent b_{index} is zero")]
    ZeroExponent { index: usize },

    #[error("result has a non-negligible imaginary part ({imag:e})")]
    NonRealResult { imag: f64 },

    #[error("singular connected-moment matrix; largest feasible order is {max_feasible_order}")]
    SingularMatrix { max_feasible_order: usize },

    #[error("need {needed} coefficients, have {available}")]
    InsufficientData { needed: usize, available: usize },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid input: {0}")]
    Validation(String),
}

impl Error {
    /// Errors caused by the numbers rather than the input description.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::IllConditioned { .. }
                | Error::NonRealResult { .. }
                | Error::SingularHankel { .. }
                | Error::SingularMatrix { .. }
                | Error::ZeroExponent { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
