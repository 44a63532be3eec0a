//! Error type shared by every subsystem.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // ---- ball arithmetic ----
    #[error("divisor ball contains zero")]
    DivisorContainsZero,
    #[error("log argument ball touches the branch cut (or contains zero)")]
    LogOnBranchCut,
    #[error("requested precision {0} bits exceeds the platform limit")]
    PrecisionOverflow(u64),
    #[error("target accuracy unreachable at the precision cap")]
    AccuracyUnreachable {
        /// Best enclosure obtained before giving up, for diagnostics.
        best: Option<Box<crate::ball::BallComplex>>,
    },

    // ---- eta/zeta evaluation ----
    #[error("argument ball too close to the pole at 1")]
    PoleProximity,
    #[error("argument outside the method's domain: {0}")]
    DomainError(String),
    #[error("the factor 1 - 2^(1-a) vanishes on the argument ball")]
    FactorVanishes,
    #[error("cache entry corrupt (checksum mismatch); quarantined")]
    CacheCorrupt,
    #[error("derivative order {0} exceeds the engine cap of {1}")]
    OrderCapExceeded(usize, usize),

    // ---- point sets ----
    #[error("degenerate point set: {0}")]
    DegenerateSet(String),

    // ---- determinant kit ----
    #[error("rule set leaves cell ({0},{1}) uncovered")]
    UncoveredCell(usize, usize),
    #[error("derivative of order {0} not available (have up to {1})")]
    MissingDerivative(usize, usize),
    #[error("pivot ball contains zero; determinant not certifiable at this precision")]
    SingularUncertain,
    #[error("leading coefficient ball contains zero; polynomial degree uncertain")]
    DegreeUncertain,
    #[error("root iteration did not converge")]
    NonConvergence,
    #[error("cofactor ball contains zero")]
    CofactorVanishes,
    #[error("q and r must be coprime")]
    NotCoprime,

    // ---- experiments ----
    #[error("linear system not certifiably solvable at this precision")]
    SingularSystem,
    #[error("denominator determinant ball contains zero")]
    DenominatorVanishes,
    #[error("coefficient ball contains zero")]
    CoefficientVanishes,

    // ---- front end / plumbing ----
    #[error("usage error: {0}")]
    UsageError(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors that a higher working precision can plausibly fix. The adaptive
    /// driver retries on these instead of aborting.
    pub fn is_precision_retryable(&self) -> bool {
        matches!(
            self,
            Error::SingularUncertain
                | Error::DegreeUncertain
                | Error::DivisorContainsZero
                | Error::CofactorVanishes
                | Error::DenominatorVanishes
                | Error::CoefficientVanishes
                | Error::SingularSystem
                | Error::FactorVanishes
                | Error::LogOnBranchCut
        )
    }
}
