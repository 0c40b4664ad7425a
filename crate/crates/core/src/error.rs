use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("residue {residue} is not below modulus {modulus}")]
    ResidueOutOfRange { modulus: u64, residue: u64 },
    #[error("closed form is undefined for residue 0 (pole of the Gamma function)")]
    ZeroResidue,
    #[error("clover index must be at least 1")]
    ZeroCloverIndex,
    #[error("radius {0} lies outside [0, 1]")]
    RadiusOutOfRange(f64),
    #[error("arc length {x} lies outside [0, {max}]")]
    ArcLengthOutOfRange { x: f64, max: f64 },
    #[error("{what} requires an index of at least 1")]
    ZeroIndex { what: &'static str },
    #[error("interval [{lower}, {upper}] is empty or not finite")]
    InvalidInterval { lower: f64, upper: f64 },
    #[error("absolute tolerance {0} lies outside [1e-15, 1e-3]")]
    InvalidTolerance(f64),
    #[error("max_levels {0} exceeds the supported {1}")]
    TooManyLevels(usize, usize),
    #[error("quadrature did not converge after {levels} levels (last difference {difference:e})")]
    QuadratureNotConverged { levels: usize, difference: f64 },
    #[error("integrand returned a non-finite value at {at}")]
    NonFiniteIntegrand { at: f64 },
    #[error("root bracket [{lower}, {upper}] does not enclose a sign change")]
    BracketFailure { lower: f64, upper: f64 },
    #[error("root finder stalled with residual {residual:e}")]
    RootNotConverged { residual: f64 },
    #[error("moment index {0} exceeds the quadrature limit of 200")]
    MomentIndexTooLarge(u64),
    #[error("requested tolerance {0:e} is below the supported 1e-10")]
    TargetTooSmall(f64),
    #[error("term budget of {0} exhausted before reaching the requested tolerance")]
    TermBudgetExhausted(u64),
    #[error("checkpoints must be strictly ascending")]
    UnsortedCheckpoints,
    #[error("at least {min} samples are required, got {got}")]
    TooFewSamples { min: usize, got: usize },
}
