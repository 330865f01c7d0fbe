use core::fmt;

/// Errors surfaced by the numerical kernel and the model layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An operation received an empty input where at least one element is required.
    EmptyInput(&'static str),
    /// A non-finite (NaN or infinite) value was found where finite data is required.
    NonFinite(&'static str),
    /// Matrix dimensions do not match the supplied storage.
    ShapeMismatch { expected: usize, got: usize },
    /// A vector has the wrong length for the operation.
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    /// A symmetric solve was attempted on a matrix that is not symmetric.
    NotSymmetric,
    /// Factorization failed even after diagonal jitter escalation.
    FactorizationFailed,
    /// The observation buffer is too short for the requested delay depth or horizon.
    TrajectoryTooShort { needed: usize, got: usize },
    /// The delayed-observable family is degenerate where a well-posed basis is required.
    DegenerateBasis,
    /// A state does not belong to the state space of the given system.
    StateMismatch(&'static str),
    /// The operation is not defined for this system kind.
    UnsupportedSystem(&'static str),
    /// A parameter is outside its admissible range.
    InvalidParameter(&'static str),
    /// The supplied index map is not a bijection.
    NotABijection,
    /// The shift amount must be coprime to the atom count for an ergodic shift.
    NotCoprime { shift: usize, modulus: usize },
    /// The probe vector does not satisfy the nonvanishing-spectrum requirement.
    InvalidProbe(&'static str),
    /// Two spectral atoms coincide (or nearly so) where distinctness is required.
    CoincidentAtoms,
    /// More spectral atoms than the interpolation construction supports.
    TooManyAtoms { count: usize, max: usize },
    /// A density sample is negative.
    NegativeSample { index: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyInput(what) => write!(f, "empty input: {what}"),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::ShapeMismatch { expected, got } => {
                write!(f, "shape mismatch: expected {expected} entries, got {got}")
            }
            Error::LengthMismatch {
                what,
                expected,
                got,
            } => write!(f, "{what}: expected length {expected}, got {got}"),
            Error::NotSymmetric => write!(f, "matrix is not symmetric"),
            Error::FactorizationFailed => {
                write!(f, "factorization failed after jitter escalation")
            }
            Error::TrajectoryTooShort { needed, got } => {
                write!(f, "trajectory too short: need at least {needed}, got {got}")
            }
            Error::DegenerateBasis => write!(f, "degenerate delayed-observable basis"),
            Error::StateMismatch(what) => write!(f, "state/system mismatch: {what}"),
            Error::UnsupportedSystem(what) => write!(f, "unsupported system: {what}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::NotABijection => write!(f, "index map is not a bijection"),
            Error::NotCoprime { shift, modulus } => {
                write!(f, "shift {shift} is not coprime to {modulus}")
            }
            Error::InvalidProbe(what) => write!(f, "invalid probe vector: {what}"),
            Error::CoincidentAtoms => write!(f, "coincident spectral atoms"),
            Error::TooManyAtoms { count, max } => {
                write!(f, "too many spectral atoms: {count} (max {max})")
            }
            Error::NegativeSample { index } => {
                write!(f, "negative density sample at index {index}")
            }
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
