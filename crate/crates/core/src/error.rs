use alloc::string::String;

/// Errors raised by the algebraic core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown generator id {0}")]
    UnknownGenerator(usize),
    #[error("unknown generator name `{0}`")]
    UnknownName(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("generator `{0}` must have weight >= 1")]
    InvalidWeight(String),
    #[error("grading violation in the differential of `{generator}`: {reason}")]
    GradingViolation { generator: String, reason: String },
    #[error("differential is not nilpotent: delta^2({generator}) != 0")]
    NotNilpotent { generator: String },
    #[error("block ({antifield_number}, {weight}): image of the incoming differential is not inside the kernel")]
    ImageNotInKernel { antifield_number: i32, weight: u32 },
    #[error("identity set is empty")]
    EmptyIdentitySet,
    #[error("identity row {row} is not annihilated by the differential at level {level}")]
    StaleIdentity { level: i32, row: usize },
    #[error("identity row {row} mixes generators of different weight or parity")]
    InhomogeneousIdentity { row: usize },
    #[error("invalid model parameters: {0}")]
    InvalidModel(String),
    #[error("weight {weight}: nonzero chain space at antifield number {antifield_number} lies outside the window")]
    WindowTooSmall { weight: u32, antifield_number: i32 },
    #[error("momentum {0:?} is zero or not lightlike")]
    NotLightlike([i64; 4]),
}

pub type Result<T> = core::result::Result<T, Error>;
