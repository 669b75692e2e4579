use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The class definition itself is unusable.
    #[error("invalid class definition: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size {requested} exceeds the digraph budget {budget}")]
    BudgetExceeded { requested: u32, budget: u32 },

    #[error("enumeration exceeded the cap of {cap} structures")]
    EnumerationTooLarge { cap: usize },

    /// `c = x y x` with `x` nonempty; run statistics need a border-free `c`.
    #[error("run composition {c} is not xyx-free: x = {x}, y = {y}")]
    NotBorderFree { c: String, x: String, y: String },

    /// A structural hypothesis (recurrent `c`, self-arc, ...) fails.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("malformed run image: {0}")]
    MalformedImage(String),

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("numerical estimate failed: {0}")]
    Numerical(String),
}
