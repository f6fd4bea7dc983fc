use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. Each variant has a stable machine-readable
/// code (see [`Error::code`]) that the command-line front end embeds in its
/// reports.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group order {order} exceeds the configured maximum {max}")]
    GroupTooLarge { order: usize, max: usize },
    #[error("unknown subgroup `{0}`")]
    UnknownSubgroup(String),
    #[error("not a strict chain of subgroups: {0}")]
    NotStrictChain(String),
    #[error("subgroup list is not weakly decreasing at position {0}")]
    NotWeaklyDecreasing(usize),
    #[error("a chain of length zero has empty boundary")]
    ZeroChain,
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("action is not regular: simplex {0:?} is fixed setwise but not pointwise")]
    NotRegular(Vec<usize>),
    #[error("stratum {0} does not occur in the complex")]
    MissingStratum(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("map is not simplicial: facet {0:?} has no simplex as image")]
    NotSimplicial(Vec<usize>),
    #[error("map is not equivariant: f({element}.{vertex}) != {element}.f({vertex})")]
    NotEquivariant { element: usize, vertex: usize },
    #[error("map is not isovariant at simplex {0:?}")]
    NotIsovariant(Vec<usize>),
    #[error("map is not a self-map")]
    NotSelfMap,
    #[error("orbit of simplex {0:?} is not an equivariant simplex")]
    NotEquivariantTriangulation(Vec<usize>),
    #[error("marks vector is not integral in the orbit basis: {0:?}")]
    NonIntegral(Vec<String>),
    #[error("fundamental group must be abelian: {0}")]
    NonAbelianPi(String),
    #[error("inconsistent fundamental group data: {0}")]
    InconsistentLabels(String),
    #[error("invalid endomorphism: {0}")]
    InvalidEndomorphism(String),
    #[error("invalid cube: {0}")]
    InvalidCube(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::GroupTooLarge { .. } => "GroupTooLarge",
            Error::UnknownSubgroup(_) => "UnknownSubgroup",
            Error::NotStrictChain(_) => "NotStrictChain",
            Error::NotWeaklyDecreasing(_) => "NotWeaklyDecreasing",
            Error::ZeroChain => "ZeroChain",
            Error::InvalidComplex(_) => "InvalidComplex",
            Error::NotRegular(_) => "NotRegular",
            Error::MissingStratum(_) => "MissingStratum",
            Error::InvalidMap(_) => "InvalidMap",
            Error::NotSimplicial(_) => "NotSimplicial",
            Error::NotEquivariant { .. } => "NotEquivariant",
            Error::NotIsovariant(_) => "NotIsovariant",
            Error::NotSelfMap => "NotSelfMap",
            Error::NotEquivariantTriangulation(_) => "NotEquivariantTriangulation",
            Error::NonIntegral(_) => "NonIntegral",
            Error::NonAbelianPi(_) => "NonAbelianPi",
            Error::InconsistentLabels(_) => "InconsistentLabels",
            Error::InvalidEndomorphism(_) => "InvalidEndomorphism",
            Error::InvalidCube(_) => "InvalidCube",
            Error::Parse(_) => "Parse",
        }
    }

    /// True for errors caused by malformed or structurally invalid input
    /// rather than a mathematical condition failing.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidGroup(_)
                | Error::GroupTooLarge { .. }
                | Error::UnknownSubgroup(_)
                | Error::InvalidComplex(_)
                | Error::InvalidMap(_)
                | Error::InvalidCube(_)
                | Error::Parse(_)
        )
    }
}
