use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("element has finite order")]
    FiniteOrderElement,
    #[error("subgroup has infinite index")]
    InfiniteIndex,
    #[error("character list does not span V")]
    DegenerateList,
    #[error("no generic shift found after {0} attempts")]
    NonGeneric(usize),
    #[error("list does not span a pointed cone")]
    UnpointedCone,
    #[error("group has nontrivial torsion")]
    TorsionPresent,
    #[error("face selector vanishes on an element outside the subspace")]
    FaceVanishes,
    #[error("no element of the list crosses the subspace inside the larger one")]
    EmptyStep,
    #[error("convolution has no separating functional")]
    ConvolutionDiverges,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("function is not in DM(X): {0}")]
    NotInDM(String),
    #[error("exact solve failed: {0}")]
    SolveFailed(String),
    #[error("function is not in F(X): {0}")]
    NotInF(String),
    #[error("extracted component is not in DM(X ∩ r): {0}")]
    ComponentNotInDM(String),
    #[error("list contains an element with zero image in V")]
    ZeroBarElement,
    #[error("cell fit disagrees with partition count: {0}")]
    FitInconsistent(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error payloads.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::FiniteOrderElement => "FiniteOrderElement",
            Error::InfiniteIndex => "InfiniteIndex",
            Error::DegenerateList => "DegenerateList",
            Error::NonGeneric(_) => "NonGeneric",
            Error::UnpointedCone => "UnpointedCone",
            Error::TorsionPresent => "TorsionPresent",
            Error::FaceVanishes => "FaceVanishes",
            Error::EmptyStep => "EmptyStep",
            Error::ConvolutionDiverges => "ConvolutionDiverges",
            Error::WindowTooSmall(_) => "WindowTooSmall",
            Error::NotInDM(_) => "NotInDM",
            Error::SolveFailed(_) => "SolveFailed",
            Error::NotInF(_) => "NotInF",
            Error::ComponentNotInDM(_) => "ComponentNotInDM",
            Error::ZeroBarElement => "ZeroBarElement",
            Error::FitInconsistent(_) => "FitInconsistent",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
