use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("expression is not a polynomial: {0}")]
    NonPolynomial(String),
    #[error("{0} does not vanish at the origin")]
    NotThroughOrigin(String),
    #[error("{0} is not reduced at the origin")]
    NonReduced(String),
    #[error("the germs have a common component through the origin")]
    CommonComponent,
    #[error("no proper coordinate change found after {attempts} attempts")]
    ChangeOfCoordinatesFailed { attempts: usize },
    #[error("oracle disagreement: {0}")]
    OracleMismatch(String),
    #[error("a residue field of degree {needed} exceeds the bound {bound}")]
    ExtensionDegreeExceeded { needed: usize, bound: usize },
    #[error("bifurcation candidate {0} could not be certified")]
    CandidateUncertified(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(#[from] dicrit_core::Error),
}
