use crate::scalar::Backend;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("backend mismatch: {0:?} vs {1:?}")]
    BackendMismatch(Backend, Backend),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("not an orthonormal basis: {0}")]
    NotOrthonormal(String),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("not a partial equivalence relation (symmetry/transitivity fails)")]
    NotPer,
    #[error("lattice closure exceeded element bound {0}")]
    ClosureBound(usize),
    #[error("kernel is not copyable along the given structure")]
    NotCopyable,
    #[error("classical structure carries no basis provenance")]
    MissingProvenance,
    #[error("no rational orthonormal basis available: {0}")]
    NoRationalBasis(String),
    #[error("no involution satisfies the required equation")]
    HStarViolated,
    #[error("vector is not a unit vector")]
    NonUnit,
    #[error("model mismatch: operands live in different models")]
    ModelMismatch,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("singular matrix")]
    Singular,
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
