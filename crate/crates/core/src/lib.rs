//! Classical structures, copyable kernels and complementarity in two
//! dagger monoidal kernel categories at desk scale: finite-dimensional
//! Hilbert spaces (exact Gaussian-rational or approximate complex
//! matrices) and finite sets with relations.
//!
//! The crate builds classical structures from orthonormal bases and
//! abelian groupoids, decides copyability of endomorphisms and kernels,
//! materializes the Boolean lattices of copyable kernels inside the
//! orthomodular lattice of kernel subobjects, tests partial and mutual
//! complementarity, and realizes the bijection between Boolean
//! projection lattices and commutative matrix *-subalgebras.
//!
//! Brute-force enumerations (subsets, partial equivalence relations,
//! candidate certification) run on rayon when the default `parallel`
//! feature is enabled and fall back to sequential loops without it.

pub mod complementarity;
pub mod copyability;
pub mod error;
pub mod fdhilb;
pub mod finrel;
pub mod lattice;
pub mod matrix;
pub mod scalar;
pub mod suite;
pub mod vnalg;

pub(crate) mod par;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::{Backend, Scalar, Tolerance, DEFAULT_EPS};
