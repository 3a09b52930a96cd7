//! Graph C*-algebras at the critical inverse temperature.
//!
//! - [`graph`]: finite directed graphs, vertex matrices and the standing hypotheses.
//! - [`spectral`]: spectral radius, Perron eigenvectors and the KMS existence verdict.
//! - [`algebra`]: the word calculus on `Sp{S_mu S_nu^* : t(mu) = t(nu)}`.
//! - [`functional`]: the critical KMS state, its inner product and the trace `tau`.
//! - [`filtration`]: the AF levels `F_k`, complements `W_k` and the shifted
//!   spaces of the Cuntz algebra filtration.
//! - [`report`]: the command layer behind the `graphkms` binary.

pub mod algebra;
pub mod error;
pub mod expr;
pub mod filtration;
pub mod functional;
pub mod graph;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use algebra::{Element, Path, Word};
pub use error::{AlgebraError, ExprError, GraphError, KmsError, SpectralError};
pub use functional::{KmsState, TauFunctional};
pub use graph::{Graph, VertexMatrix};
pub use scalar::{Rational, Scalar};
