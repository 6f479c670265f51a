//! Exact symbolic construction of the quantum Lie algebras embedded in the
//! quantized enveloping algebras of `gl_n` and `sl_n`.
//!
//! The crate computes, over the field of rational functions in `q^(1/2)`:
//!
//! * the quantum Lie algebra basis (root vectors `X_ij`, Cartan elements
//!   `H_i`, and for `gl_n` the central element `K`),
//! * the complete bracket table with its quantum root system,
//! * the quantum Killing form,
//!
//! by two independent routes: a fast numerical R-matrix contraction and a
//! symbolic Hopf-algebra computation of the adjoint action. All arithmetic
//! is exact; there is no floating point anywhere.

pub mod linalg;
pub mod qlie;
pub mod rmat;
pub mod scalar;
pub mod uq;

pub use linalg::{LinalgError, Matrix, Tensor4};
pub use qlie::{
    AlgebraKind, KillingData, Label, QLieBasis, RootData, StructureConstants, VerifyReport,
};
pub use rmat::{ProjectorReport, RMatrix, RPair};
pub use scalar::{LaurentPoly, Scalar, ScalarError};
pub use uq::{AlgebraElement, Letter, Rep, TensorElement, UqError, Word};
