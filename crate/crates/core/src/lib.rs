//! Numerics for generally-covariant, GL(n,R)-invariant n-leg (frame) field
//! theories.
//!
//! The crate is `no_std` (it needs `alloc`). It covers small dense tensors,
//! Lie algebra structure constants, frame fields on coordinate charts, the
//! teleparallelism connection and its torsion, Born-Infeld type
//! square-root-determinant Lagrangians, the variational objects built from
//! them (field momentum, stress, field-equation residual), and Levi-Civita
//! curvature by finite differences.
//!
//! Index conventions used throughout:
//!
//! * frame components `e[(i, a)]` are `e^i_A`, so column `A` is leg `A`;
//! * co-frame components `cof[(a, i)]` are `e^A_i`;
//! * frame partials `de[(i, a, j)]` are `∂_j e^i_A`;
//! * connection `Γ^i_{jk} = e^i_A ∂_k e^A_j`, the derivative index last;
//! * torsion `S^i_{jk} = Γ^i_{[jk]}`, and legs close as
//!   `[e_A, e_B] = γ^C_{AB} e_C` with `S^i_{jk} = ½ γ^A_{BC} e^i_A e^B_j e^C_k`;
//! * field momentum `H[(i, j, k)]` is `H_i^{jk}`.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod fd;
pub mod frame;
pub mod lagrangian;
pub mod lie;
pub mod math;
pub mod riemann;
pub mod teleparallel;
pub mod tensor;
pub mod variation;

pub use error::{Error, Result};
pub use frame::{Chart, DeformVariant, DeformationSpec, FrameField, FramePoint, RhoProfile};
pub use lagrangian::{LagrangeTensor, ModelSpec};
pub use lie::{BilinearForm, StructureConstants};
pub use tensor::{Signature, SquareMatrix, Tensor3, Tensor4};
