//! Frame calculus for Riemannian almost product manifolds on Lie groups.
//!
//! An instance is a Lie algebra given by structure constants, a metric and a
//! product structure `P`, all with constant components in a left-invariant
//! frame. From it the crate computes the Levi-Civita connection, the tensor
//! `F`, the Lee form, curvature and Weyl tensors, the natural connection `D`
//! of a W₁ manifold, and the effect of a conformal change of the metric.

// index loops mirror the component formulas
#![allow(clippy::needless_range_loop)]

pub mod conformal;
pub mod error;
pub mod example;
pub mod levi_civita;
pub mod lie;
pub mod natural;
pub mod sampling;
pub mod structure;
pub mod tensor;

pub use error::{GeometryError, Result};
pub use lie::LieFrameAlgebra;
pub use structure::{FramePoint, ProductStructure, RpmInstance};
pub use tensor::{DenseTensor, MetricTensor, Variance, DEFAULT_EPSILON};
