//! Computational kernel for the null tangent bundle of a time-oriented
//! Lorentzian 4-manifold.
//!
//! The crate is organised bottom-up:
//!
//!   * [`minkowski`]: frame-level Minkowski algebra, causal classes, restricted
//!     Lorentz transformations.
//!   * [`spacetime`]: charts, metric fields, time orientation, vierbeins and
//!     Weyl rescaling.
//!   * [`cone`]: the split null cone, its two charts, the homothety and the
//!     bundle transition functions.
//!   * [`bundle`]: bundle points, local and global trivialisations, the named
//!     spacetimes (`minkowski`, `schwarzschild`) and restriction to sampled
//!     submanifolds.
//!   * [`heap`]: the partial semiheap on nowhere-vanishing null sections, the
//!     total ternary algebra on vector fields and the heap on invertible
//!     scalar fields.
//!   * [`distribution`]: the canonical one-form, its rank-6 kernel, null-curve
//!     prolongation and explicit null differential equations.
//!   * [`laws`]: seeded randomized law suites producing [`laws::LawReport`]s.
//!   * [`csvio`]: CSV formats for curve samples and prolonged curves.

#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bundle;
pub mod cone;
pub mod csvio;
pub mod distribution;
mod error;
pub mod heap;
pub mod laws;
pub mod minkowski;
pub mod spacetime;
pub mod tolerance;

pub use bundle::{BundlePoint, GlobalFrame, SubmanifoldSampling};
pub use cone::ConePoint;
pub use error::{Error, Result};
pub use heap::{InvertibleScalarField, NullSection, SamplingSet, VectorField};
pub use minkowski::{CausalClass, FrameVector, LorentzTransform, Orientation};
pub use spacetime::{Chart, Event, Frame, MetricField, ScalarField, Spacetime, TimeOrientation, VierbeinField};
