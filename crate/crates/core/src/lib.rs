//! Inviscid locomotion hydrodynamics.
//!
//! Slender-body reactive loads on undulating plates and fish planforms, the
//! cross-flow singular-integral toolbox, a nonlinear time-marching vortex-sheet
//! solver for flexible 2D wings with a Wagner linear oracle, and the
//! metabolic scaling analysis for swimming energetics.

pub mod energetics;
pub mod error;
pub mod kinematics;
pub mod nonlinear_wing;
pub mod quadrature;
pub mod singular_kernels;
pub mod slender_body;

pub use error::{Error, Result};
