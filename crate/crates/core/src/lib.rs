//! Maximal monotone operators on finite-dimensional lp spaces.
//!
//! The crate realizes operators whose values are polyhedral (subdifferentials
//! of max-affine functions, normal-cone maps, affine monotone maps, the
//! duality map and the normal cone of the unit ball), computes their
//! resolvents and Yosida approximations, and estimates Painleve-Kuratowski
//! upper limits of their values along shrinking probes. Each estimate is
//! compared against an exact polyhedral oracle in a [`VerificationReport`].

pub mod convex;
pub mod error;
pub mod experiment;
pub mod json;
pub mod limits;
pub mod linalg;
pub mod numfmt;
pub mod operators;
pub mod resolvent;
pub mod sampling;
pub mod space;
pub mod tol;

pub use convex::{set_distance, Halfspace, PolyhedralSet, SupportValue};
pub use error::{Error, Result};
pub use limits::{LimitProbe, Status, VerificationReport};
pub use space::{Covector, SpaceSpec, Vector};
pub use tol::Tolerances;
