//! Numerical tolerances used across the crate.
//!
//! Every report carries the [`Tolerances`] record it was produced with, so a
//! run can be re-checked against the exact thresholds it used.

use serde::{Deserialize, Serialize};

/// Absolute tolerance for membership, vertex ties and face extraction.
pub const GEOMETRY: f64 = 1e-9;
/// A ray counts as orthogonal to a direction below this inner product.
pub const RAY_TIE: f64 = 1e-12;
/// Activity tolerance on max-affine piece values.
pub const ACTIVITY: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Face estimates against exact faces (bounded faces, and ray angle for conic faces).
    pub face: f64,
    /// Support function estimates against exact support values.
    pub support: f64,
    /// Boundary estimates against the face-union oracle.
    pub boundary: f64,
    /// Per-direction support gap in decompositions.
    pub decomposition: f64,
    /// Membership residual of the constructive sequence.
    pub sequence_membership: f64,
    /// Final errors of the constructive sequence.
    pub sequence_final: f64,
    /// Yosida value against the exact minimal-norm element.
    pub yosida: f64,
    /// Containment checks (`Ay` inside the bound set).
    pub containment: f64,
    /// Premise checks on minimal-norm selections.
    pub premise: f64,
    /// Value agreement in unique-determination checks.
    pub agreement: f64,
    /// Cluster agglomeration radius.
    pub cluster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            face: 1e-6,
            support: 1e-6,
            boundary: 1e-5,
            decomposition: 1e-6,
            sequence_membership: 1e-8,
            sequence_final: 1e-5,
            yosida: 1e-5,
            containment: 1e-8,
            premise: 1e-9,
            agreement: 1e-8,
            cluster: 1e-7,
        }
    }
}
