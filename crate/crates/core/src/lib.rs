//! Polarized paraxial beams as Hermite-Gaussian superpositions.
//!
//! The crate computes linear and angular momentum densities of a beam,
//! integrates them over transverse planes, and cross-checks the result against
//! closed-form quadratic forms in the mode coefficients. The [`tilt`] module
//! observes a circularly polarized Gaussian from a frame whose axis is not
//! parallel to the beam and recovers the helicity-dependent barycenter shift.
//!
//! Units: the wavenumber is 1, so lengths are in reduced wavelengths and
//! momenta are in units of `hbar k`.

pub mod app;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod hermite;
pub mod modes;
pub mod modespace;
pub mod par;
pub mod polarization;
pub mod quadrature;
pub mod tilt;
pub mod verify;

pub type Point3 = nalgebra::Point3<f64>;

pub use error::{BeamError, Result};
pub use fields::{
    angular_momentum_density, density_sample, momentum_density, vector_fields, DensitySample, VectorFieldSample,
};
pub use geometry::BeamGeometry;
pub use hermite::hermite;
pub use modes::{
    mode_amplitude, mode_transverse_gradient, superposition_amplitude_and_gradient, EnvelopeSample, ModeSuperposition,
};
pub use modespace::{
    angular_momentum_modespace, momentum_modespace, three_mode_summary, LadderCoefficients, ThreeModeSummary,
};
pub use par::Execution;
pub use polarization::{helicity, PolarizationState};
pub use quadrature::{
    centroid, integrate_plane, momenta_numeric, parts_relations_residuals, BeamMoments, PlaneWindow, QuadratureSpec,
};
pub use tilt::{
    rotated_momentum_density, rotation_matrix, so3_generators, tilted_centroid_closed, tilted_centroid_numeric,
    tilted_momenta_closed, tilted_momenta_numeric, RotationMatrix, TiltFrame, TiltedMomenta,
};
