//! Driven-dissipative central spin model: one electron spin coupled
//! uniformly to J nuclear spins.
//!
//! Two independent solver stacks are provided:
//!
//! * [`exact`] — the full finite-J Liouvillian (steady states, low-lying
//!   spectrum, bistable pairs) via sparse LU and shift-invert Arnoldi;
//! * [`semiclassical`] + [`gaussian`] — the thermodynamic-limit expansion
//!   around self-consistent Holstein-Primakoff displacements, with Gaussian
//!   fluctuations, drift stability, covariance and squeezing witness.
//!
//! [`analytic`] holds closed-form reference results, [`shells`] the
//! inhomogeneous multi-shell extension and [`scan`] the phase-diagram driver
//! used by the `phasescan` binary.

pub mod analytic;
pub mod error;
pub mod exact;
pub mod gaussian;
pub mod operators;
pub mod params;
pub mod scan;
pub mod semiclassical;
pub mod shells;
pub mod sparse;

pub use error::{Error, Result};
pub use params::{beta_to_polarization, derived_scales, DerivedScales, ModelParams, SpinExpectations};
