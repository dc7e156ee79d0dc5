//! padelab: a laboratory for rational approximation of power series.
//!
//! The crate computes classical and simultaneous rational interpolants to
//! analytic functions given only their Taylor coefficients, then runs the
//! inverse direction: reading poles, singularity radii, and convergence
//! rates back off the computed tables. See the `examples/` directory for
//! end-to-end walkthroughs of each capability.

pub mod approximants;
pub mod config;
pub mod diagnostics;
pub mod linalg;
pub mod poly;
pub mod roots;
pub mod runner;
pub mod scalar;
pub mod series;
pub mod tolerances;
