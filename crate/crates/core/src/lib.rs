//! Secure-link analysis for a single rotatable antenna.
//!
//! A base station steers one antenna's boresight along the line through an
//! eavesdropper's and a legitimate user's positions, trading user gain
//! against eavesdropper gain. This crate computes the resulting average
//! secrecy capacity under Rician fading (Monte Carlo and deterministic
//! quadrature), finds the optimal adjustment factor by golden-section search,
//! derives the closed-form near-optimal boresight from the line-of-sight
//! geometry, and evaluates the secrecy outage probability both in closed form
//! (high SNR) and by simulation.

pub mod avg_secrecy;
pub mod channel;
pub mod config;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod los_solver;
pub mod outage;
pub mod specfun;

pub use avg_secrecy::{avg_cs_mc, avg_cs_quad, optimize_alpha, CapacityEstimate, OptResult};
pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use geometry::{alpha_max, End, Scenario, Vec3};
pub use los_solver::{cs_los, solve_near_optimal, LosSolution};
pub use outage::{sop_mc, sop_theory, SopPoint};
pub use specfun::QuadratureSpec;
