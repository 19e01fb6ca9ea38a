//! Oscillator Ising machine toolkit.
//!
//! An oscillator Ising machine (OIM) is a network of coupled phase
//! oscillators
//!
//! ```text
//!   dtheta_i/dt = sum_j J_ij sin(theta_j - theta_i) - mu_i sin(2 theta_i)
//! ```
//!
//! whose phase-locked states at `theta_i in {0, pi}` encode spin
//! configurations of the Ising Hamiltonian
//! `H(sigma) = -(1/2) sum_ij J_ij sigma_i sigma_j`. This crate provides:
//!
//! * [`ising`] — the model, signed adjacency/Laplacian/Hessian construction,
//!   frustration and structural-balance analysis;
//! * [`dynamics`] — the gradient flow, its energy landscape, and a
//!   multi-start solver;
//! * [`spectral`] — symmetric eigensolvers and stability classification;
//! * [`oracle`] — exhaustive ground truth for small instances, including
//!   the regularization threshold `mu*` below which suboptimal equilibria
//!   of frustration-free networks are unstable;
//! * [`ensemble`] — random signed-graph ensembles, closed-form moment
//!   predictions, and conditional spectral statistics;
//! * [`gen`] — reproducible instance generators;
//! * [`graphio`] — the JSON instance format.

pub mod dynamics;
pub mod error;
pub mod ising;
pub mod matrix;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
