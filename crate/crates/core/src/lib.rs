//! Least-squares linear prediction of deterministic time series.
//!
//! A depth-`d` filter predicts the next observation as a fixed linear
//! combination of the `d` most recent ones. This crate fits such filters
//! from trajectories or from autocorrelations, rolls them out, exposes the
//! companion-matrix spectrum of the fitted coefficients, and evaluates the
//! diagnostics that relate filter behavior to the spectral structure of the
//! underlying dynamics: forecast error curves, autocorrelation fidelity with
//! its three-branch deviation bound, and a pseudospectral residual check.
//!
//! The [`oracle`] module carries exact finite-state systems (permutations of
//! `N` atoms) on which every quantity is computable to machine precision;
//! they serve as the ground truth for the property tests.
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals
//! go through `libm`, so results are reproducible across platforms.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod diagnostics;
pub mod dynamics;
mod error;
mod math;
pub mod numerics;
pub mod observables;
pub mod oracle;
pub mod rng;

pub mod filter;

pub use error::{Error, Result};
pub use num_complex::Complex64;
