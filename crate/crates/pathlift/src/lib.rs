//! Certified factorization of complex polynomials into linear factors.
//!
//! Given a monic polynomial and a tolerance `eps`, [`solve`] returns one
//! approximation per root (with multiplicity) such that the expanded
//! product of `(z - root_j)` is within `eps` of the input in the max
//! coefficient norm — and the returned residual is recomputed from the
//! output, never assumed.
//!
//! The method works on a branched cover of the plane: after rescaling the
//! input so all roots lie in a half-unit disk, it probes a circle that
//! encloses every root, lifts rays of the four axis directions down toward
//! a small landing height `tau` by damped Newton steps (finding roots of
//! the perturbed polynomial `f - tau i^j`, which has only simple roots for
//! a good quadrant), certifies the landed points with Smale's alpha test,
//! polishes them with a fixed Newton schedule, removes duplicates with a
//! Koebe-distortion criterion, and deflates the found factor by
//! interpolation at roots of unity. Every stage is guaranteed to capture at
//! least half the remaining roots, so the stage count is logarithmic in the
//! degree.
//!
//! # Example
//!
//! ```
//! use pathlift::{solve, Poly64};
//!
//! // z^2 - 1: roots +-1.
//! let phi = Poly64::from_real(&[-1.0, 0.0, 1.0]);
//! let out = solve(&phi, 1e-6).unwrap();
//! assert_eq!(out.roots.len(), 2);
//! assert!(out.residual < 1e-6);
//! ```
//!
//! The scalar type is generic over [`Scalar`] (implemented for `f64` and
//! `f32`); the [`Poly64`]/[`C64`] aliases cover the common case. An
//! independent simultaneous-iteration reference solver lives in [`oracle`]
//! for cross-checking results; it shares no iteration logic with the
//! pipeline.

pub mod certify;
pub mod error;
pub mod lifter;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use lifter::{
    choose_initial_points, half_roots_and_deflate, iterate_plm, iterate_plm_traced, plm_step_count,
    polish, polish_step_count, select_approx_zeros, solve, solve_with_config, unit_ray, weed,
    Factorization, PlmOutcome, PlmTrace, SolveConfig, StageResult, StageStats, WedgeBatch,
};
pub use poly::{
    expand_factors, factor_to_root_precision, normalize_to_pd1, rescale_main, residual_norm,
    NormalizedInput, Polynomial,
};
pub use scalar::Scalar;

/// Complex number over the default 64-bit scalar.
pub type C64 = num_complex::Complex<f64>;
/// Polynomial over the default 64-bit scalar.
pub type Poly64 = poly::Polynomial<f64>;
/// Factorization over the default 64-bit scalar.
pub type Factorization64 = lifter::Factorization<f64>;
/// Configuration over the default 64-bit scalar.
pub type SolveConfig64 = lifter::SolveConfig<f64>;
