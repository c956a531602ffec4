//! Proper r-harmonic functions on the classical semisimple matrix Lie groups.
//!
//! The crate builds eigenfunctions `φ` of the tension field and the
//! conformality operator (`τ(φ) = λφ`, `κ(φ, φ) = μφ²`), composes them with
//! holomorphic solutions of `μz²f'' + λzf' = 0` and its Poisson cascade, and
//! certifies the results numerically. All derivatives come from exact
//! truncated Taylor arithmetic ([`taylor`]) along curves `p·exp(tX)`, so
//! the only error is floating-point rounding.
//!
//! Module map:
//! - [`taylor`]: jets over `ℂ` with per-variable degree ≤ 2
//! - [`groups`]: group specs, orthonormal algebra bases, sampling, curves
//! - [`calculus`]: τ, κ and τʳ along an orthonormal frame
//! - [`catalog`]: the eigenfunction catalog and its verification
//! - [`factory`]: r-harmonic candidates `f_r ∘ φ`
//! - [`oracle`]: ODE and finite-difference cross-checks
//! - [`campaign`]: seeded campaigns and JSON reports

pub mod calculus;
pub mod campaign;
pub mod catalog;
pub mod error;
pub mod factory;
pub mod groups;
pub mod oracle;
pub mod report;
pub mod seeds;
pub mod taylor;

pub use error::{Error, Result};
