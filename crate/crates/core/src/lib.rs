//! Exact arithmetic for split metabelian groups `G = A ⋊ Q` where `A` is a
//! localized polynomial module
//! `ℤ[x, x⁻¹, f₁⁻¹, …, fₙ⁻¹, 1/k]` and `Q` acts by multiplication with the
//! units `k, x, f₁, …, fₙ`.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactalg`]: integer polynomials, the localized ring and setup validation;
//! * [`valuations`]: the `fᵢ`-adic, degree and `p`-adic valuations;
//! * [`charspace`]: characters of `Q`, exact halfspace tests and tameness;
//! * [`sigma`]: centralizer witnesses for classes in `Σ_A`;
//! * [`geometry`]: character trees, the lattice `[[W]]`, CRT normalization
//!   and vertex stabilizers;
//! * [`cohomology`]: closed-form second cohomology computations.

pub mod charspace;
pub mod cohomology;
pub mod error;
pub mod exactalg;
pub mod geometry;
pub mod sigma;
pub mod valuations;

pub use error::{Error, Result};
