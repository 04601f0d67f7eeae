//! Exact computation with unimodal piecewise-linear interval maps.
//!
//! The crate builds the increasing homeomorphism `h` conjugating the tent map
//! to a skew tent map (and to more general unimodal piecewise-linear maps),
//! entirely in arbitrary-precision rational arithmetic wherever the objects
//! are rational, and in controlled floating point where they are limits:
//!
//! - [`exactnum`] — rationals and dyadic rationals with binary-digit access;
//! - [`plmap`] — exact algebra of continuous piecewise-linear self-maps of
//!   `[0,1]`: evaluation, composition, iteration, preimages;
//! - [`conjugacy`] — the conjugacy `h` with `h∘f = f_v∘h` on dyadic grids,
//!   its piecewise-linear approximations, explicit branch-slope series, and
//!   the density gap report for general unimodal maps;
//! - [`analysis`] — derivative products of the approximations, derivative
//!   classification at rationals, graph length (exact polyline and log-space
//!   binomial closed form), and log-coordinate monotonicity diagnostics;
//! - [`plconj`] — constructive piecewise-linear conjugacy: extending half
//!   maps, admissible linearity types, and non-conjugate perturbations;
//! - [`semiconj`] — self-semiconjugations of the tent map: the sawtooth
//!   family, exact verification, and census of admissible grid maps;
//! - [`itergroup`] — maps whose iteration semigroup is a finite group, and
//!   the co-ordered-vector conjugacy decision for them.
//!
//! The `examples/` directory contains one runnable example per capability;
//! the `unimodal` binary exposes the same operations as subcommands.

pub mod analysis;
pub mod cli;
pub mod conjugacy;
mod error;
pub mod exactnum;
pub mod format;
pub mod itergroup;
pub mod plconj;
pub mod plmap;
pub mod semiconj;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
