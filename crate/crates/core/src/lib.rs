//! Exact-rational toolkit for Brill-Noether questions on polarized nodal
//! curves with smooth components.
//!
//! The crate models a curve by its genus-labeled dual graph and works
//! entirely with arbitrary-precision rationals: every stability condition
//! is a strict inequality and a rounding error would flip a verdict.
//!
//! Layout follows the data flow:
//!
//! * [`curve`]: dual graph, arithmetic genus, compact-type classification.
//! * [`ordering`]: ordering of components with the separating subcurves `A_j`.
//! * [`polarization`]: weight vectors, canonical polarization, `Δ_ω(O_B)`.
//! * [`sheaf`]: numerical descriptors of depth-one sheaves and local Ext counts.
//! * [`components`]: the `(⋆)_j` stability intervals, component catalogs,
//!   robustness radii and the small-slope tuple builders.
//! * [`brill_noether`]: Brill-Noether arithmetic, certificates and the scanner.
//! * [`cli`]: the command-line front end.

pub mod brill_noether;
pub mod cli;
pub mod components;
pub mod curve;
mod error;
pub mod ordering;
pub mod polarization;
pub mod rational;
pub mod report;
pub mod sheaf;

pub use error::{Error, ParseError, Result};
pub use rational::Rational;
