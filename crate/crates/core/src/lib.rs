//! Embeddability of composition and analytic Toeplitz operators on the Hardy
//! space H² into C₀-semigroups.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] complex polynomial arithmetic and root finding,
//! * [`symbols`] Blaschke products, singular inner and rational outer
//!   functions, Möbius maps, Taylor extraction and the symbol file schema,
//! * [`blaschke_eq`] preimages of `B(z) = β`, critical values, Frostman
//!   transforms, fixed points and Denjoy–Wolff orbits,
//! * [`hardy`] truncated operator matrices on `span{1, z, …, z^{N−1}}`,
//!   boundary Gram matrices, codimension estimates and Wold decompositions,
//! * [`semigroups`] the explicit semiflows and operator semigroups,
//! * [`decisions`] the verdict engine,
//! * [`verify`] numerical checks over sampled semigroups.
//!
//! Data-parallel loops go through [`exec`], which uses rayon when the
//! `parallel` feature is enabled (the default) and plain iterators otherwise.

pub mod blaschke_eq;
pub mod decisions;
pub mod error;
pub mod exec;
pub mod hardy;
pub mod poly;
pub mod semigroups;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;


#[cfg(test)]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
