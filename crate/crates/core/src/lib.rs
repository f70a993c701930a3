//! Arithmetic, geometry and series for Bianchi orbifolds `H³/SL(2, O_D)`.
//!
//! The crate is `no_std` (it needs `alloc`). The `parallel` feature enables
//! rayon for the block-ordered reductions; results are bitwise identical with
//! and without it.
#![cfg_attr(not(feature = "parallel"), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod bianchi_cosets;
pub mod eisenstein;
pub mod equidist;
pub mod error;
pub mod harmonics;
pub mod hyperbolic3;
pub mod number_field;
pub mod quadrature;
pub mod reduce;
pub mod rotations;
pub mod zeta;

mod real;

pub use error::{Error, Result};
pub use num_complex::Complex64;
