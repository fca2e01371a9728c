//! Irregular Hodge filtrations, Harder-Narasimhan filtrations and spectra at
//! infinity for free `Q[h]`-modules with an action of `h^2 d/dh` that has a
//! pole of order at most two at `h = 0` and a regular singularity at `h = oo`.
//!
//! All arithmetic is exact. The crate is `no_std` and only needs `alloc`.

#![no_std]
extern crate alloc;

pub mod algebra;
pub mod connection;
pub mod hodge;
pub mod rescale;
pub mod vfiltration;
pub mod error;
pub mod formulas;

pub use error::{Error, Result};
