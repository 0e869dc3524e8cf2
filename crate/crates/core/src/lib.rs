//! Quaternion and spacetime-algebra Fourier transforms on sampled fields, with
//! numerical checks of directional uncertainty principles.
//!
//! - [`hypercomplex`]: quaternions, Cl(3,1) multivectors, the ± split.
//! - [`grid`]: centered grids, sampled fields, generators and file formats.
//! - [`qft`]: discrete double-sided and right-sided quaternion Fourier transforms.
//! - [`sft`]: the spacetime Fourier transform and its wave-packet split.
//! - [`uncertainty`]: directional moments, bounds and verdicts.
//! - [`cli`]: the `hyperfourier` command-line front end.

pub mod calculus;
pub mod cli;
pub mod error;
mod fft;
pub mod grid;
pub mod hypercomplex;
pub mod identities;
pub mod qft;
pub mod sft;
pub mod uncertainty;

pub use error::{Error, Result};
