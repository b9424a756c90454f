//! Entropy and noise on the boolean cube.
//!
//! The crate computes the entropy functional of nonnegative functions on
//! `{0,1}^n`, the noise operator of the binary symmetric channel, conditional
//! entropies and the mutual-information functionals built from them, and
//! checks the inequalities that tie them together: Mrs. Gerber's lemma and
//! its strengthenings, the linear program bounding noisy mutual information
//! together with its closed-form symmetric solution, and an exhaustive search
//! for the most informative boolean function in small dimension.
//!
//! Layout:
//!
//! - [`cube`]: [`CubeFunction`], [`NoiseParam`], noise operators, conditional
//!   expectation and entropy.
//! - [`scalar`]: binary entropy, its inverse and Mrs. Gerber's function.
//! - [`spectral`]: Walsh–Fourier transform, Dirichlet form, even/odd parts.
//! - [`info`]: conditional-entropy tables, mutual information, boundary data.
//! - [`symmetric`]: the symmetric solution and its closed forms.
//! - [`lp`]: the linear program over discrete derivatives and a dense simplex.
//! - [`verify`]: theorem-level checks, the exhaustive search and the suite.
//! - [`io`]: JSON and binary file formats.

#![forbid(unsafe_code)]

pub mod cube;
pub mod error;
pub mod info;
pub mod io;
pub mod lp;
pub mod random;
pub mod scalar;
pub mod spectral;
pub mod subsets;
pub mod symmetric;
pub mod verify;

pub use cube::{CubeFunction, NoiseParam};
pub use error::{Error, Result};
pub use spectral::Spectrum;
pub use subsets::SubsetMask;
