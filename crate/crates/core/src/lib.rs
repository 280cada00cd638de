//! Spin entanglement and spin-resolved cross sections for electron-impact
//! ionization of atomic hydrogen.
//!
//! Everything is in atomic units (hartree, bohr) unless a name says otherwise.

pub mod amplitudes;
pub mod bell;
pub mod bellsim;
pub mod entanglement;
pub mod error;
pub mod kinematics;
pub mod linalg;
pub mod rng;
pub mod special;
pub mod spin;
pub mod sum;

pub use error::{Error, Result};
