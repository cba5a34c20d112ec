//! Where in configuration space does the entanglement between two parties live?
//!
//! `entloc` filters bipartite quantum states through region-restricted projective
//! measurements and measures the entanglement that survives. Two model systems are
//! provided: four spins shared as two entangled pairs ([`spin`]), and the Gaussian
//! ground state of two coupled harmonic oscillators ([`oscillator`], [`restrict`]).
//! Classical joint and conditional probability surfaces and Gaussian-surface fits
//! live in [`correlate`].
//!
//! All entropies are in bits (ebits).

pub mod correlate;
pub mod distribution;
mod error;
pub mod linalg;
pub mod oscillator;
pub mod quadrature;
pub mod restrict;
pub mod spin;

pub use distribution::{AxisSpec, CellFlag, Distribution2D, DistributionKind};
pub use error::{Error, Result};
pub use linalg::{DensityMatrix, Party, Spectrum};
pub use oscillator::OscillatorModel;
pub use restrict::{DiscretizationSpec, Region};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
