//! quditfuse — simulator and optimizer for generalized type-II fusion of
//! qudit cluster states under passive linear optics.
//!
//! The crate is organized around the fusion pipeline:
//!
//! * [`graphstate`] — qudit Pauli algebra, controlled-phase gates, graph
//!   states and their stabilizer checks;
//! * [`fock`] — the bosonic amplitude kernel: creation operators through an
//!   interferometer, multi-photon detection coefficients, and an independent
//!   symbolic-expansion oracle;
//! * [`fusion`] — Schmidt decomposition of the inputs and enumeration of all
//!   heralded outcomes with their states and probabilities;
//! * [`analysis`] — reduced density matrices, entanglement entropy, numerical
//!   Schmidt rank, and the rank/kernel certificates;
//! * [`optimize`] — Haar sampling and gradient-free search over
//!   interferometer unitaries for maximal heralded success;
//! * [`scenario`] — declarative description of a fusion experiment, lowered
//!   into the pieces above.
//!
//! The standard qubit fusion gate run end to end:
//!
//! ```
//! use quditfuse::fock::{ChannelLayout, Interferometer};
//! use quditfuse::fusion::fuse;
//! use quditfuse::scenario::{preset_unitary, Scenario, PRESET_QUBIT_TYPE2_EQ8};
//!
//! let inputs = Scenario::bell_pairs(2, 0, 0)?.build_inputs()?;
//! let itf = Interferometer::new(
//!     preset_unitary(PRESET_QUBIT_TYPE2_EQ8).unwrap(),
//!     ChannelLayout::two_clusters(2, 2, 0),
//! )?;
//! let outcomes = fuse(&inputs, &itf)?;
//! let success: f64 = outcomes
//!     .iter()
//!     .filter(|o| o.relevant)
//!     .map(|o| o.probability)
//!     .sum();
//! assert!((success - 0.5).abs() < 1e-10);
//! # Ok::<(), quditfuse::Error>(())
//! ```

pub mod analysis;
pub mod error;
pub mod fock;
pub mod fusion;
pub mod graphstate;
pub mod linalg;
pub mod optimize;
pub mod scenario;
pub mod state;
pub mod tol;

pub use error::{Error, Result};
