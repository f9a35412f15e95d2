//! Numerical thresholds used across the crate, defined once.

/// Construction-time unitarity requirement on interferometers. Inputs failing
/// it are rejected, never renormalized.
pub const UNITARITY: f64 = 1e-10;

/// Norm deviation allowed for a state to count as normalized.
pub const STATE_NORM: f64 = 1e-12;

/// Schmidt coefficients at or below this are treated as exact zeros and
/// dropped; the retained count is the Schmidt rank.
pub const SCHMIDT_DROP: f64 = 1e-12;

/// Relative eigenvalue threshold for numerical rank: eigenvalues above
/// `RANK_REL * λ_max` count toward the rank.
pub const RANK_REL: f64 = 1e-10;

/// Eigenvalues below this contribute nothing to the von Neumann entropy sum.
pub const ENTROPY_EIG_FLOOR: f64 = 1e-14;

/// A heralded outcome counts as maximally entangled when the Frobenius
/// distance of its reduced density matrix from I/k₁ falls below this.
pub const MAX_ENT_RESIDUAL: f64 = 1e-8;

/// Outcomes with probability below this are reported without a heralded
/// state instead of dividing by a vanishing normalization factor.
pub const NULL_OUTCOME_PROB: f64 = 1e-14;

/// Default cap on dense state-vector length (complex amplitudes).
pub const AMPLITUDE_CAP: usize = 1 << 24;
