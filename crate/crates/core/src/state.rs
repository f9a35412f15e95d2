//! Dense pure states over a labeled tensor product of finite subsystems.
//!
//! Amplitude storage is row-major over the declared subsystem order: the
//! amplitude of basis state (j_1, …, j_n) sits at index
//! `j_1·d_2·…·d_n + … + j_{n-1}·d_n + j_n`. Every reshape in the crate goes
//! through this one convention.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
}

impl Subsystem {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Self {
            label: label.into(),
            dim,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PureState {
    subsystems: Vec<Subsystem>,
    amps: Array1<C64>,
    normalized: bool,
}

impl PureState {
    /// Build a state that must already be normalized.
    pub fn new(subsystems: Vec<Subsystem>, amps: Array1<C64>) -> Result<Self> {
        let state = Self::new_unnormalized(subsystems, amps)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            normalized: true,
            ..state
        })
    }

    /// Build a state without the normalization check; it carries an explicit
    /// unnormalized flag until [`PureState::normalize`] is called.
    pub fn new_unnormalized(subsystems: Vec<Subsystem>, amps: Array1<C64>) -> Result<Self> {
        let expected: usize = subsystems.iter().map(|s| s.dim).product();
        if expected != amps.len() {
            return Err(Error::AmplitudeCountMismatch {
                expected,
                actual: amps.len(),
            });
        }
        Ok(Self {
            subsystems,
            amps,
            normalized: false,
        })
    }

    /// Computational basis state |j_1 … j_n⟩.
    pub fn basis(subsystems: Vec<Subsystem>, indices: &[usize]) -> Result<Self> {
        let total: usize = subsystems.iter().map(|s| s.dim).product();
        let mut amps = Array1::<C64>::zeros(total);
        let mut idx = 0usize;
        for (s, &j) in subsystems.iter().zip(indices) {
            if j >= s.dim {
                return Err(Error::ShapeMismatch(format!(
                    "basis index {j} out of range for subsystem '{}' of dim {}",
                    s.label, s.dim
                )));
            }
            idx = idx * s.dim + j;
        }
        amps[idx] = C64::new(1.0, 0.0);
        Ok(Self {
            subsystems,
            amps,
            normalized: true,
        })
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Compensated summation keeps the check meaningful for multi-million
    /// amplitude states, where plain accumulation drifts past the tolerance.
    pub fn norm(&self) -> f64 {
        let mut sum = 0.0_f64;
        let mut carry = 0.0_f64;
        for a in self.amps.iter() {
            let y = a.norm_sqr() - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        sum.sqrt()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroProbabilityOutcome);
        }
        self.amps.mapv_inplace(|a| a / n);
        self.normalized = true;
        Ok(self)
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn subsystem_position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownSubsystem(label.to_string()))
    }

    /// Row-major flat index of a per-subsystem digit tuple.
    pub fn flat_index(&self, digits: &[usize]) -> usize {
        let mut idx = 0usize;
        for (s, &j) in self.subsystems.iter().zip(digits) {
            idx = idx * s.dim + j;
        }
        idx
    }

    /// Per-subsystem digits of a flat index, in declared order.
    pub fn digits_of(&self, mut idx: usize) -> Vec<usize> {
        let n = self.subsystems.len();
        let mut out = vec![0usize; n];
        for s in (0..n).rev() {
            let d = self.subsystems[s].dim;
            out[s] = idx % d;
            idx /= d;
        }
        out
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut subsystems = self.subsystems.clone();
        subsystems.extend(other.subsystems.iter().cloned());
        let mut amps = Array1::<C64>::zeros(self.dim() * other.dim());
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, b) in other.amps.iter().enumerate() {
                amps[i * other.dim() + j] = a * b;
            }
        }
        Self {
            subsystems,
            amps,
            normalized: self.normalized && other.normalized,
        }
    }

    /// Reshape into a matrix for the bipartition (`left_labels`, rest).
    ///
    /// Rows run over the left side in declared subsystem order, columns over
    /// the complement; amplitudes are untouched, only re-indexed.
    pub fn split_matrix(&self, left_labels: &[&str]) -> Result<Array2<C64>> {
        for l in left_labels {
            self.subsystem_position(l)?;
        }
        let left_set: Vec<usize> = self
            .subsystems
            .iter()
            .enumerate()
            .filter(|(_, s)| left_labels.iter().any(|l| *l == s.label))
            .map(|(i, _)| i)
            .collect();
        let right_set: Vec<usize> = (0..self.subsystems.len())
            .filter(|i| !left_set.contains(i))
            .collect();
        if left_set.is_empty() || right_set.is_empty() {
            return Err(Error::EmptyCut);
        }
        let left_dim: usize = left_set.iter().map(|&i| self.subsystems[i].dim).product();
        let right_dim: usize = right_set.iter().map(|&i| self.subsystems[i].dim).product();

        let mut out = Array2::<C64>::zeros((left_dim, right_dim));
        for (flat, amp) in self.amps.iter().enumerate() {
            let digits = self.digits_of(flat);
            let mut row = 0usize;
            for &i in &left_set {
                row = row * self.subsystems[i].dim + digits[i];
            }
            let mut col = 0usize;
            for &i in &right_set {
                col = col * self.subsystems[i].dim + digits[i];
            }
            out[[row, col]] = *amp;
        }
        Ok(out)
    }

    /// Apply a `d×d` matrix to one subsystem.
    pub fn apply_single_site(&self, label: &str, op: &Array2<C64>) -> Result<Self> {
        let pos = self.subsystem_position(label)?;
        let d = self.subsystems[pos].dim;
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::ShapeMismatch(format!(
                "operator is {}×{} but subsystem '{label}' has dim {d}",
                op.nrows(),
                op.ncols()
            )));
        }
        let stride: usize = self.subsystems[pos + 1..].iter().map(|s| s.dim).product();
        let mut amps = Array1::<C64>::zeros(self.dim());
        for (flat, amp) in self.amps.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let j = (flat / stride) % d;
            let base = flat - j * stride;
            for i in 0..d {
                let w = op[[i, j]];
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                amps[base + i * stride] += w * amp;
            }
        }
        Ok(Self {
            subsystems: self.subsystems.clone(),
            amps,
            normalized: self.normalized,
        })
    }

    /// Multiply each amplitude by a phase that depends on the digits of two
    /// subsystems; this is how diagonal two-site gates are applied.
    pub fn apply_pair_diagonal<F>(&self, label_a: &str, label_b: &str, phase: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> C64,
    {
        let pa = self.subsystem_position(label_a)?;
        let pb = self.subsystem_position(label_b)?;
        let mut amps = self.amps.clone();
        for (flat, amp) in amps.iter_mut().enumerate() {
            let digits = self.digits_of(flat);
            *amp *= phase(digits[pa], digits[pb]);
        }
        Ok(Self {
            subsystems: self.subsystems.clone(),
            amps,
            normalized: self.normalized,
        })
    }
}
