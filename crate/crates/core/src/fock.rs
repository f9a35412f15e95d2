//! Bosonic amplitude kernel.
//!
//! Input photons occupy per-input channel blocks; a passive interferometer
//! rewrites each input creation operator as a combination of detector-mode
//! creation operators. Detection coefficients for a click pattern are sums of
//! products of matrix entries over distinct assignments of photons to clicks:
//! assignments that place photons in exactly the same clicks are counted once.
//! [`oracle_expand`] computes the same coefficients by brute symbolic
//! expansion of the creation-operator polynomial and exists purely to
//! cross-check the assignment sum.
//!
//! Mode and channel indices are 0-based throughout the crate; reports add 1
//! for display.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::unitarity_error;
use crate::tol;

/// What an interferometer input row carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModeRole {
    /// Channel `channel` of cluster input `input`.
    ClusterLeg { input: usize, channel: usize },
    /// The single occupied channel of ancilla input `input`.
    AncillaPhoton { input: usize },
    /// No input photon; the row only completes the unitary.
    VacuumPad,
}

/// One input's block of channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelBlock {
    pub channels: usize,
    pub ancilla: bool,
}

/// The shared channel-offset map: input m, channel i sits at global row
/// `offset(m) + i`. Defined once so every consumer agrees on the layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelLayout {
    blocks: Vec<ChannelBlock>,
    vacuum_pads: usize,
}

impl ChannelLayout {
    pub fn new(blocks: Vec<ChannelBlock>, vacuum_pads: usize) -> Self {
        Self {
            blocks,
            vacuum_pads,
        }
    }

    /// Layout for two cluster legs and nothing else.
    pub fn two_clusters(k1: usize, k2: usize, vacuum_pads: usize) -> Self {
        Self::new(
            vec![
                ChannelBlock {
                    channels: k1,
                    ancilla: false,
                },
                ChannelBlock {
                    channels: k2,
                    ancilla: false,
                },
            ],
            vacuum_pads,
        )
    }

    pub fn blocks(&self) -> &[ChannelBlock] {
        &self.blocks
    }

    pub fn vacuum_pads(&self) -> usize {
        self.vacuum_pads
    }

    /// Number of photons routed through the interferometer.
    pub fn photons(&self) -> usize {
        self.blocks.len()
    }

    pub fn total_modes(&self) -> usize {
        self.blocks.iter().map(|b| b.channels).sum::<usize>() + self.vacuum_pads
    }

    pub fn offset(&self, input: usize) -> usize {
        self.blocks[..input].iter().map(|b| b.channels).sum()
    }

    /// Global row of channel `i` of input `m`.
    pub fn row(&self, input: usize, channel: usize) -> usize {
        debug_assert!(channel < self.blocks[input].channels);
        self.offset(input) + channel
    }

    pub fn mode_roles(&self) -> Vec<ModeRole> {
        let mut roles = Vec::with_capacity(self.total_modes());
        for (m, b) in self.blocks.iter().enumerate() {
            for ch in 0..b.channels {
                roles.push(if b.ancilla {
                    ModeRole::AncillaPhoton { input: m }
                } else {
                    ModeRole::ClusterLeg {
                        input: m,
                        channel: ch,
                    }
                });
            }
        }
        for _ in 0..self.vacuum_pads {
            roles.push(ModeRole::VacuumPad);
        }
        roles
    }

    /// Iterate over all input channel tuples (one channel per block).
    pub fn input_tuples(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![vec![]];
        for b in &self.blocks {
            let mut next = Vec::with_capacity(out.len() * b.channels);
            for prefix in &out {
                for ch in 0..b.channels {
                    let mut t = prefix.clone();
                    t.push(ch);
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }
}

/// A K×K unitary acting on mode creation operators, together with the layout
/// that says which row belongs to which input.
#[derive(Debug, Clone)]
pub struct Interferometer {
    matrix: Array2<C64>,
    layout: ChannelLayout,
}

impl Interferometer {
    /// Rejects non-square or non-unitary matrices and row-count mismatches;
    /// nothing is ever renormalized on the caller's behalf.
    pub fn new(matrix: Array2<C64>, layout: ChannelLayout) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "interferometer matrix is {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() != layout.total_modes() {
            return Err(Error::ChannelCountMismatch {
                rows: matrix.nrows(),
                expected: layout.total_modes(),
            });
        }
        let err = unitarity_error(&matrix);
        if err > tol::UNITARITY {
            return Err(Error::NotUnitary(err));
        }
        Ok(Self { matrix, layout })
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn layout(&self) -> &ChannelLayout {
        &self.layout
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn mode_roles(&self) -> Vec<ModeRole> {
        self.layout.mode_roles()
    }
}

/// A detector click pattern: a multiset of mode indices, one per photon.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DetectionPattern {
    clicks: Vec<usize>,
}

impl DetectionPattern {
    pub fn new(mut clicks: Vec<usize>, modes: usize) -> Result<Self> {
        for &c in &clicks {
            if c >= modes {
                return Err(Error::ModeOutOfRange {
                    index: c + 1,
                    modes,
                });
            }
        }
        clicks.sort_unstable();
        Ok(Self { clicks })
    }

    pub fn clicks(&self) -> &[usize] {
        &self.clicks
    }

    pub fn photons(&self) -> usize {
        self.clicks.len()
    }

    pub fn is_collision_free(&self) -> bool {
        self.clicks.windows(2).all(|w| w[0] != w[1])
    }

    /// (mode, multiplicity) pairs in ascending mode order.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &c in &self.clicks {
            match out.last_mut() {
                Some((mode, count)) if *mode == c => *count += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    /// 1-based display form, e.g. "(1,3)".
    pub fn display(&self) -> String {
        let parts: Vec<String> = self.clicks.iter().map(|c| (c + 1).to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// All distinct orderings of the multiset.
    fn orderings(&self) -> Vec<Vec<usize>> {
        let mut current = self.clicks.clone();
        let mut out = vec![current.clone()];
        // Lexicographic next-permutation starting from the sorted tuple.
        loop {
            let n = current.len();
            if n < 2 {
                break;
            }
            let mut i = n - 1;
            while i > 0 && current[i - 1] >= current[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = n - 1;
            while current[j] <= current[i - 1] {
                j -= 1;
            }
            current.swap(i - 1, j);
            current[i..].reverse();
            out.push(current.clone());
        }
        out
    }
}

/// Enumerate all click patterns of `photons` photons over `modes` modes.
pub fn all_patterns(modes: usize, photons: usize) -> Vec<DetectionPattern> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    while let Some((prefix, start)) = stack.pop() {
        if prefix.len() == photons {
            out.push(DetectionPattern { clicks: prefix });
            continue;
        }
        // Depth-first in reverse so the output comes out lexicographic.
        for m in (start..modes).rev() {
            let mut next = prefix.clone();
            next.push(m);
            stack.push((next, m));
        }
    }
    out
}

/// Two-photon coefficient `U_ik U_jl + U_il U_jk` for global rows i, j and
/// detector modes k, l.
pub fn coeff_two(itf: &Interferometer, i: usize, j: usize, k: usize, l: usize) -> Result<C64> {
    let u = itf.matrix();
    let n = itf.modes();
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::RowOutOfRange {
                index: idx,
                rows: n,
            });
        }
    }
    for idx in [k, l] {
        if idx >= n {
            return Err(Error::ModeOutOfRange {
                index: idx + 1,
                modes: n,
            });
        }
    }
    Ok(u[[i, k]] * u[[j, l]] + u[[i, l]] * u[[j, k]])
}

/// M-photon coefficient for one channel per input: the sum over distinct
/// assignments of photons to the pattern's clicks of the matrix-entry product.
pub fn coeff_multi(
    itf: &Interferometer,
    inputs: &[usize],
    pattern: &DetectionPattern,
) -> Result<C64> {
    let layout = itf.layout();
    if inputs.len() != layout.photons() || pattern.photons() != layout.photons() {
        return Err(Error::PatternSizeMismatch {
            len: pattern.photons(),
            photons: layout.photons(),
        });
    }
    let rows: Vec<usize> = inputs
        .iter()
        .enumerate()
        .map(|(m, &ch)| layout.row(m, ch))
        .collect();
    Ok(coeff_multi_rows(itf.matrix(), &rows, pattern))
}

fn coeff_multi_rows(u: &Array2<C64>, rows: &[usize], pattern: &DetectionPattern) -> C64 {
    let mut total = C64::new(0.0, 0.0);
    for ordering in pattern.orderings() {
        let mut term = C64::new(1.0, 0.0);
        for (m, &mode) in ordering.iter().enumerate() {
            term *= u[[rows[m], mode]];
        }
        total += term;
    }
    total
}

/// Physical Born factor turning a pattern's raw coefficient into the amplitude
/// of the normalized Fock state: √(∏ n_k!) over the click multiplicities.
pub fn born_weight(pattern: &DetectionPattern) -> f64 {
    pattern
        .multiplicities()
        .iter()
        .map(|&(_, n)| factorial(n))
        .product::<f64>()
        .sqrt()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

const ORACLE_MAX_PHOTONS: usize = 5;
const ORACLE_MAX_MODES: usize = 10;

/// Independent oracle: symbolically expands the product of transformed
/// creation operators over the vacuum and collects the coefficient of every
/// occupation monomial. Deliberately shares no code with [`coeff_multi`].
pub fn oracle_expand(
    itf: &Interferometer,
    inputs: &[usize],
) -> Result<BTreeMap<DetectionPattern, C64>> {
    let layout = itf.layout();
    let modes = itf.modes();
    let photons = layout.photons();
    if inputs.len() != photons {
        return Err(Error::PatternSizeMismatch {
            len: inputs.len(),
            photons,
        });
    }
    if photons > ORACLE_MAX_PHOTONS || modes > ORACLE_MAX_MODES {
        return Err(Error::ExpansionCapExceeded { photons, modes });
    }
    let u = itf.matrix();

    // Polynomial in commuting creation-operator symbols, keyed by the sorted
    // multiset of mode indices.
    let mut poly: BTreeMap<Vec<usize>, C64> = BTreeMap::new();
    poly.insert(Vec::new(), C64::new(1.0, 0.0));
    for (m, &ch) in inputs.iter().enumerate() {
        let row = layout.row(m, ch);
        let mut next: BTreeMap<Vec<usize>, C64> = BTreeMap::new();
        for (monomial, coeff) in &poly {
            for k in 0..modes {
                let w = u[[row, k]];
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                let mut key = monomial.clone();
                let pos = key.partition_point(|&x| x <= k);
                key.insert(pos, k);
                *next.entry(key).or_insert_with(|| C64::new(0.0, 0.0)) += coeff * w;
            }
        }
        poly = next;
    }

    let mut out = BTreeMap::new();
    for (key, coeff) in poly {
        out.insert(DetectionPattern { clicks: key }, coeff);
    }
    Ok(out)
}

/// Precomputed coefficients for every (input tuple, pattern) pair.
#[derive(Debug, Clone)]
pub struct AmplitudeTable {
    entries: BTreeMap<(Vec<usize>, DetectionPattern), C64>,
    patterns: Vec<DetectionPattern>,
}

impl AmplitudeTable {
    pub fn build(itf: &Interferometer) -> Result<Self> {
        let layout = itf.layout();
        let patterns = all_patterns(itf.modes(), layout.photons());
        let mut entries = BTreeMap::new();
        for tuple in layout.input_tuples() {
            for pattern in &patterns {
                let coeff = coeff_multi(itf, &tuple, pattern)?;
                entries.insert((tuple.clone(), pattern.clone()), coeff);
            }
        }
        Ok(Self { entries, patterns })
    }

    pub fn get(&self, inputs: &[usize], pattern: &DetectionPattern) -> Option<C64> {
        self.entries
            .get(&(inputs.to_vec(), pattern.clone()))
            .copied()
    }

    pub fn patterns(&self) -> &[DetectionPattern] {
        &self.patterns
    }
}
