//! Haar sampling and gradient-free search over interferometer unitaries.
//!
//! The search maximizes heralded success under an entanglement criterion. The
//! criterion itself is a hard threshold, which makes the raw objective flat
//! almost everywhere for the full-entanglement mode, so the pattern search
//! climbs a smoothed merit surface whose sharpness tightens as the step
//! shrinks; the reported value is always the raw thresholded objective, and
//! the best raw value over every evaluated candidate is what gets returned.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::analysis::{outcome_metrics, OutcomeMetrics};
use crate::error::{Error, Result};
use crate::fock::Interferometer;
use crate::fusion::{fuse, layout_for_inputs, FusionInput};
use crate::linalg::{exp_i_hermitian, orthonormalize_columns};
use crate::tol;

/// Deterministic Haar-unitary source. Identical seeds give identical
/// sequences regardless of where the sampler runs.
#[derive(Debug, Clone)]
pub struct HaarSampler {
    seed: u64,
    rng: ChaCha8Rng,
}

impl HaarSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn uniform(&mut self) -> f64 {
        // (0, 1]: the +1 keeps ln() finite.
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn gaussian_pair(&mut self) -> (f64, f64) {
        let r = (-2.0 * self.uniform().ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * self.uniform();
        (r * theta.cos(), r * theta.sin())
    }

    /// Haar-distributed K×K unitary: a complex Gaussian matrix orthonormalized
    /// by Gram-Schmidt. The triangular factor of that factorization has a
    /// positive real diagonal, which is exactly the phase convention that
    /// makes the orthonormal factor Haar rather than merely unitary.
    pub fn sample(&mut self, k: usize) -> Array2<C64> {
        let mut g = Array2::<C64>::zeros((k, k));
        for i in 0..k {
            for j in 0..k {
                let (re, im) = self.gaussian_pair();
                g[[i, j]] = C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
            }
        }
        let q = orthonormalize_columns(&g, 1e-14);
        debug_assert_eq!(q.ncols(), k);
        q
    }
}

/// See [`HaarSampler::sample`].
pub fn haar_sample(sampler: &mut HaarSampler, k: usize) -> Array2<C64> {
    sampler.sample(k)
}

/// Coordinates of a Hermitian generator: K diagonal entries followed by
/// (re, im) pairs for the strict upper triangle, K² real numbers in total.
/// The derived unitary is exp(iH).
#[derive(Debug, Clone)]
pub struct UnitaryParams {
    k: usize,
    coords: Vec<f64>,
}

impl UnitaryParams {
    pub fn zeros(k: usize) -> Self {
        Self {
            k,
            coords: vec![0.0; k * k],
        }
    }

    pub fn dims(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn hermitian(&self) -> Array2<C64> {
        let k = self.k;
        let mut h = Array2::<C64>::zeros((k, k));
        for i in 0..k {
            h[[i, i]] = C64::new(self.coords[i], 0.0);
        }
        let mut pos = k;
        for i in 0..k {
            for j in (i + 1)..k {
                let v = C64::new(self.coords[pos], self.coords[pos + 1]);
                h[[i, j]] = v;
                h[[j, i]] = v.conj();
                pos += 2;
            }
        }
        h
    }

    pub fn unitary(&self) -> Array2<C64> {
        exp_i_hermitian(&self.hermitian())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveMode {
    /// Success probability summed over relevant outcomes heralding a
    /// maximally entangled state (scalar residual below the threshold).
    MaxSuccessFullEntanglement,
    /// Success probability summed over relevant outcomes whose entropy
    /// reaches the configured threshold.
    MaxSuccessAboveEntropyThreshold,
    /// Largest minimum outcome entropy attainable while the total relevant
    /// success probability stays at or above the target.
    MaxMinEntropyAtFixedSuccess,
}

#[derive(Debug, Clone)]
pub struct Objective {
    pub mode: ObjectiveMode,
    /// Entropy criterion in nats; at most ln d is meaningful.
    pub entropy_threshold: f64,
    /// Scalar-condition residual below which a herald counts as maximally
    /// entangled.
    pub residual_threshold: f64,
    /// Success floor for the min-entropy mode.
    pub success_target: f64,
}

impl Objective {
    pub fn full_entanglement() -> Self {
        Self {
            mode: ObjectiveMode::MaxSuccessFullEntanglement,
            entropy_threshold: 0.0,
            residual_threshold: tol::MAX_ENT_RESIDUAL,
            success_target: 0.0,
        }
    }

    pub fn entropy_above(threshold: f64) -> Self {
        Self {
            mode: ObjectiveMode::MaxSuccessAboveEntropyThreshold,
            entropy_threshold: threshold,
            residual_threshold: tol::MAX_ENT_RESIDUAL,
            success_target: 0.0,
        }
    }

    pub fn min_entropy_at_success(target: f64) -> Self {
        Self {
            mode: ObjectiveMode::MaxMinEntropyAtFixedSuccess,
            entropy_threshold: 0.0,
            residual_threshold: tol::MAX_ENT_RESIDUAL,
            success_target: target,
        }
    }

    pub fn validate(&self, local_dim: usize) -> Result<()> {
        if self.entropy_threshold < 0.0 || self.residual_threshold < 0.0 {
            return Err(Error::InvalidObjective(
                "thresholds must be non-negative".into(),
            ));
        }
        let cap = (local_dim as f64).ln() + 1e-12;
        if self.entropy_threshold > cap {
            return Err(Error::InvalidObjective(format!(
                "entropy threshold {} exceeds ln d = {:.6}",
                self.entropy_threshold,
                (local_dim as f64).ln()
            )));
        }
        Ok(())
    }
}

/// Metrics of every outcome that carries a heralded state, with the photon
/// rank bound enforced: a violation is a hard error, never a score.
fn evaluate_metrics(inputs: &[FusionInput], itf: &Interferometer) -> Result<Vec<OutcomeMetrics>> {
    let outcomes = fuse(inputs, itf)?;
    let photons = inputs.len();
    let k1 = inputs[0].rank();
    let mut metrics = Vec::with_capacity(outcomes.len());
    for outcome in &outcomes {
        if let Some(m) = outcome_metrics(outcome, k1)? {
            if m.rank > photons {
                return Err(Error::TheoremViolation(format!(
                    "outcome {} has rank {} with only {} measured photons",
                    m.pattern.display(),
                    m.rank,
                    photons
                )));
            }
            metrics.push(m);
        }
    }
    Ok(metrics)
}

fn raw_value(objective: &Objective, metrics: &[OutcomeMetrics]) -> f64 {
    match objective.mode {
        // `+ 0.0` turns the empty-sum identity -0.0 into a plain zero.
        ObjectiveMode::MaxSuccessFullEntanglement => {
            metrics
                .iter()
                .filter(|m| m.relevant && m.residual < objective.residual_threshold)
                .map(|m| m.probability)
                .sum::<f64>()
                + 0.0
        }
        ObjectiveMode::MaxSuccessAboveEntropyThreshold => {
            metrics
                .iter()
                .filter(|m| m.relevant && m.entropy >= objective.entropy_threshold - 1e-12)
                .map(|m| m.probability)
                .sum::<f64>()
                + 0.0
        }
        ObjectiveMode::MaxMinEntropyAtFixedSuccess => {
            let success: f64 = metrics
                .iter()
                .filter(|m| m.relevant)
                .map(|m| m.probability)
                .sum();
            if success + 1e-12 < objective.success_target {
                return 0.0;
            }
            let min_entropy = metrics
                .iter()
                .filter(|m| m.relevant && m.probability > 1e-9)
                .map(|m| m.entropy)
                .fold(f64::INFINITY, f64::min);
            if min_entropy.is_finite() {
                min_entropy.max(0.0)
            } else {
                0.0
            }
        }
    }
}

/// Smoothed companion of [`raw_value`]; `sharpness` shrinks with the search
/// step so the surface anneals toward the raw objective.
fn merit_value(objective: &Objective, metrics: &[OutcomeMetrics], sharpness: f64) -> f64 {
    match objective.mode {
        ObjectiveMode::MaxSuccessFullEntanglement => {
            let t = sharpness.clamp(1e-7, 0.2);
            metrics
                .iter()
                .filter(|m| m.relevant)
                .map(|m| {
                    let r = m.residual / t;
                    m.probability / (1.0 + r * r)
                })
                .sum()
        }
        ObjectiveMode::MaxSuccessAboveEntropyThreshold => {
            let t = sharpness.clamp(5e-3, 0.1);
            metrics
                .iter()
                .filter(|m| m.relevant)
                .map(|m| {
                    let x = (m.entropy - objective.entropy_threshold) / t;
                    m.probability / (1.0 + (-x).exp())
                })
                .sum()
        }
        ObjectiveMode::MaxMinEntropyAtFixedSuccess => {
            let success: f64 = metrics
                .iter()
                .filter(|m| m.relevant)
                .map(|m| m.probability)
                .sum();
            let min_entropy = metrics
                .iter()
                .filter(|m| m.relevant && m.probability > 1e-9)
                .map(|m| m.entropy)
                .fold(f64::INFINITY, f64::min);
            let min_entropy = if min_entropy.is_finite() {
                min_entropy
            } else {
                0.0
            };
            min_entropy - 4.0 * (objective.success_target - success).max(0.0)
        }
    }
}

/// The sum of outcome probabilities meeting the objective's entanglement
/// criterion, with the rank bound enforced along the way.
pub fn success_probability(
    inputs: &[FusionInput],
    itf: &Interferometer,
    objective: &Objective,
) -> Result<f64> {
    let metrics = evaluate_metrics(inputs, itf)?;
    Ok(raw_value(objective, &metrics))
}

#[derive(Debug, Clone)]
pub struct TracePoint {
    pub evaluation: usize,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub best_matrix: Array2<C64>,
    pub best_value: f64,
    pub best_restart: usize,
    pub evaluations: usize,
    /// Raw-objective improvements in evaluation order.
    pub trace: Vec<TracePoint>,
    /// The ancilla preparations the scenario ran with, echoed for the report.
    pub ancilla_states: Vec<Array1<C64>>,
}

#[derive(Debug, Clone)]
pub struct OptimizeConfig {
    /// Total number of objective evaluations across all restarts.
    pub budget: usize,
    /// Parallel restart lanes; each owns a deterministic seed stream.
    pub restarts: usize,
    pub seed: u64,
    /// Optional starting unitary for the first restart lane.
    pub warm_start: Option<Array2<C64>>,
}

impl OptimizeConfig {
    pub fn new(budget: usize, seed: u64) -> Self {
        Self {
            budget,
            restarts: 8,
            seed,
            warm_start: None,
        }
    }
}

struct LaneOutcome {
    best_value: f64,
    best_matrix: Option<Array2<C64>>,
    trace: Vec<TracePoint>,
    evaluations: usize,
}

/// Multi-restart pattern search over the Hermitian-generator chart around
/// Haar-sampled base points. Deterministic for a fixed configuration: lanes
/// have derived seeds, disjoint evaluation-index ranges, and the merge prefers
/// the lowest restart index on ties.
pub fn optimize(
    inputs: &[FusionInput],
    vacuum_pads: usize,
    objective: &Objective,
    config: &OptimizeConfig,
) -> Result<OptimizeResult> {
    if config.budget == 0 || config.restarts == 0 {
        return Err(Error::InvalidObjective(
            "budget and restarts must be positive".into(),
        ));
    }
    let layout = layout_for_inputs(inputs, vacuum_pads);
    let modes = layout.total_modes();

    let mut lane_budgets = vec![config.budget / config.restarts; config.restarts];
    for slot in lane_budgets
        .iter_mut()
        .take(config.budget % config.restarts)
    {
        *slot += 1;
    }
    let lane_offsets: Vec<usize> = lane_budgets
        .iter()
        .scan(0usize, |acc, b| {
            let out = *acc;
            *acc += b;
            Some(out)
        })
        .collect();

    let lanes: Result<Vec<LaneOutcome>> = (0..config.restarts)
        .into_par_iter()
        .map(|lane| {
            let lane_seed = config
                .seed
                .wrapping_add((lane as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let warm = if lane == 0 {
                config.warm_start.clone()
            } else {
                None
            };
            run_lane(
                inputs,
                &layout,
                objective,
                modes,
                lane_budgets[lane],
                lane_offsets[lane],
                lane_seed,
                warm,
            )
        })
        .collect();
    let lanes = lanes?;

    let mut best_value = f64::NEG_INFINITY;
    let mut best_matrix: Option<Array2<C64>> = None;
    let mut best_restart = 0usize;
    for (lane, out) in lanes.iter().enumerate() {
        if out.best_value > best_value && out.best_matrix.is_some() {
            best_value = out.best_value;
            best_matrix = out.best_matrix.clone();
            best_restart = lane;
        }
    }
    let mut trace: Vec<TracePoint> = lanes.iter().flat_map(|l| l.trace.clone()).collect();
    trace.sort_by_key(|p| p.evaluation);
    let evaluations = lanes.iter().map(|l| l.evaluations).sum();

    let ancilla_states = inputs
        .iter()
        .filter_map(|i| match i {
            FusionInput::Ancilla(a) => Some(a.leg_state.clone()),
            FusionInput::Cluster(_) => None,
        })
        .collect();

    Ok(OptimizeResult {
        best_matrix: best_matrix
            .ok_or_else(|| Error::InvalidObjective("no candidate was evaluated".into()))?,
        best_value,
        best_restart,
        evaluations,
        trace,
        ancilla_states,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_lane(
    inputs: &[FusionInput],
    layout: &crate::fock::ChannelLayout,
    objective: &Objective,
    modes: usize,
    budget: usize,
    offset: usize,
    lane_seed: u64,
    warm_start: Option<Array2<C64>>,
) -> Result<LaneOutcome> {
    let mut sampler = HaarSampler::new(lane_seed);
    let mut lane = LaneOutcome {
        best_value: f64::NEG_INFINITY,
        best_matrix: None,
        trace: Vec::new(),
        evaluations: 0,
    };
    let mut warm = warm_start;

    while lane.evaluations < budget {
        let base = match warm.take() {
            Some(u) => u,
            None => sampler.sample(modes),
        };
        pattern_search(inputs, layout, objective, &base, budget, offset, &mut lane)?;
    }
    Ok(lane)
}

const INITIAL_STEP: f64 = 0.4;
const MIN_STEP: f64 = 1e-9;

fn pattern_search(
    inputs: &[FusionInput],
    layout: &crate::fock::ChannelLayout,
    objective: &Objective,
    base: &Array2<C64>,
    budget: usize,
    offset: usize,
    lane: &mut LaneOutcome,
) -> Result<()> {
    let modes = base.nrows();
    let mut params = UnitaryParams::zeros(modes);
    let mut step = INITIAL_STEP;

    let eval = |params: &UnitaryParams,
                sharpness: f64,
                lane: &mut LaneOutcome|
     -> Result<Option<(f64, f64)>> {
        if lane.evaluations >= budget {
            return Ok(None);
        }
        let matrix = base.dot(&params.unitary());
        let itf = Interferometer::new(matrix.clone(), layout.clone())?;
        let metrics = evaluate_metrics(inputs, &itf)?;
        let raw = raw_value(objective, &metrics);
        let merit = merit_value(objective, &metrics, sharpness);
        lane.evaluations += 1;
        if raw > lane.best_value {
            lane.best_value = raw;
            lane.best_matrix = Some(matrix);
            lane.trace.push(TracePoint {
                evaluation: offset + lane.evaluations - 1,
                value: raw,
            });
        }
        Ok(Some((raw, merit)))
    };

    let sharpness = |step: f64| step * 0.3;
    let mut incumbent = match eval(&params, sharpness(step), lane)? {
        Some((_, m)) => m,
        None => return Ok(()),
    };

    loop {
        let mut improved = false;
        'dims: for dim in 0..params.dims() {
            for sign in [1.0_f64, -1.0] {
                let mut candidate = params.clone();
                candidate.coords_mut()[dim] += sign * step;
                match eval(&candidate, sharpness(step), lane)? {
                    None => return Ok(()),
                    Some((_, merit)) => {
                        if merit > incumbent + 1e-15 {
                            params = candidate;
                            incumbent = merit;
                            improved = true;
                            continue 'dims;
                        }
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < MIN_STEP {
                return Ok(());
            }
            // The merit surface sharpens with the step; rebase the incumbent.
            incumbent = match eval(&params, sharpness(step), lane)? {
                Some((_, m)) => m,
                None => return Ok(()),
            };
        }
    }
}

/// One optimize run per entropy threshold, sharing restart seeds so the
/// resulting success/entanglement trade-off points are comparable. Raw values
/// are reported as found; monotonicity in the threshold is expected but never
/// enforced by post-processing.
pub fn tradeoff_curve(
    inputs: &[FusionInput],
    vacuum_pads: usize,
    thresholds: &[f64],
    config: &OptimizeConfig,
) -> Result<Vec<(f64, f64)>> {
    if thresholds.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidObjective(
            "thresholds must be ascending".into(),
        ));
    }
    let mut curve = Vec::with_capacity(thresholds.len());
    for &threshold in thresholds {
        let objective = Objective::entropy_above(threshold);
        let result = optimize(inputs, vacuum_pads, &objective, config)?;
        curve.push((threshold, result.best_value));
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ChannelLayout;
    use crate::linalg::unitarity_error;
    use crate::scenario::{preset_unitary, Scenario, PRESET_QUBIT_TYPE2_EQ8};

    fn bell_inputs(d: usize) -> Vec<FusionInput> {
        Scenario::bell_pairs(d, 0, 0)
            .unwrap()
            .build_inputs()
            .unwrap()
    }

    #[test]
    fn haar_sampler_is_deterministic_and_unitary() {
        let mut a = HaarSampler::new(42);
        let mut b = HaarSampler::new(42);
        for _ in 0..3 {
            let ua = a.sample(4);
            let ub = b.sample(4);
            assert!(unitarity_error(&ua) < 1e-10);
            for (x, y) in ua.iter().zip(ub.iter()) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }

    #[test]
    fn haar_scalar_sample_has_unit_modulus() {
        let mut s = HaarSampler::new(5);
        let u = s.sample(1);
        assert!((u[[0, 0]].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_moments_and_trace_bias() {
        let mut s = HaarSampler::new(2024);
        let k = 4usize;
        let n = 10_000;
        let mut m2 = 0.0;
        let mut m4 = 0.0;
        let mut tr = C64::new(0.0, 0.0);
        for _ in 0..n {
            let u = s.sample(k);
            let a = u[[0, 0]].norm_sqr();
            m2 += a;
            m4 += a * a;
            for i in 0..k {
                tr += u[[i, i]];
            }
        }
        let m2 = m2 / n as f64;
        let m4 = m4 / n as f64;
        let tr = tr / n as f64;
        // E|U_11|² = 1/K and E|U_11|⁴ = 2/(K(K+1)).
        assert!((m2 - 1.0 / k as f64).abs() < 0.01, "second moment {m2}");
        assert!(
            (m4 - 2.0 / (k * (k + 1)) as f64).abs() < 0.01,
            "fourth moment {m4}"
        );
        // E[Tr U] = 0; a missing phase-correction convention leaves a strong
        // negative-real bias here.
        assert!(tr.norm() < 0.1, "trace bias {tr}");
    }

    #[test]
    fn params_round_trip_hermitian() {
        let mut p = UnitaryParams::zeros(3);
        p.coords_mut()[0] = 0.3;
        p.coords_mut()[3] = 0.1; // re H[0,1]
        p.coords_mut()[4] = -0.2; // im H[0,1]
        let h = p.hermitian();
        assert!((h[[0, 1]] - C64::new(0.1, -0.2)).norm() < 1e-15);
        assert!((h[[1, 0]] - C64::new(0.1, 0.2)).norm() < 1e-15);
        let u = p.unitary();
        assert!(unitarity_error(&u) < 1e-12);
    }

    #[test]
    fn qubit_fusion_success_is_half() {
        let inputs = bell_inputs(2);
        let itf = Interferometer::new(
            preset_unitary(PRESET_QUBIT_TYPE2_EQ8).unwrap(),
            ChannelLayout::two_clusters(2, 2, 0),
        )
        .unwrap();
        let p = success_probability(&inputs, &itf, &Objective::full_entanglement()).unwrap();
        assert!((p - 0.5).abs() < 1e-12, "success {p}");
    }

    #[test]
    fn identity_has_zero_entangled_success() {
        let inputs = bell_inputs(2);
        let itf = Interferometer::new(Array2::<C64>::eye(4), ChannelLayout::two_clusters(2, 2, 0))
            .unwrap();
        let p = success_probability(&inputs, &itf, &Objective::full_entanglement()).unwrap();
        assert!(p.abs() < 1e-15);
    }

    #[test]
    fn zero_threshold_counts_all_relevant_probability() {
        let inputs = bell_inputs(2);
        let itf = Interferometer::new(
            preset_unitary(PRESET_QUBIT_TYPE2_EQ8).unwrap(),
            ChannelLayout::two_clusters(2, 2, 0),
        )
        .unwrap();
        let p = success_probability(&inputs, &itf, &Objective::entropy_above(0.0)).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn success_invariant_under_detector_relabeling_and_column_phase() {
        let inputs = bell_inputs(2);
        let mut sampler = HaarSampler::new(77);
        let u = sampler.sample(4);
        let layout = ChannelLayout::two_clusters(2, 2, 0);
        let objective = Objective::entropy_above(0.3);
        let base = success_probability(
            &inputs,
            &Interferometer::new(u.clone(), layout.clone()).unwrap(),
            &objective,
        )
        .unwrap();

        // Relabel detectors: permute columns.
        let perm = [2usize, 0, 3, 1];
        let mut permuted = Array2::<C64>::zeros((4, 4));
        for r in 0..4 {
            for c in 0..4 {
                permuted[[r, c]] = u[[r, perm[c]]];
            }
        }
        let p_perm = success_probability(
            &inputs,
            &Interferometer::new(permuted, layout.clone()).unwrap(),
            &objective,
        )
        .unwrap();
        assert!((base - p_perm).abs() < 1e-12);

        // Phase one column.
        let mut phased = u.clone();
        let phase = C64::from_polar(1.0, 1.234);
        for r in 0..4 {
            phased[[r, 2]] *= phase;
        }
        let p_phase = success_probability(
            &inputs,
            &Interferometer::new(phased, layout).unwrap(),
            &objective,
        )
        .unwrap();
        assert!((base - p_phase).abs() < 1e-12);
    }

    #[test]
    fn warm_start_at_preset_returns_at_least_half() {
        let inputs = bell_inputs(2);
        let mut config = OptimizeConfig::new(400, 7);
        config.restarts = 2;
        config.warm_start = preset_unitary(PRESET_QUBIT_TYPE2_EQ8);
        let result = optimize(&inputs, 0, &Objective::full_entanglement(), &config).unwrap();
        assert!(
            result.best_value >= 0.5 - 1e-9,
            "value {}",
            result.best_value
        );
        assert_eq!(result.best_restart, 0);
    }

    #[test]
    fn optimize_is_deterministic() {
        let inputs = bell_inputs(2);
        let mut config = OptimizeConfig::new(300, 13);
        config.restarts = 3;
        let objective = Objective::entropy_above(0.2);
        let a = optimize(&inputs, 0, &objective, &config).unwrap();
        let b = optimize(&inputs, 0, &objective, &config).unwrap();
        assert_eq!(a.best_value.to_bits(), b.best_value.to_bits());
        assert_eq!(a.trace.len(), b.trace.len());
        for (x, y) in a.trace.iter().zip(b.trace.iter()) {
            assert_eq!(x.evaluation, y.evaluation);
            assert_eq!(x.value.to_bits(), y.value.to_bits());
        }
        assert_eq!(a.evaluations, config.budget);
    }

    #[test]
    fn tradeoff_requires_ascending_thresholds() {
        let inputs = bell_inputs(2);
        let config = OptimizeConfig::new(10, 1);
        assert!(matches!(
            tradeoff_curve(&inputs, 0, &[0.5, 0.1], &config),
            Err(Error::InvalidObjective(_))
        ));
    }
}
