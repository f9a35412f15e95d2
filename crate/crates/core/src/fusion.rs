//! Generalized type-II fusion.
//!
//! Each input contributes one measured qudit: a cluster leg carrying the
//! nonzero Schmidt channels of its parent state, or a single ancilla photon.
//! The occupied channels are routed through the interferometer, every detector
//! click pattern is enumerated, and each pattern yields a heralded state on
//! the unmeasured remainders together with its probability.
//!
//! Heralded states are represented in the Schmidt bases of the remainders:
//! subsystem `m` of an outcome has dimension k_m (the Schmidt rank of input
//! m), with basis vector `i` standing for the i-th Schmidt vector of that
//! input. [`embed_heralded`] maps back to the original product space.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{
    all_patterns, born_weight, coeff_multi, coeff_two, ChannelBlock, ChannelLayout,
    DetectionPattern, Interferometer,
};
use crate::linalg::svd;
use crate::state::{PureState, Subsystem};
use crate::tol;

/// Orthonormal bases and non-negative coefficients for one bipartition.
///
/// `remainder_basis[i]` lives in the unmeasured side, `leg_basis[i]` in the
/// measured side, and the state is Σ coefficients\[i\] · |remainder_i⟩|leg_i⟩.
/// Coefficients are sorted descending and strictly above the drop threshold.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub coefficients: Vec<f64>,
    pub remainder_basis: Vec<Array1<C64>>,
    pub leg_basis: Vec<Array1<C64>>,
    pub remainder_dim: usize,
    pub leg_dim: usize,
}

impl SchmidtForm {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// ‖Σ α_i |φ_i⟩⟨ψ_i| − M‖_F against the amplitude matrix it came from.
    pub fn reconstruction_error(&self, matrix: &Array2<C64>) -> f64 {
        let mut err = 0.0_f64;
        for r in 0..self.remainder_dim {
            for c in 0..self.leg_dim {
                let mut rec = C64::new(0.0, 0.0);
                for (i, alpha) in self.coefficients.iter().enumerate() {
                    rec += alpha * self.remainder_basis[i][r] * self.leg_basis[i][c];
                }
                err += (rec - matrix[[r, c]]).norm_sqr();
            }
        }
        err.sqrt()
    }
}

/// Schmidt-decompose `state` across (`remainder_labels`, rest). Coefficients
/// at or below the drop threshold are discarded together with their vectors.
pub fn schmidt_decompose(state: &PureState, remainder_labels: &[&str]) -> Result<SchmidtForm> {
    let m = state.split_matrix(remainder_labels)?;
    let (u, s, v) = svd(&m);
    let mut coefficients = Vec::new();
    let mut remainder_basis = Vec::new();
    let mut leg_basis = Vec::new();
    for (i, &sv) in s.iter().enumerate() {
        if sv <= tol::SCHMIDT_DROP {
            break; // sorted descending
        }
        coefficients.push(sv);
        remainder_basis.push(u.column(i).to_owned());
        // M = U Σ V†, so the measured-side vectors are the conjugated columns.
        leg_basis.push(v.column(i).mapv(|x| x.conj()));
    }
    Ok(SchmidtForm {
        coefficients,
        remainder_basis,
        leg_basis,
        remainder_dim: m.nrows(),
        leg_dim: m.ncols(),
    })
}

/// A cluster state with one designated leg to be measured.
#[derive(Debug, Clone)]
pub struct ClusterInput {
    pub state: PureState,
    pub leg: String,
    pub schmidt: SchmidtForm,
}

impl ClusterInput {
    pub fn new(state: PureState, leg: impl Into<String>) -> Result<Self> {
        let leg = leg.into();
        state.subsystem_position(&leg)?;
        let remainder: Vec<&str> = state
            .subsystems()
            .iter()
            .filter(|s| s.label != leg)
            .map(|s| s.label.as_str())
            .collect();
        if remainder.is_empty() {
            return Err(Error::EmptyCut);
        }
        let schmidt = schmidt_decompose(&state, &remainder)?;
        Ok(Self {
            state,
            leg,
            schmidt,
        })
    }

    pub fn rank(&self) -> usize {
        self.schmidt.rank()
    }
}

/// A single ancilla photon prepared in `leg_state` over its d modes. It
/// behaves as a rank-1 input whose remainder is trivial.
#[derive(Debug, Clone)]
pub struct AncillaInput {
    pub leg_state: Array1<C64>,
}

impl AncillaInput {
    pub fn new(leg_state: Array1<C64>) -> Result<Self> {
        let norm = leg_state.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { leg_state })
    }

    /// Ancilla photon in mode |0⟩ of a d-mode qudit.
    pub fn ground(d: usize) -> Self {
        let mut v = Array1::<C64>::zeros(d);
        v[0] = C64::new(1.0, 0.0);
        Self { leg_state: v }
    }
}

#[derive(Debug, Clone)]
pub enum FusionInput {
    Cluster(ClusterInput),
    Ancilla(AncillaInput),
}

impl FusionInput {
    pub fn rank(&self) -> usize {
        match self {
            FusionInput::Cluster(c) => c.rank(),
            FusionInput::Ancilla(_) => 1,
        }
    }

    pub fn is_ancilla(&self) -> bool {
        matches!(self, FusionInput::Ancilla(_))
    }

    pub fn coefficients(&self) -> Vec<f64> {
        match self {
            FusionInput::Cluster(c) => c.schmidt.coefficients.clone(),
            FusionInput::Ancilla(_) => vec![1.0],
        }
    }
}

/// The channel layout a set of inputs induces: one block of k_m channels per
/// input, vacuum pads filling the remaining rows.
pub fn layout_for_inputs(inputs: &[FusionInput], vacuum_pads: usize) -> ChannelLayout {
    let blocks: Vec<ChannelBlock> = inputs
        .iter()
        .map(|inp| ChannelBlock {
            channels: inp.rank(),
            ancilla: inp.is_ancilla(),
        })
        .collect();
    ChannelLayout::new(blocks, vacuum_pads)
}

/// One heralded detection outcome.
#[derive(Debug, Clone)]
pub struct FusionOutcome {
    pub pattern: DetectionPattern,
    pub probability: f64,
    /// Normalized post-measurement state in the Schmidt-basis representation;
    /// `None` when the outcome probability is below the null floor.
    pub heralded_state: Option<PureState>,
    /// Normalization constant N of the outcome. For two photons this is the
    /// pair-coefficient norm (collision coefficients doubled), so that
    /// `probability == N²` on collision-free patterns and `N²/2` on
    /// collisions. For more photons it is the physical amplitude norm and
    /// `probability == N²` throughout.
    pub norm_factor: f64,
    /// Collision-free patterns are the potentially entangled ones.
    pub relevant: bool,
}

pub fn outcome_probability(outcome: &FusionOutcome) -> f64 {
    outcome.probability
}

fn heralded_subsystems(inputs: &[FusionInput]) -> Vec<Subsystem> {
    inputs
        .iter()
        .enumerate()
        .map(|(m, inp)| {
            let label = match inp {
                FusionInput::Cluster(_) => format!("V{}", m + 1),
                FusionInput::Ancilla(_) => format!("A{}", m + 1),
            };
            Subsystem::new(label, inp.rank())
        })
        .collect()
}

/// Run the fusion: route every input channel through `itf`, enumerate all
/// detection patterns, and return one outcome per pattern. Probabilities sum
/// to one.
pub fn fuse(inputs: &[FusionInput], itf: &Interferometer) -> Result<Vec<FusionOutcome>> {
    if inputs.is_empty() {
        return Err(Error::InvalidScenario(
            "fusion needs at least one input".into(),
        ));
    }
    let expected = layout_for_inputs(inputs, itf.layout().vacuum_pads());
    if itf.layout() != &expected {
        return Err(Error::ChannelCountMismatch {
            rows: itf.modes(),
            expected: expected.total_modes(),
        });
    }

    let coeffs: Vec<Vec<f64>> = inputs.iter().map(|i| i.coefficients()).collect();
    let subsystems = heralded_subsystems(inputs);
    let tuples = itf.layout().input_tuples();
    let patterns = all_patterns(itf.modes(), inputs.len());

    let outcomes: Result<Vec<FusionOutcome>> = patterns
        .into_par_iter()
        .map(|pattern| {
            let mut amps = Array1::<C64>::zeros(tuples.len());
            for (t, tuple) in tuples.iter().enumerate() {
                let mut weight = 1.0_f64;
                for (m, &ch) in tuple.iter().enumerate() {
                    weight *= coeffs[m][ch];
                }
                amps[t] = weight * coeff_multi(itf, tuple, &pattern)?;
            }
            let raw_norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            let bw = born_weight(&pattern);
            let probability = bw * bw * raw_norm_sq;
            let relevant = pattern.is_collision_free();
            let heralded_state = if probability > tol::NULL_OUTCOME_PROB {
                let n = raw_norm_sq.sqrt();
                let normalized = amps.mapv(|a| a / n);
                Some(PureState::new(subsystems.clone(), normalized)?)
            } else {
                None
            };
            // For two photons report the pair-convention N (collision terms
            // doubled): p = N² when collision-free, N²/2 on a collision.
            let norm_factor = if inputs.len() == 2 && !relevant {
                2.0 * raw_norm_sq.sqrt()
            } else if inputs.len() == 2 {
                raw_norm_sq.sqrt()
            } else {
                probability.sqrt()
            };
            Ok(FusionOutcome {
                pattern,
                probability,
                heralded_state,
                norm_factor,
                relevant,
            })
        })
        .collect();
    outcomes
}

/// Two-cluster fusion through the explicit two-photon coefficient algebra.
///
/// This is an independent route kept deliberately separate from [`fuse`]: it
/// never touches the multiset-assignment sum, instead using the closed-form
/// pair coefficient, the collision-doubling convention and the explicit ½
/// collision probability. Outcomes agree with [`fuse`] entry by entry.
pub fn fuse_two(
    first: &ClusterInput,
    second: &ClusterInput,
    itf: &Interferometer,
) -> Result<Vec<FusionOutcome>> {
    let inputs = [
        FusionInput::Cluster(first.clone()),
        FusionInput::Cluster(second.clone()),
    ];
    let expected = layout_for_inputs(&inputs, itf.layout().vacuum_pads());
    if itf.layout() != &expected {
        return Err(Error::ChannelCountMismatch {
            rows: itf.modes(),
            expected: expected.total_modes(),
        });
    }
    let k1 = first.rank();
    let k2 = second.rank();
    let alphas = &first.schmidt.coefficients;
    let betas = &second.schmidt.coefficients;
    let subsystems = heralded_subsystems(&inputs);
    let modes = itf.modes();

    let mut outcomes = Vec::new();
    for k in 0..modes {
        for l in k..modes {
            let collision = k == l;
            let mut amps = Array1::<C64>::zeros(k1 * k2);
            for i in 0..k1 {
                for j in 0..k2 {
                    let a = coeff_two(itf, i, k1 + j, k, l)?;
                    amps[i * k2 + j] = alphas[i] * betas[j] * a;
                }
            }
            let n_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            let probability = if collision { n_sq / 2.0 } else { n_sq };
            let heralded_state = if probability > tol::NULL_OUTCOME_PROB {
                let n = n_sq.sqrt();
                Some(PureState::new(subsystems.clone(), amps.mapv(|a| a / n))?)
            } else {
                None
            };
            outcomes.push(FusionOutcome {
                pattern: DetectionPattern::new(vec![k, l], modes)?,
                probability,
                heralded_state,
                norm_factor: n_sq.sqrt(),
                relevant: !collision,
            });
        }
    }
    Ok(outcomes)
}

/// The two tensor factors of a two-photon collision outcome `(k,k)`.
#[derive(Debug, Clone)]
pub struct CollisionFactors {
    pub factor_first: Option<PureState>,
    pub factor_second: Option<PureState>,
    pub probability: f64,
}

/// Collision outcomes of two-cluster fusion always factor across the two
/// remainders; this builds the factors directly. A vanishing factor is
/// reported as `None`; both vanishing means the outcome itself cannot occur.
pub fn product_form_collision(
    itf: &Interferometer,
    first: &ClusterInput,
    second: &ClusterInput,
    mode: usize,
) -> Result<CollisionFactors> {
    let k1 = first.rank();
    let k2 = second.rank();
    if mode >= itf.modes() {
        return Err(Error::ModeOutOfRange {
            index: mode + 1,
            modes: itf.modes(),
        });
    }
    let u = itf.matrix();
    let f1 = Array1::from_iter((0..k1).map(|i| first.schmidt.coefficients[i] * u[[i, mode]]));
    let f2 = Array1::from_iter((0..k2).map(|j| second.schmidt.coefficients[j] * u[[k1 + j, mode]]));
    let n1_sq: f64 = f1.iter().map(|a| a.norm_sqr()).sum();
    let n2_sq: f64 = f2.iter().map(|a| a.norm_sqr()).sum();
    let probability = 2.0 * n1_sq * n2_sq;

    let make = |v: Array1<C64>, n_sq: f64, label: &str| -> Result<Option<PureState>> {
        if n_sq <= tol::NULL_OUTCOME_PROB {
            return Ok(None);
        }
        let n = n_sq.sqrt();
        Ok(Some(PureState::new(
            vec![Subsystem::new(label, v.len())],
            v.mapv(|a| a / n),
        )?))
    };
    let factor_first = make(f1, n1_sq, "V1")?;
    let factor_second = make(f2, n2_sq, "V2")?;
    if factor_first.is_none() && factor_second.is_none() {
        return Err(Error::ZeroProbabilityOutcome);
    }
    Ok(CollisionFactors {
        factor_first,
        factor_second,
        probability,
    })
}

/// Map a heralded state from the Schmidt-basis representation back to the
/// original remainder spaces of the inputs.
pub fn embed_heralded(state: &PureState, inputs: &[FusionInput]) -> Result<PureState> {
    let bases: Vec<Vec<Array1<C64>>> = inputs
        .iter()
        .map(|inp| match inp {
            FusionInput::Cluster(c) => c.schmidt.remainder_basis.clone(),
            FusionInput::Ancilla(_) => vec![Array1::from_elem(1, C64::new(1.0, 0.0))],
        })
        .collect();
    let dims: Vec<usize> = bases.iter().map(|b| b[0].len()).collect();
    let subsystems: Vec<Subsystem> = state
        .subsystems()
        .iter()
        .zip(&dims)
        .map(|(s, &d)| Subsystem::new(s.label.clone(), d))
        .collect();
    let total: usize = dims.iter().product();
    let mut amps = Array1::<C64>::zeros(total);
    for (flat, amp) in state.amplitudes().iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let digits = state.digits_of(flat);
        // Accumulate amp · ⊗_m basis[m][digit_m] into the embedded vector.
        let mut indices = vec![0usize; dims.len()];
        loop {
            let mut value = *amp;
            let mut target = 0usize;
            for (m, &i) in indices.iter().enumerate() {
                value *= bases[m][digits[m]][i];
                target = target * dims[m] + i;
            }
            amps[target] += value;
            // Odometer increment over the embedded indices.
            let mut pos = dims.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                indices[pos] += 1;
                if indices[pos] < dims[pos] {
                    break;
                }
                indices[pos] = 0;
            }
            if indices.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    PureState::new_unnormalized(subsystems, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphstate::{build_graph_state, QuditDim, QuditGraph};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    pub(crate) fn bell_pair(d: usize) -> ClusterInput {
        let dim = QuditDim::new(d).unwrap();
        let g = QuditGraph::new(dim, &["r", "leg"], &[("r", "leg")]).unwrap();
        let state = build_graph_state(&g).unwrap();
        ClusterInput::new(state, "leg").unwrap()
    }

    fn qubit_fusion_itf(k1: usize, k2: usize) -> Interferometer {
        Interferometer::new(
            crate::scenario::preset_unitary(crate::scenario::PRESET_QUBIT_TYPE2_EQ8).unwrap(),
            ChannelLayout::two_clusters(k1, k2, 0),
        )
        .unwrap()
    }

    #[test]
    fn schmidt_of_product_state_is_rank_one() {
        let subs = vec![Subsystem::new("a", 2), Subsystem::new("b", 2)];
        let st = PureState::basis(subs, &[1, 0]).unwrap();
        let f = schmidt_decompose(&st, &["a"]).unwrap();
        assert_eq!(f.rank(), 1);
        assert!((f.coefficients[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn schmidt_of_qubit_graph_pair_is_uniform() {
        let input = bell_pair(2);
        assert_eq!(input.rank(), 2);
        for a in &input.schmidt.coefficients {
            assert!((a - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_of_qudit_leg_is_uniform_one_over_sqrt_d() {
        for d in [2usize, 3, 4, 5] {
            let input = bell_pair(d);
            assert_eq!(input.rank(), d);
            for a in &input.schmidt.coefficients {
                assert!((a - 1.0 / (d as f64).sqrt()).abs() < 1e-12, "d={d}");
            }
        }
    }

    #[test]
    fn schmidt_reconstruction_error_is_small() {
        let input = bell_pair(3);
        let m = input.state.split_matrix(&["r"]).unwrap();
        assert!(input.schmidt.reconstruction_error(&m) < 1e-12);
    }

    #[test]
    fn qubit_fusion_gate_relevant_probability_is_half() {
        let a = bell_pair(2);
        let b = bell_pair(2);
        let itf = qubit_fusion_itf(2, 2);
        let outcomes = fuse(&[FusionInput::Cluster(a), FusionInput::Cluster(b)], &itf).unwrap();
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        assert!((total - 1.0).abs() < 1e-12, "total {total}");
        let relevant: f64 = outcomes
            .iter()
            .filter(|o| o.relevant)
            .map(|o| o.probability)
            .sum();
        assert!((relevant - 0.5).abs() < 1e-12, "relevant {relevant}");
    }

    #[test]
    fn identity_interferometer_outcomes_are_products() {
        let a = bell_pair(2);
        let b = bell_pair(2);
        let alphas = a.schmidt.coefficients.clone();
        let betas = b.schmidt.coefficients.clone();
        let itf = Interferometer::new(Array2::<C64>::eye(4), ChannelLayout::two_clusters(2, 2, 0))
            .unwrap();
        let outcomes = fuse(&[FusionInput::Cluster(a), FusionInput::Cluster(b)], &itf).unwrap();
        for o in &outcomes {
            let clicks = o.pattern.clicks();
            let (k, l) = (clicks[0], clicks[1]);
            if o.relevant && k < 2 && l >= 2 {
                // p_{kl} = α_k² β_{l-k1}²; heralded state is |φ_{1,k}⟩|φ_{2,l-k1}⟩.
                let expect = alphas[k].powi(2) * betas[l - 2].powi(2);
                assert!((o.probability - expect).abs() < 1e-12);
                let st = o.heralded_state.as_ref().unwrap();
                let idx = k * 2 + (l - 2);
                assert!((st.amplitudes()[idx].norm() - 1.0).abs() < 1e-12);
            } else {
                // Same-side patterns are impossible with the identity matrix.
                assert!(
                    o.probability < 1e-14,
                    "pattern {} has p={}",
                    o.pattern.display(),
                    o.probability
                );
                assert!(o.heralded_state.is_none());
            }
        }
    }

    #[test]
    fn qubit_fusion_gate_frozen_pattern_probabilities() {
        // Hand-evaluated pair coefficients for the fusion-gate matrix: the
        // nonzero relevant patterns each carry 1/8, the cross patterns (1,2)
        // and (3,4) vanish, and every collision carries 1/8.
        let a = bell_pair(2);
        let b = bell_pair(2);
        let itf = qubit_fusion_itf(2, 2);
        let outcomes = fuse(&[FusionInput::Cluster(a), FusionInput::Cluster(b)], &itf).unwrap();
        let expected = [
            (vec![0usize, 0], 0.125),
            (vec![0, 1], 0.0),
            (vec![0, 2], 0.125),
            (vec![0, 3], 0.125),
            (vec![1, 1], 0.125),
            (vec![1, 2], 0.125),
            (vec![1, 3], 0.125),
            (vec![2, 2], 0.125),
            (vec![2, 3], 0.0),
            (vec![3, 3], 0.125),
        ];
        for (clicks, p) in expected {
            let o = outcomes
                .iter()
                .find(|o| o.pattern.clicks() == clicks.as_slice())
                .unwrap();
            assert!(
                (o.probability - p).abs() < 1e-12,
                "pattern {} probability {}",
                o.pattern.display(),
                o.probability
            );
            // Normalization-constant relation: p = N² (relevant), N²/2 (collision).
            let from_norm = if o.relevant {
                o.norm_factor * o.norm_factor
            } else {
                o.norm_factor * o.norm_factor / 2.0
            };
            assert!((o.probability - from_norm).abs() < 1e-12);
        }
    }

    #[test]
    fn general_and_pair_paths_agree() {
        let a = bell_pair(2);
        let b = bell_pair(2);
        let itf = qubit_fusion_itf(2, 2);
        let general = fuse(
            &[
                FusionInput::Cluster(a.clone()),
                FusionInput::Cluster(b.clone()),
            ],
            &itf,
        )
        .unwrap();
        let pairwise = fuse_two(&a, &b, &itf).unwrap();
        assert_eq!(general.len(), pairwise.len());
        for (g, p) in general.iter().zip(pairwise.iter()) {
            assert_eq!(g.pattern, p.pattern);
            assert!((g.probability - p.probability).abs() < 1e-12);
            assert!((g.norm_factor - p.norm_factor).abs() < 1e-12);
            match (&g.heralded_state, &p.heralded_state) {
                (Some(gs), Some(ps)) => {
                    for (x, y) in gs.amplitudes().iter().zip(ps.amplitudes().iter()) {
                        assert!((x - y).norm() < 1e-10);
                    }
                }
                (None, None) => {}
                _ => panic!("paths disagree on null outcome at {}", g.pattern.display()),
            }
        }
    }

    #[test]
    fn collision_outcomes_factor() {
        let a = bell_pair(2);
        let b = bell_pair(2);
        let itf = qubit_fusion_itf(2, 2);
        let outcomes = fuse_two(&a, &b, &itf).unwrap();
        for mode in 0..4 {
            let factors = product_form_collision(&itf, &a, &b, mode).unwrap();
            let outcome = outcomes
                .iter()
                .find(|o| o.pattern.clicks() == [mode, mode])
                .unwrap();
            assert!((factors.probability - outcome.probability).abs() < 1e-12);
            let (f1, f2) = (
                factors.factor_first.as_ref().unwrap(),
                factors.factor_second.as_ref().unwrap(),
            );
            let product = f1.tensor(f2);
            let heralded = outcome.heralded_state.as_ref().unwrap();
            // States may differ by a global phase; compare via overlap.
            let overlap = product.inner(heralded).norm();
            assert!((overlap - 1.0).abs() < 1e-12, "overlap {overlap}");
        }
    }

    #[test]
    fn collision_factor_null_side_is_signaled() {
        let a = bell_pair(2);
        let b = bell_pair(2);
        let itf = Interferometer::new(Array2::<C64>::eye(4), ChannelLayout::two_clusters(2, 2, 0))
            .unwrap();
        let factors = product_form_collision(&itf, &a, &b, 0).unwrap();
        assert!(factors.factor_first.is_some());
        assert!(factors.factor_second.is_none());
        assert!(factors.probability < 1e-14);
    }

    #[test]
    fn ancilla_requires_normalized_state() {
        let v = Array1::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(AncillaInput::new(v), Err(Error::NotNormalized(_))));
        assert!(AncillaInput::new(AncillaInput::ground(3).leg_state).is_ok());
    }

    #[test]
    fn fuse_rejects_wrong_size_unitary() {
        let a = bell_pair(2);
        let b = bell_pair(2);
        let itf = Interferometer::new(Array2::<C64>::eye(5), ChannelLayout::two_clusters(2, 3, 0))
            .unwrap();
        assert!(matches!(
            fuse(&[FusionInput::Cluster(a), FusionInput::Cluster(b)], &itf),
            Err(Error::ChannelCountMismatch { .. })
        ));
    }

    #[test]
    fn embedded_heralded_state_matches_direct_projection() {
        // Fuse two 3-vertex qubit paths and check one embedded outcome against
        // a from-scratch projection of the full 6-qubit state.
        let dim = QuditDim::new(2).unwrap();
        let g = QuditGraph::new(dim, &["x", "y", "leg"], &[("x", "y"), ("y", "leg")]).unwrap();
        let state = build_graph_state(&g).unwrap();
        let a = ClusterInput::new(state.clone(), "leg").unwrap();
        let b = ClusterInput::new(state, "leg").unwrap();
        let itf = qubit_fusion_itf(2, 2);
        let inputs = [
            FusionInput::Cluster(a.clone()),
            FusionInput::Cluster(b.clone()),
        ];
        let outcomes = fuse(&inputs, &itf).unwrap();
        let outcome = outcomes
            .iter()
            .find(|o| o.relevant && o.probability > 1e-6)
            .unwrap();
        let embedded = embed_heralded(outcome.heralded_state.as_ref().unwrap(), &inputs).unwrap();
        // The embedded state lives on 4 qubits (two remainders of dim 4).
        assert_eq!(embedded.dim(), 16);
        assert!((embedded.norm() - 1.0).abs() < 1e-10);

        // Direct projection: expand each input over its raw amplitude matrix
        // and project the leg part onto the channel vectors, bypassing the
        // Schmidt coefficients and remainder bases entirely.
        let clicks = outcome.pattern.clicks();
        let (k, l) = (clicks[0], clicks[1]);
        let u = itf.matrix();
        let channel_weights = |input: &ClusterInput| -> Array2<C64> {
            let m = input.state.split_matrix(&["x", "y"]).unwrap();
            let mut w = Array2::<C64>::zeros((4, input.rank()));
            for r in 0..4 {
                for (i, psi) in input.schmidt.leg_basis.iter().enumerate() {
                    for mode in 0..2 {
                        w[[r, i]] += m[[r, mode]] * psi[mode].conj();
                    }
                }
            }
            w
        };
        let ca = channel_weights(&a);
        let cb = channel_weights(&b);
        let mut direct = Array1::<C64>::zeros(16);
        for ra in 0..4 {
            for rb in 0..4 {
                let mut amp = C64::new(0.0, 0.0);
                for i in 0..a.rank() {
                    for j in 0..b.rank() {
                        let row_b = a.rank() + j;
                        amp += ca[[ra, i]]
                            * cb[[rb, j]]
                            * (u[[i, k]] * u[[row_b, l]] + u[[i, l]] * u[[row_b, k]]);
                    }
                }
                direct[ra * 4 + rb] = amp;
            }
        }
        let n: f64 = direct.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        direct.mapv_inplace(|x| x / n);
        let mut worst = 0.0_f64;
        for (x, y) in direct.iter().zip(embedded.amplitudes().iter()) {
            worst = worst.max((x - y).norm());
        }
        assert!(
            worst < 1e-10,
            "entrywise deviation {} for pattern {}",
            worst,
            outcome.pattern.display()
        );
    }
}
