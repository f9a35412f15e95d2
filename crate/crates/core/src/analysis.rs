//! Entanglement diagnostics for heralded outcomes: reduced density matrices,
//! von Neumann entropy, numerical Schmidt rank, the 2×2 factorized form of
//! two-photon outcomes, and explicit kernel certificates for the rank bound.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{coeff_two, DetectionPattern, Interferometer};
use crate::fusion::{fuse, ClusterInput, FusionInput, FusionOutcome};
use crate::linalg::{adjoint, complement_basis, frobenius_norm, hermitian_eigen};
use crate::optimize::HaarSampler;
use crate::scenario::Scenario;
use crate::state::PureState;
use crate::tol;

/// Reduced density matrix over one kept subsystem, in that subsystem's basis.
#[derive(Debug, Clone)]
pub struct ReducedDensity {
    pub kept: String,
    pub matrix: Array2<C64>,
}

impl ReducedDensity {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[[i, i]].re).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        frobenius_norm(&(&self.matrix - &adjoint(&self.matrix)))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Array1<f64> {
        hermitian_eigen(&self.matrix).0
    }
}

/// Partial trace of a normalized pure state onto subsystem `keep`.
pub fn reduced_density(state: &PureState, keep: &str) -> Result<ReducedDensity> {
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(norm));
    }
    let m = state.split_matrix(&[keep])?;
    let rho = m.dot(&adjoint(&m));
    Ok(ReducedDensity {
        kept: keep.to_string(),
        matrix: rho,
    })
}

/// Von Neumann entropy −Σ λ ln λ in nats.
pub fn entropy(rho: &ReducedDensity) -> f64 {
    rho.eigenvalues()
        .iter()
        .filter(|&&l| l > tol::ENTROPY_EIG_FLOOR)
        .map(|&l| -l * l.ln())
        .sum()
}

/// Count of eigenvalues above `rel_tol · λ_max`.
pub fn numerical_rank(rho: &ReducedDensity, rel_tol: f64) -> usize {
    let w = rho.eigenvalues();
    let max = w.iter().cloned().fold(0.0_f64, f64::max);
    if max <= 0.0 {
        return 0;
    }
    w.iter().filter(|&&l| l > rel_tol * max).count()
}

/// Frobenius distance of ρ from the scalar matrix I/k₁; zero exactly when the
/// herald is maximally entangled.
pub fn scalar_condition_residual(rho: &ReducedDensity, k1: usize) -> f64 {
    let n = rho.dim();
    let mut sq = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j {
                C64::new(1.0 / k1 as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            sq += (rho.matrix[[i, j]] - expect).norm_sqr();
        }
    }
    sq.sqrt()
}

/// The 2×2 factorization ρ = V†AV/k₁ of a collision-free two-photon outcome.
#[derive(Debug, Clone)]
pub struct FactorizedForm {
    /// 2×k₁ matrix with rows (α_s U_{s,k})_s and (α_s U_{s,l})_s.
    pub v: Array2<C64>,
    /// Hermitian 2×2 matrix of leg-2 channel correlations.
    pub a: Array2<C64>,
    pub reconstruction_error: f64,
}

/// Build the factorized form of the reduced density matrix for the relevant
/// pattern `(k,l)` and measure its deviation from the directly traced one.
pub fn factorized_form(
    itf: &Interferometer,
    first: &ClusterInput,
    second: &ClusterInput,
    pattern: &DetectionPattern,
) -> Result<FactorizedForm> {
    if pattern.photons() != 2 || !pattern.is_collision_free() {
        return Err(Error::NotARelevantPattern(pattern.display()));
    }
    let clicks = pattern.clicks();
    let (k, l) = (clicks[0], clicks[1]);
    let k1 = first.rank();
    let k2 = second.rank();
    let alphas = &first.schmidt.coefficients;
    let betas = &second.schmidt.coefficients;
    let u = itf.matrix();

    // Heralded amplitudes c_{ij} = α_i β_j a_{ij,kl} and their norm.
    let mut amps = Array2::<C64>::zeros((k1, k2));
    for i in 0..k1 {
        for j in 0..k2 {
            amps[[i, j]] = alphas[i] * betas[j] * coeff_two(itf, i, k1 + j, k, l)?;
        }
    }
    let n_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if n_sq <= tol::NULL_OUTCOME_PROB {
        return Err(Error::ZeroProbabilityOutcome);
    }

    // Direct route: trace the normalized heralded state over the second side.
    let n = n_sq.sqrt();
    let rho_direct = {
        let mut m = Array2::<C64>::zeros((k1, k2));
        for i in 0..k1 {
            for j in 0..k2 {
                m[[i, j]] = amps[[i, j]] / n;
            }
        }
        m.dot(&adjoint(&m))
    };

    // Factorized route.
    let x = |kp: usize, lp: usize| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..k2 {
            acc += betas[j] * betas[j] * u[[k1 + j, kp]].conj() * u[[k1 + j, lp]];
        }
        acc * (k1 as f64 / n_sq)
    };
    let mut a = Array2::<C64>::zeros((2, 2));
    a[[0, 0]] = x(l, l);
    a[[0, 1]] = x(l, k);
    a[[1, 0]] = x(k, l);
    a[[1, 1]] = x(k, k);

    let mut v = Array2::<C64>::zeros((2, k1));
    for s in 0..k1 {
        v[[0, s]] = alphas[s] * u[[s, k]];
        v[[1, s]] = alphas[s] * u[[s, l]];
    }

    // V†AV carries the indices in bra order; transposing converts to the
    // ⟨i|ρ|j⟩ convention used by `reduced_density`.
    let vav = adjoint(&v).dot(&a).dot(&v);
    let rho_fact = vav.t().mapv(|z| z / k1 as f64);

    let reconstruction_error = frobenius_norm(&(&rho_fact - &rho_direct));
    Ok(FactorizedForm {
        v,
        a,
        reconstruction_error,
    })
}

/// Explicit witness that the heralded rank cannot exceed the photon count:
/// the reduced density matrix annihilates the orthogonal complement of the
/// span of the measured (coefficient-weighted) interferometer columns.
#[derive(Debug, Clone)]
pub struct RankCertificate {
    /// k₁ × r matrix whose columns are α_s U_{s,l} for the distinct clicked
    /// modes l of the pattern.
    pub spanning_vectors: Array2<C64>,
    /// Orthonormal basis of the complement of the span; every column is an
    /// explicit numerical kernel vector of ρ.
    pub kernel_vectors: Array2<C64>,
    /// ‖ρ z‖ for each kernel vector.
    pub kernel_residuals: Vec<f64>,
    /// k₁ − M when positive, else 0.
    pub kernel_dimension_lower_bound: usize,
    pub numerical_rank: usize,
    pub tolerance: f64,
}

pub fn rank_certificate(
    itf: &Interferometer,
    first_coefficients: &[f64],
    pattern: &DetectionPattern,
    rho: &ReducedDensity,
) -> Result<RankCertificate> {
    let k1 = first_coefficients.len();
    if rho.dim() != k1 {
        return Err(Error::ShapeMismatch(format!(
            "density matrix is {}×{} but the first input has rank {k1}",
            rho.dim(),
            rho.dim()
        )));
    }
    let u = itf.matrix();
    let distinct: Vec<usize> = pattern.multiplicities().iter().map(|&(m, _)| m).collect();
    let mut span = Array2::<C64>::zeros((k1, distinct.len()));
    for (col, &mode) in distinct.iter().enumerate() {
        for s in 0..k1 {
            span[[s, col]] = first_coefficients[s] * u[[s, mode]];
        }
    }
    let kernel_vectors = complement_basis(&span, k1);
    let kernel_residuals: Vec<f64> = (0..kernel_vectors.ncols())
        .map(|j| {
            let z = kernel_vectors.column(j);
            let mut sq = 0.0_f64;
            for i in 0..k1 {
                let mut acc = C64::new(0.0, 0.0);
                for jj in 0..k1 {
                    acc += rho.matrix[[i, jj]] * z[jj];
                }
                sq += acc.norm_sqr();
            }
            sq.sqrt()
        })
        .collect();
    let m = pattern.photons();
    Ok(RankCertificate {
        spanning_vectors: span,
        kernel_vectors,
        kernel_residuals,
        kernel_dimension_lower_bound: k1.saturating_sub(m),
        numerical_rank: numerical_rank(rho, tol::RANK_REL),
        tolerance: tol::RANK_REL,
    })
}

/// Per-outcome entanglement metrics across the first-remainder cut.
#[derive(Debug, Clone)]
pub struct OutcomeMetrics {
    pub pattern: DetectionPattern,
    pub probability: f64,
    pub relevant: bool,
    pub rank: usize,
    pub entropy: f64,
    /// Entropy restricted to the eigenvalues that count toward the rank.
    /// Eigenvalues between the entropy floor and the rank threshold can add
    /// a few nano-nats to `entropy` without changing the rank; this variant
    /// makes entropy ≤ ln(rank) exact.
    pub entropy_ranked: f64,
    pub residual: f64,
    /// Second-largest eigenvalue of ρ; √λ₂ is the second Schmidt coefficient.
    pub second_eigenvalue: f64,
}

/// Metrics for one outcome, or `None` if it carries no heralded state.
/// One eigendecomposition feeds every field.
pub fn outcome_metrics(outcome: &FusionOutcome, k1: usize) -> Result<Option<OutcomeMetrics>> {
    let state = match &outcome.heralded_state {
        Some(s) => s,
        None => return Ok(None),
    };
    let keep = state.subsystems()[0].label.clone();
    let rho = reduced_density(state, &keep)?;
    let w = rho.eigenvalues();
    let lambda_max = w.iter().cloned().fold(0.0_f64, f64::max);
    let rank_floor = tol::RANK_REL * lambda_max;
    let mut rank = 0usize;
    let mut entropy = 0.0_f64;
    let mut entropy_ranked = 0.0_f64;
    for &l in w.iter() {
        if l > tol::ENTROPY_EIG_FLOOR {
            entropy -= l * l.ln();
        }
        if l > rank_floor {
            rank += 1;
            entropy_ranked -= l * l.ln();
        }
    }
    let second = if w.len() >= 2 { w[w.len() - 2] } else { 0.0 };
    Ok(Some(OutcomeMetrics {
        pattern: outcome.pattern.clone(),
        probability: outcome.probability,
        relevant: outcome.relevant,
        rank,
        entropy,
        entropy_ranked,
        residual: scalar_condition_residual(&rho, k1),
        second_eigenvalue: second,
    }))
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub d: usize,
    pub ancillae: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub trial: usize,
    pub pattern: String,
    pub probability: f64,
    pub relevant: bool,
    pub rank: usize,
    pub entropy: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct SweepViolation {
    pub trial: usize,
    pub pattern: String,
    pub what: String,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub photons: usize,
    pub modes: usize,
    pub rows: Vec<SweepRow>,
    pub max_rank: usize,
    pub max_entropy: f64,
    pub min_relevant_residual: f64,
    pub violations: Vec<SweepViolation>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Randomized verification of the rank and product-outcome guarantees.
///
/// Each trial draws a Haar-random interferometer for two maximally entangled
/// d-qudit pairs plus the configured ancillae, fuses, and checks every
/// outcome: rank ≤ photon count, entropy ≤ ln(rank), explicit kernel
/// residuals, probability conservation, and (for two photons) the
/// zero-collision product-state implication. Trials run in parallel with a
/// per-trial derived seed so scheduling cannot change the report.
pub fn theorem_sweep(config: &SweepConfig) -> Result<SweepReport> {
    let scenario = Scenario::bell_pairs(config.d, config.ancillae, 0)?;
    let inputs = scenario.build_inputs()?;
    let layout = crate::fusion::layout_for_inputs(&inputs, 0);
    let modes = layout.total_modes();
    let photons = inputs.len();
    let k1 = inputs[0].rank();

    let trial_results: Result<Vec<(Vec<SweepRow>, Vec<SweepViolation>)>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut sampler = HaarSampler::new(config.seed.wrapping_add(trial as u64));
            let matrix = sampler.sample(modes);
            let itf = Interferometer::new(matrix, layout.clone())?;
            let outcomes = fuse(&inputs, &itf)?;
            sweep_trial(trial, &itf, &inputs, &outcomes, k1, photons)
        })
        .collect();

    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for (r, v) in trial_results? {
        rows.extend(r);
        violations.extend(v);
    }
    let max_rank = rows.iter().map(|r| r.rank).max().unwrap_or(0);
    let max_entropy = rows.iter().map(|r| r.entropy).fold(0.0_f64, f64::max);
    let min_relevant_residual = rows
        .iter()
        .filter(|r| r.relevant)
        .map(|r| r.residual)
        .fold(f64::INFINITY, f64::min);
    Ok(SweepReport {
        config: config.clone(),
        photons,
        modes,
        rows,
        max_rank,
        max_entropy,
        min_relevant_residual,
        violations,
    })
}

fn sweep_trial(
    trial: usize,
    itf: &Interferometer,
    inputs: &[FusionInput],
    outcomes: &[FusionOutcome],
    k1: usize,
    photons: usize,
) -> Result<(Vec<SweepRow>, Vec<SweepViolation>)> {
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut total_probability = 0.0_f64;
    let mut collision_probability = 0.0_f64;
    let mut relevant_all_rank_one = true;
    let alphas = inputs[0].coefficients();

    for outcome in outcomes {
        total_probability += outcome.probability;
        if !outcome.relevant {
            collision_probability += outcome.probability;
        }
        let metrics = match outcome_metrics(outcome, k1)? {
            Some(m) => m,
            None => continue,
        };
        if metrics.relevant && metrics.rank > 1 {
            relevant_all_rank_one = false;
        }
        if metrics.rank > photons {
            violations.push(SweepViolation {
                trial,
                pattern: metrics.pattern.display(),
                what: format!("rank {} exceeds photon count {photons}", metrics.rank),
            });
        }
        if metrics.entropy_ranked > (metrics.rank.max(1) as f64).ln() + 1e-9 {
            violations.push(SweepViolation {
                trial,
                pattern: metrics.pattern.display(),
                what: format!(
                    "entropy {} exceeds ln(rank {})",
                    metrics.entropy_ranked, metrics.rank
                ),
            });
        }
        if k1 > photons {
            let state = outcome.heralded_state.as_ref().unwrap();
            let keep = state.subsystems()[0].label.clone();
            let rho = reduced_density(state, &keep)?;
            let cert = rank_certificate(itf, &alphas, &outcome.pattern, &rho)?;
            if cert.kernel_vectors.ncols() < cert.kernel_dimension_lower_bound {
                violations.push(SweepViolation {
                    trial,
                    pattern: metrics.pattern.display(),
                    what: format!(
                        "kernel basis has {} vectors, bound promises {}",
                        cert.kernel_vectors.ncols(),
                        cert.kernel_dimension_lower_bound
                    ),
                });
            }
            for (i, r) in cert.kernel_residuals.iter().enumerate() {
                if *r >= 1e-9 {
                    violations.push(SweepViolation {
                        trial,
                        pattern: metrics.pattern.display(),
                        what: format!("kernel residual {i} is {r:.3e}"),
                    });
                }
            }
        }
        rows.push(SweepRow {
            trial,
            pattern: metrics.pattern.display(),
            probability: metrics.probability,
            relevant: metrics.relevant,
            rank: metrics.rank,
            entropy: metrics.entropy,
            residual: metrics.residual,
        });
    }

    if (total_probability - 1.0).abs() > 1e-10 {
        violations.push(SweepViolation {
            trial,
            pattern: "-".to_string(),
            what: format!("outcome probabilities sum to {total_probability}"),
        });
    }
    if photons == 2 {
        // Zero collision probability forces every relevant outcome to be a
        // product state, so some product outcome always has weight.
        if collision_probability <= 1e-12 && !relevant_all_rank_one {
            violations.push(SweepViolation {
                trial,
                pattern: "-".to_string(),
                what: "no collision weight yet an entangled relevant outcome exists".into(),
            });
        }
        // Per-mode version: p_kk ≈ 0 ⟹ every (k,l) has a vanishing second
        // Schmidt coefficient.
        let modes = itf.modes();
        for k in 0..modes {
            let pkk = outcomes
                .iter()
                .find(|o| o.pattern.clicks() == [k, k])
                .map(|o| o.probability)
                .unwrap_or(0.0);
            if pkk < 1e-12 {
                for outcome in outcomes.iter().filter(|o| o.relevant) {
                    if !outcome.pattern.clicks().contains(&k) {
                        continue;
                    }
                    if let Some(m) = outcome_metrics(outcome, k1)? {
                        if m.second_eigenvalue.max(0.0).sqrt() >= 1e-6 {
                            violations.push(SweepViolation {
                                trial,
                                pattern: m.pattern.display(),
                                what: format!(
                                    "p_kk≈0 for mode {} but second Schmidt coefficient is {:.3e}",
                                    k + 1,
                                    m.second_eigenvalue.sqrt()
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok((rows, violations))
}

/// Smallest possible ‖ρ − I/k‖_F over density matrices of rank ≤ r, used as
/// an independent floor in tests: √((k−r)/(k·r)).
pub fn min_scalar_residual_at_rank(k: usize, r: usize) -> f64 {
    assert!(r >= 1 && r <= k);
    (((k - r) as f64) / ((k * r) as f64)).sqrt()
}
