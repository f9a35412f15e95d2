//! The four experiment flows behind the subcommands.

use std::path::Path;

use anyhow::Context;
use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::Serialize;

use quditfuse::analysis::{
    outcome_metrics, reduced_density, scalar_condition_residual, theorem_sweep, SweepConfig,
};
use quditfuse::fusion::fuse;
use quditfuse::linalg::unitarity_error;
use quditfuse::optimize::{optimize, tradeoff_curve, HaarSampler};

use crate::config::{write_unitary_text, OptimizeRunConfig, ScenarioConfig, VerifyConfig};
use crate::report::{fmt_sci, CsvWriter, OutputFormat, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;

type Complex2d = Vec<Vec<(f64, f64)>>;

fn matrix_to_pairs(u: &Array2<C64>) -> Complex2d {
    (0..u.nrows())
        .map(|r| {
            (0..u.ncols())
                .map(|c| (u[[r, c]].re, u[[r, c]].im))
                .collect()
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct OutcomeRow {
    pattern: String,
    probability: f64,
    relevant: bool,
    heralded: bool,
    rank: usize,
    entropy_nats: f64,
    entropy_dits: f64,
    residual: f64,
    /// Scalar-condition residual of the opposite remainder; the two can
    /// differ when the inputs carry unequal Schmidt ranks.
    residual_second: f64,
}

#[derive(Debug, Serialize)]
struct FuseSummary {
    total_probability: f64,
    relevant_probability: f64,
    collision_probability: f64,
    max_rank: usize,
    max_entropy_nats: f64,
    min_relevant_residual: f64,
}

#[derive(Debug, Serialize)]
struct FusePayload {
    modes: usize,
    photons: usize,
    unitary: Complex2d,
    outcomes: Vec<OutcomeRow>,
    summary: FuseSummary,
}

pub fn cmd_fuse(
    config: &ScenarioConfig,
    base_dir: &Path,
    out_dir: &Path,
    format: OutputFormat,
) -> anyhow::Result<i32> {
    let scenario = config.to_scenario()?;
    let inputs = scenario.build_inputs()?;
    let modes = scenario.modes()?;
    let matrix = config.resolve_unitary(modes, base_dir)?;
    let itf = scenario.interferometer(matrix.clone())?;
    let k1 = inputs[0].rank();
    let ln_d = (config.d as f64).ln();

    let outcomes = fuse(&inputs, &itf)?;
    let mut rows = Vec::with_capacity(outcomes.len());
    for outcome in &outcomes {
        let row = match outcome_metrics(outcome, k1)? {
            Some(m) => {
                let state = outcome.heralded_state.as_ref().unwrap();
                let second = &state.subsystems()[1];
                let rho2 = reduced_density(state, &second.label)?;
                let residual_second = scalar_condition_residual(&rho2, second.dim);
                OutcomeRow {
                    pattern: m.pattern.display(),
                    probability: m.probability,
                    relevant: m.relevant,
                    heralded: true,
                    rank: m.rank,
                    entropy_nats: m.entropy,
                    entropy_dits: m.entropy / ln_d,
                    residual: m.residual,
                    residual_second,
                }
            }
            None => OutcomeRow {
                pattern: outcome.pattern.display(),
                probability: outcome.probability,
                relevant: outcome.relevant,
                heralded: false,
                rank: 0,
                entropy_nats: 0.0,
                entropy_dits: 0.0,
                residual: 0.0,
                residual_second: 0.0,
            },
        };
        rows.push(row);
    }
    let summary = FuseSummary {
        total_probability: rows.iter().map(|r| r.probability).sum(),
        relevant_probability: rows
            .iter()
            .filter(|r| r.relevant)
            .map(|r| r.probability)
            .sum(),
        collision_probability: rows
            .iter()
            .filter(|r| !r.relevant)
            .map(|r| r.probability)
            .sum(),
        max_rank: rows.iter().map(|r| r.rank).max().unwrap_or(0),
        max_entropy_nats: rows.iter().map(|r| r.entropy_nats).fold(0.0, f64::max),
        min_relevant_residual: rows
            .iter()
            .filter(|r| r.relevant && r.heralded)
            .map(|r| r.residual)
            .fold(f64::INFINITY, f64::min),
    };
    let payload = FusePayload {
        modes,
        photons: inputs.len(),
        unitary: matrix_to_pairs(&matrix),
        outcomes: rows,
        summary,
    };
    let report = RunReport::new(config.seed, config.clone(), payload);

    if format.json() {
        report.write_json(&out_dir.join("fuse_report.json"))?;
    }
    if format.csv() {
        let mut csv = CsvWriter::new(&[
            "pattern",
            "probability",
            "relevant",
            "heralded",
            "rank",
            "entropy_nats",
            "entropy_dits",
            "residual",
            "residual_second",
        ]);
        for r in &report.payload.outcomes {
            csv.row(&[
                format!("\"{}\"", r.pattern),
                fmt_sci(r.probability),
                r.relevant.to_string(),
                r.heralded.to_string(),
                r.rank.to_string(),
                fmt_sci(r.entropy_nats),
                fmt_sci(r.entropy_dits),
                fmt_sci(r.residual),
                fmt_sci(r.residual_second),
            ]);
        }
        csv.write(&out_dir.join("fuse_outcomes.csv"))?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct VerifyRunSummary {
    d: usize,
    ancillae: usize,
    trials: usize,
    photons: usize,
    modes: usize,
    outcomes_checked: usize,
    max_rank: usize,
    max_entropy_nats: f64,
    min_relevant_residual: f64,
    violations: Vec<ViolationRow>,
}

#[derive(Debug, Clone, Serialize)]
struct ViolationRow {
    d: usize,
    ancillae: usize,
    seed: u64,
    trial: usize,
    pattern: String,
    what: String,
}

#[derive(Debug, Serialize)]
struct VerifyPayload {
    runs: Vec<VerifyRunSummary>,
    total_violations: usize,
    passed: bool,
}

pub fn cmd_verify(
    config: &VerifyConfig,
    out_dir: &Path,
    format: OutputFormat,
    inject_fault: bool,
) -> anyhow::Result<i32> {
    if config.d.is_empty() || config.ancillae.is_empty() {
        anyhow::bail!("verify needs at least one dimension and one ancilla count");
    }
    let mut runs = Vec::new();
    let mut csv = CsvWriter::new(&[
        "d",
        "ancillae",
        "trial",
        "pattern",
        "relevant",
        "probability",
        "rank",
        "entropy_nats",
        "residual",
    ]);
    let mut total_violations = 0usize;
    for &d in &config.d {
        for &ancillae in &config.ancillae {
            let sweep_cfg = SweepConfig {
                d,
                ancillae,
                trials: config.trials,
                seed: config.seed,
            };
            let report = theorem_sweep(&sweep_cfg).context("theorem sweep failed")?;
            for row in &report.rows {
                csv.row(&[
                    d.to_string(),
                    ancillae.to_string(),
                    row.trial.to_string(),
                    format!("\"{}\"", row.pattern),
                    row.relevant.to_string(),
                    fmt_sci(row.probability),
                    row.rank.to_string(),
                    fmt_sci(row.entropy),
                    fmt_sci(row.residual),
                ]);
            }
            let mut violations: Vec<ViolationRow> = report
                .violations
                .iter()
                .map(|v| ViolationRow {
                    d,
                    ancillae,
                    seed: config.seed,
                    trial: v.trial,
                    pattern: v.pattern.clone(),
                    what: v.what.clone(),
                })
                .collect();
            if inject_fault {
                // Negative-path harness: push a deliberately corrupted density
                // matrix through the same rank check the sweep uses.
                let dim = report.photons + 1;
                let corrupted = quditfuse::analysis::ReducedDensity {
                    kept: "V1".to_string(),
                    matrix: Array2::<C64>::eye(dim).mapv(|z| z / dim as f64),
                };
                let rank =
                    quditfuse::analysis::numerical_rank(&corrupted, quditfuse::tol::RANK_REL);
                if rank > report.photons {
                    violations.push(ViolationRow {
                        d,
                        ancillae,
                        seed: config.seed,
                        trial: 0,
                        pattern: "(injected)".to_string(),
                        what: format!(
                            "injected fault: corrupted density matrix has rank {rank} > {}",
                            report.photons
                        ),
                    });
                }
            }
            total_violations += violations.len();
            runs.push(VerifyRunSummary {
                d,
                ancillae,
                trials: config.trials,
                photons: report.photons,
                modes: report.modes,
                outcomes_checked: report.rows.len(),
                max_rank: report.max_rank,
                max_entropy_nats: report.max_entropy,
                min_relevant_residual: report.min_relevant_residual,
                violations,
            });
        }
    }
    let passed = total_violations == 0;
    let payload = VerifyPayload {
        runs,
        total_violations,
        passed,
    };
    let report = RunReport::new(config.seed, config.clone(), payload);
    if format.json() {
        report.write_json(&out_dir.join("verify_report.json"))?;
    }
    if format.csv() {
        csv.write(&out_dir.join("verify_sweep.csv"))?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_VIOLATION })
}

#[derive(Debug, Serialize)]
struct OptimizePayload {
    modes: usize,
    best_value: f64,
    best_restart: usize,
    evaluations: usize,
    best_unitary: Complex2d,
    best_unitarity_error: f64,
    ancilla_states: Vec<Vec<(f64, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tradeoff: Option<Vec<(f64, f64)>>,
}

pub fn cmd_optimize(
    config: &OptimizeRunConfig,
    base_dir: &Path,
    out_dir: &Path,
    format: OutputFormat,
) -> anyhow::Result<i32> {
    let scenario = config.scenario.to_scenario()?;
    let inputs = scenario.build_inputs()?;
    let modes = scenario.modes()?;
    let objective = config.objective.to_objective()?;
    objective.validate(config.scenario.d)?;
    if let Some(thresholds) = &config.thresholds {
        if config.objective.mode != "max-success-above-entropy-threshold" {
            anyhow::bail!("tradeoff thresholds need the entropy-threshold objective mode");
        }
        let cap = (config.scenario.d as f64).ln() + 1e-12;
        for t in thresholds {
            if *t < 0.0 || *t > cap {
                anyhow::bail!("threshold {t} outside [0, ln d]");
            }
        }
    }
    let opt_config = config.optimize_config(base_dir, modes)?;

    let (payload, trace, tradeoff_rows) = match &config.thresholds {
        Some(thresholds) => {
            let curve = tradeoff_curve(&inputs, scenario.vacuum_pads, thresholds, &opt_config)?;
            // Re-run the best threshold's optimization to surface a unitary.
            let best_threshold = curve
                .iter()
                .cloned()
                .fold((f64::NAN, f64::NEG_INFINITY), |acc, p| {
                    if p.1 > acc.1 {
                        p
                    } else {
                        acc
                    }
                })
                .0;
            let best = optimize(
                &inputs,
                scenario.vacuum_pads,
                &quditfuse::optimize::Objective::entropy_above(best_threshold),
                &opt_config,
            )?;
            (
                OptimizePayload {
                    modes,
                    best_value: best.best_value,
                    best_restart: best.best_restart,
                    evaluations: best.evaluations,
                    best_unitary: matrix_to_pairs(&best.best_matrix),
                    best_unitarity_error: unitarity_error(&best.best_matrix),
                    ancilla_states: best
                        .ancilla_states
                        .iter()
                        .map(|s| s.iter().map(|z| (z.re, z.im)).collect())
                        .collect(),
                    tradeoff: Some(curve.clone()),
                },
                best.trace,
                Some(curve),
            )
        }
        None => {
            let result = optimize(&inputs, scenario.vacuum_pads, &objective, &opt_config)?;
            (
                OptimizePayload {
                    modes,
                    best_value: result.best_value,
                    best_restart: result.best_restart,
                    evaluations: result.evaluations,
                    best_unitary: matrix_to_pairs(&result.best_matrix),
                    best_unitarity_error: unitarity_error(&result.best_matrix),
                    ancilla_states: result
                        .ancilla_states
                        .iter()
                        .map(|s| s.iter().map(|z| (z.re, z.im)).collect())
                        .collect(),
                    tradeoff: None,
                },
                result.trace,
                None,
            )
        }
    };

    let best_matrix = {
        let p = &payload.best_unitary;
        let k = p.len();
        let mut m = Array2::<C64>::zeros((k, k));
        for (r, row) in p.iter().enumerate() {
            for (c, &(re, im)) in row.iter().enumerate() {
                m[[r, c]] = C64::new(re, im);
            }
        }
        m
    };
    let report = RunReport::new(config.seed, config.clone(), payload);
    if format.json() {
        report.write_json(&out_dir.join("optimize_report.json"))?;
    }
    if format.csv() {
        match &tradeoff_rows {
            Some(curve) => {
                let mut csv = CsvWriter::new(&["entropy_threshold", "best_success"]);
                for (t, v) in curve {
                    csv.row(&[fmt_sci(*t), fmt_sci(*v)]);
                }
                csv.write(&out_dir.join("tradeoff.csv"))?;
            }
            None => {
                let mut csv = CsvWriter::new(&["evaluation", "value"]);
                for p in &trace {
                    csv.row(&[p.evaluation.to_string(), fmt_sci(p.value)]);
                }
                csv.write(&out_dir.join("optimize_trace.csv"))?;
            }
        }
    }
    write_unitary_text(&out_dir.join("best_unitary.txt"), &best_matrix)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct HaarScanConfigEcho {
    k: usize,
    trials: usize,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct HaarScanPayload {
    mean_abs_u11_sq: f64,
    expected_mean: f64,
    worst_unitarity_error: f64,
}

pub fn cmd_haar_scan(
    k: usize,
    trials: usize,
    seed: u64,
    out_dir: &Path,
    format: OutputFormat,
) -> anyhow::Result<i32> {
    if k == 0 || trials == 0 {
        anyhow::bail!("haar-scan needs k ≥ 1 and trials ≥ 1");
    }
    let mut sampler = HaarSampler::new(seed);
    let mut acc = 0.0_f64;
    let mut worst = 0.0_f64;
    let mut csv = CsvWriter::new(&["sample", "abs_u11_sq"]);
    for t in 0..trials {
        let u = sampler.sample(k);
        let v = u[[0, 0]].norm_sqr();
        acc += v;
        worst = worst.max(unitarity_error(&u));
        csv.row(&[t.to_string(), fmt_sci(v)]);
    }
    let payload = HaarScanPayload {
        mean_abs_u11_sq: acc / trials as f64,
        expected_mean: 1.0 / k as f64,
        worst_unitarity_error: worst,
    };
    let config = HaarScanConfigEcho { k, trials, seed };
    let report = RunReport::new(seed, config, payload);
    if format.json() {
        report.write_json(&out_dir.join("haar_scan_report.json"))?;
    }
    if format.csv() {
        csv.write(&out_dir.join("haar_scan_samples.csv"))?;
    }
    Ok(EXIT_OK)
}
