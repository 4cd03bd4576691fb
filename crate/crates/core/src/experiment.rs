//! Seeded experiment runner and the two reference presets.
//!
//! A spec names a base slot configuration, the parameter being swept, the
//! trial budget, and the master seed. Every sweep value is solved with the
//! same seed, so the whole table rides on common random numbers and two
//! runs of the same spec are bit-identical.

use crate::channel::{path_loss, CsiModel};
use crate::error::{Error, Result};
use crate::optimize::{
    optimize_tau_ee_with_bracket, optimize_tau_rate_with_bracket, TradeoffResult,
};
use crate::stats;
use crate::units::dbm_to_watts;
use crate::wpc::{mean_rate_curve, SlotConfig};

/// Relative `tau` tolerance handed to the solvers.
pub const TAU_TOL_REL: f64 = 1e-6;

/// The parameter a run sweeps over.
#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    /// CSI feedback settings for the traditional-array rate tradeoff.
    Feedback(Vec<CsiModel>),
    /// Transmit powers in Watts for the rate tradeoff (CSI fixed by the
    /// base config).
    TxPower(Vec<f64>),
    /// Power-transmitter antenna counts for the LS-MIMO energy-efficiency
    /// tradeoff (requires `CsiModel::TddAccuracy` in the base config).
    TxAntennas(Vec<usize>),
}

/// A complete description of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub base: SlotConfig,
    pub sweep: Sweep,
    pub n_trials: usize,
    pub seed: u64,
    /// Points in the solver's coarse `tau` grid (also the emitted curve).
    pub tau_grid_points: usize,
}

/// Mean with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStat {
    pub mean: f64,
    pub std_error: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub n: usize,
}

impl SummaryStat {
    pub fn from_samples(samples: &[f64]) -> Self {
        let (mean, std_error) = stats::mean_and_std_error(samples);
        Self::from_mean_std_error(mean, std_error, samples.len())
    }

    pub fn from_mean_std_error(mean: f64, std_error: f64, n: usize) -> Self {
        Self {
            mean,
            std_error,
            ci95_low: mean - 1.96 * std_error,
            ci95_high: mean + 1.96 * std_error,
            n,
        }
    }
}

/// One row of an experiment table: a sweep value, its optimal switching
/// point, the objective statistics, and the full solve it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Human-readable sweep value ("0", "2", "full", "100", ...).
    pub sweep_value: String,
    pub tau_star: f64,
    pub objective: SummaryStat,
    pub result: TradeoffResult,
}

fn csi_label(csi: CsiModel) -> String {
    match csi {
        CsiModel::Perfect => "full".to_string(),
        CsiModel::FeedbackBits(b) => b.to_string(),
        CsiModel::TddAccuracy(rho) => format!("rho{rho}"),
    }
}

fn rate_row(
    cfg: &SlotConfig,
    csi: CsiModel,
    sweep_value: String,
    spec: &ExperimentSpec,
    tol: f64,
) -> Result<SweepRow> {
    csi.validate()?;
    let result = optimize_tau_rate_with_bracket(
        cfg,
        csi,
        spec.n_trials,
        spec.seed,
        tol,
        spec.tau_grid_points,
    )?;
    let at_star = mean_rate_curve(cfg, csi, &[result.tau_star], spec.n_trials, spec.seed)?;
    let objective =
        SummaryStat::from_mean_std_error(at_star[0].value, at_star[0].std_error, spec.n_trials);
    Ok(SweepRow {
        sweep_value,
        tau_star: result.tau_star,
        objective,
        result,
    })
}

/// Runs the experiment: one tradeoff solve per sweep value.
///
/// Rate sweeps report the Monte Carlo mean rate at `tau_star` with its
/// standard error across trials; the deterministic LS-MIMO sweep reports
/// the exact optimum with zero standard error.
pub fn run(spec: &ExperimentSpec) -> Result<Vec<SweepRow>> {
    spec.base.validate()?;
    if spec.n_trials == 0 {
        return Err(Error::config("experiment needs n_trials >= 1"));
    }
    if spec.tau_grid_points < 3 {
        return Err(Error::config("tau grid needs at least 3 points"));
    }
    let tol = TAU_TOL_REL * spec.base.slot_duration;
    match &spec.sweep {
        Sweep::Feedback(settings) => {
            if settings.is_empty() {
                return Err(Error::config("feedback sweep list is empty"));
            }
            settings
                .iter()
                .map(|&csi| rate_row(&spec.base, csi, csi_label(csi), spec, tol))
                .collect()
        }
        Sweep::TxPower(powers) => {
            if powers.is_empty() {
                return Err(Error::config("transmit-power sweep list is empty"));
            }
            powers
                .iter()
                .map(|&p| {
                    if !(p > 0.0) {
                        return Err(Error::config(format!(
                            "transmit power must be positive, got {p}"
                        )));
                    }
                    let cfg = SlotConfig {
                        tx_power: p,
                        ..spec.base.clone()
                    };
                    rate_row(&cfg, cfg.csi, format!("{p}"), spec, tol)
                })
                .collect()
        }
        Sweep::TxAntennas(antennas) => {
            if antennas.is_empty() {
                return Err(Error::config("antenna sweep list is empty"));
            }
            let rho = match spec.base.csi {
                CsiModel::TddAccuracy(rho) => rho,
                other => {
                    return Err(Error::config(format!(
                        "antenna sweep needs a TDD-accuracy CSI model, got {other:?}"
                    )))
                }
            };
            antennas
                .iter()
                .map(|&nt| {
                    let cfg = SlotConfig {
                        tx_antennas: nt,
                        ..spec.base.clone()
                    };
                    let result =
                        optimize_tau_ee_with_bracket(&cfg, rho, tol, spec.tau_grid_points)?;
                    let objective = SummaryStat::from_mean_std_error(result.objective_star, 0.0, 1);
                    Ok(SweepRow {
                        sweep_value: nt.to_string(),
                        tau_star: result.tau_star,
                        objective,
                        result,
                    })
                })
                .collect()
        }
    }
}

/// Shared physical constants of both presets: T = 5 ms slots, -125 dBm
/// noise, 0.9 conversion efficiency, 30 dBm circuit power, 30 dBm transmit
/// power, path-loss exponent 4.
fn preset_base(distance_m: f64, nt: usize, nr: usize, csi: CsiModel) -> SlotConfig {
    let gain = path_loss(distance_m, 4.0).expect("preset distance is positive");
    SlotConfig {
        slot_duration: 5e-3,
        transfer_duration: 0.0,
        tx_power: dbm_to_watts(30.0),
        circuit_power: dbm_to_watts(30.0),
        conversion_efficiency: 0.9,
        noise_power: dbm_to_watts(-125.0),
        power_link_gain: gain,
        info_link_gain: gain,
        tx_antennas: nt,
        rx_antennas: nr,
        csi,
    }
}

/// Default master seed of the presets.
pub const PRESET_SEED: u64 = 42;

/// Rate-versus-feedback preset: 4x4 arrays at 10 m, feedback amounts
/// 0, 2, 4 bits and the full-CSI ideal, 1e4 trials.
pub fn preset_fig5() -> ExperimentSpec {
    ExperimentSpec {
        name: "fig5".to_string(),
        base: preset_base(10.0, 4, 4, CsiModel::FeedbackBits(0)),
        sweep: Sweep::Feedback(vec![
            CsiModel::FeedbackBits(0),
            CsiModel::FeedbackBits(2),
            CsiModel::FeedbackBits(4),
            CsiModel::Perfect,
        ]),
        n_trials: 10_000,
        seed: PRESET_SEED,
        tau_grid_points: 64,
    }
}

/// Energy-efficiency-versus-antennas preset: LS-MIMO at 50 m with CSI
/// accuracy 0.9, Nr = 100, sweeping Nt over 50, 100, 200. Deterministic
/// (channel hardening), so a single trial.
pub fn preset_fig6() -> ExperimentSpec {
    ExperimentSpec {
        name: "fig6".to_string(),
        base: preset_base(50.0, 100, 100, CsiModel::TddAccuracy(0.9)),
        sweep: Sweep::TxAntennas(vec![50, 100, 200]),
        n_trials: 1,
        seed: PRESET_SEED,
        tau_grid_points: 64,
    }
}
