//! Experiment execution and CSV emission.
//!
//! Every run writes up to three files derived from `--out`:
//!
//! * the main CSV (`<out>`): curve rows for the tradeoff modes
//!   (`sweep_param,sweep_value,tau_s,metric_name,metric_value,std_error`),
//!   or the mode-specific table for `re_region` / `two_beam`;
//! * a summary CSV (`<stem>.summary.csv`) for the tradeoff modes
//!   (`sweep_value,tau_star_s,objective,ci95_low,ci95_high,feasible`);
//! * a config echo (`<stem>.config.txt`) of all resolved parameters,
//!   which re-fed through `run` reproduces the CSVs byte for byte.
//!
//! Floats are printed in scientific notation with the shortest
//! round-trippable mantissa and a `.` decimal separator; lines end in LF.

use std::path::{Path, PathBuf};

use wipt_core::channel::draw_channel;
use wipt_core::experiment::{self, SummaryStat};
use wipt_core::optimize::min_power_subject_to_rate;
use wipt_core::rng::trial_rng;
use wipt_core::swipt::{
    re_region_power_splitting, re_region_time_division, separated_two_beam_sweep,
};
use wipt_core::units::dbm_to_watts;
use wipt_core::wpc::mean_rate_curve;

use crate::config::{KeyValues, Mode, RunConfig, SweepSetting};
use crate::CliError;

/// Rendered output files, ready to write.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputBundle {
    pub main_csv: String,
    pub summary_csv: Option<String>,
    pub config_echo: String,
}

/// Where the three output files land for a given `--out`.
pub fn output_paths(out: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let stem = match (out.file_stem(), out.extension()) {
        (Some(stem), Some(_)) => out.with_file_name(stem),
        _ => out.to_path_buf(),
    };
    let mut summary = stem.clone().into_os_string();
    summary.push(".summary.csv");
    let mut echo = stem.into_os_string();
    echo.push(".config.txt");
    (out.to_path_buf(), summary.into(), echo.into())
}

fn fmt_float(x: f64) -> String {
    format!("{x:e}")
}

const CURVE_HEADER: &str = "sweep_param,sweep_value,tau_s,metric_name,metric_value,std_error";
const SUMMARY_HEADER: &str = "sweep_value,tau_star_s,objective,ci95_low,ci95_high,feasible";

fn summary_line(sweep_value: &str, tau_star: f64, stat: &SummaryStat, feasible: bool) -> String {
    format!(
        "{},{},{},{},{},{}\n",
        sweep_value,
        fmt_float(tau_star),
        fmt_float(stat.mean),
        fmt_float(stat.ci95_low),
        fmt_float(stat.ci95_high),
        feasible
    )
}

fn run_tradeoff(cfg: &RunConfig) -> Result<OutputBundle, CliError> {
    let spec = cfg.experiment_spec()?;
    let rows = experiment::run(&spec).map_err(CliError::from_core)?;
    let (sweep_param, metric_name) = match (cfg.mode, &cfg.sweep) {
        (Mode::RateTradeoff, Some(SweepSetting::TxPowerDbm(_))) => ("P_w", "rate_bpshz"),
        (Mode::RateTradeoff, _) => ("B", "rate_bpshz"),
        (Mode::EeTradeoff, _) => ("Nt", "ee_bpj"),
        _ => unreachable!("run_tradeoff only handles tradeoff modes"),
    };

    let mut main_csv = String::from(CURVE_HEADER);
    main_csv.push('\n');
    let mut summary_csv = String::from(SUMMARY_HEADER);
    summary_csv.push('\n');
    for row in &rows {
        for pt in &row.result.curve {
            main_csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                sweep_param,
                row.sweep_value,
                fmt_float(pt.tau),
                metric_name,
                fmt_float(pt.value),
                fmt_float(pt.std_error)
            ));
        }
        summary_csv.push_str(&summary_line(
            &row.sweep_value,
            row.tau_star,
            &row.objective,
            row.result.feasible,
        ));
    }
    Ok(OutputBundle {
        main_csv,
        summary_csv: Some(summary_csv),
        config_echo: cfg.echo(),
    })
}

fn run_min_power(cfg: &RunConfig) -> Result<OutputBundle, CliError> {
    let slot = cfg.slot_config()?;
    let csi = slot.csi;
    let n_trials = cfg.n_trials.expect("validated min_power config");
    let bounds = (
        dbm_to_watts(cfg.p_lo_dbm.expect("validated min_power config")),
        dbm_to_watts(cfg.p_hi_dbm.expect("validated min_power config")),
    );
    let r_min = cfg.min_rate_bpshz.expect("validated min_power config");
    let (p_star, result) =
        min_power_subject_to_rate(&slot, csi, r_min, bounds, n_trials, cfg.seed, 1e-3)
            .map_err(CliError::from_core)?;

    // Per-trial statistics at the solved operating point.
    let solved = wipt_core::wpc::SlotConfig {
        tx_power: p_star,
        ..slot
    };
    let at_star = mean_rate_curve(&solved, csi, &[result.tau_star], n_trials, cfg.seed)
        .map_err(CliError::from_core)?;
    let stat = SummaryStat::from_mean_std_error(at_star[0].value, at_star[0].std_error, n_trials);

    let mut main_csv = String::from(CURVE_HEADER);
    main_csv.push('\n');
    let p_label = fmt_float(p_star);
    for pt in &result.curve {
        main_csv.push_str(&format!(
            "P_w,{},{},rate_bpshz,{},{}\n",
            p_label,
            fmt_float(pt.tau),
            fmt_float(pt.value),
            fmt_float(pt.std_error)
        ));
    }
    let mut summary_csv = String::from(SUMMARY_HEADER);
    summary_csv.push('\n');
    summary_csv.push_str(&summary_line(
        &p_label,
        result.tau_star,
        &stat,
        result.feasible,
    ));

    Ok(OutputBundle {
        main_csv,
        summary_csv: Some(summary_csv),
        config_echo: cfg.echo(),
    })
}

fn knob_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| i as f64 / (points - 1) as f64)
        .collect()
}

fn run_re_region(cfg: &RunConfig) -> Result<OutputBundle, CliError> {
    let slot = cfg.slot_config()?;
    let h =
        draw_channel(slot.tx_antennas, &mut trial_rng(cfg.seed, 0)).map_err(CliError::from_core)?;
    let knobs = knob_grid(cfg.knob_grid_points.expect("validated re_region config"));
    let td = re_region_time_division(&h, &slot, &knobs).map_err(CliError::from_core)?;
    let ps = re_region_power_splitting(&h, &slot, &knobs).map_err(CliError::from_core)?;

    let mut main_csv = String::from("protocol,knob,rate_bpshz,energy_j\n");
    for (label, points) in [("time_division", &td), ("power_splitting", &ps)] {
        for pt in points {
            main_csv.push_str(&format!(
                "{},{},{},{}\n",
                label,
                fmt_float(pt.knob),
                fmt_float(pt.rate),
                fmt_float(pt.energy)
            ));
        }
    }
    Ok(OutputBundle {
        main_csv,
        summary_csv: None,
        config_echo: cfg.echo(),
    })
}

fn run_two_beam(cfg: &RunConfig) -> Result<OutputBundle, CliError> {
    let slot = cfg.slot_config()?;
    let mut rng = trial_rng(cfg.seed, 0);
    let h_ir = draw_channel(slot.tx_antennas, &mut rng).map_err(CliError::from_core)?;
    let h_er = draw_channel(slot.tx_antennas, &mut rng).map_err(CliError::from_core)?;
    let strategy = cfg.strategy.expect("validated two_beam config");
    let shares = knob_grid(cfg.knob_grid_points.expect("validated two_beam config"));
    let points = separated_two_beam_sweep(&h_ir, &h_er, &slot, &shares, strategy)
        .map_err(CliError::from_core)?;

    let label = match strategy {
        wipt_core::swipt::TwoBeamStrategy::MrtMrt => "mrt_mrt",
        wipt_core::swipt::TwoBeamStrategy::ZfMrt => "zf_mrt",
    };
    let mut main_csv = String::from("strategy,share,rate_bpshz,secrecy_rate_bpshz,harvested_w\n");
    for pt in &points {
        main_csv.push_str(&format!(
            "{},{},{},{},{}\n",
            label,
            fmt_float(pt.share),
            fmt_float(pt.rate),
            fmt_float(pt.secrecy_rate),
            fmt_float(pt.harvested_power)
        ));
    }
    Ok(OutputBundle {
        main_csv,
        summary_csv: None,
        config_echo: cfg.echo(),
    })
}

/// Runs a validated config to rendered output files.
pub fn execute(cfg: &RunConfig) -> Result<OutputBundle, CliError> {
    match cfg.mode {
        Mode::RateTradeoff | Mode::EeTradeoff => run_tradeoff(cfg),
        Mode::MinPower => run_min_power(cfg),
        Mode::ReRegion => run_re_region(cfg),
        Mode::TwoBeam => run_two_beam(cfg),
    }
}

/// Writes the bundle next to `out`. I/O failures map to exit code 3.
pub fn write_outputs(out: &Path, bundle: &OutputBundle) -> Result<(), CliError> {
    let io_err = |path: &Path, e: std::io::Error| {
        CliError::Io(format!("cannot write {}: {e}", path.display()))
    };
    let (main_path, summary_path, echo_path) = output_paths(out);
    std::fs::write(&main_path, &bundle.main_csv).map_err(|e| io_err(&main_path, e))?;
    if let Some(summary) = &bundle.summary_csv {
        std::fs::write(&summary_path, summary).map_err(|e| io_err(&summary_path, e))?;
    }
    std::fs::write(&echo_path, &bundle.config_echo).map_err(|e| io_err(&echo_path, e))?;
    Ok(())
}

/// The preset configurations exposed by `wipt-sim preset`.
pub fn preset_config(name: &str) -> Result<KeyValues, CliError> {
    let text = match name {
        "fig5" => {
            "mode=rate_tradeoff\nname=fig5\nT_ms=5\nsigma2_dbm=-125\nP_dbm=30\nP0_dbm=30\n\
             theta=0.9\nd_m=10\nnu=4\nNt=4\nNr=4\nseed=42\nsweep_param=B\n\
             sweep_values=0,2,4,full\nn_trials=10000\ntau_grid_points=64\n"
        }
        "fig6" => {
            "mode=ee_tradeoff\nname=fig6\nT_ms=5\nsigma2_dbm=-125\nP_dbm=30\nP0_dbm=30\n\
             theta=0.9\nd_m=50\nnu=4\nNt=100\nNr=100\nseed=42\nrho=0.9\nsweep_param=Nt\n\
             sweep_values=50,100,200\ntau_grid_points=64\n"
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown preset `{other}` (expected fig5 or fig6)"
            )))
        }
    };
    KeyValues::parse(text)
}

/// Applies `--set`/`--seed`/`--trials` on top of a key=value document and
/// builds the final config.
pub fn resolve_config(
    mut kv: KeyValues,
    overrides: &[(String, String)],
    seed: Option<u64>,
    trials: Option<usize>,
) -> Result<RunConfig, CliError> {
    for (key, value) in overrides {
        kv.set(key, value)?;
    }
    if let Some(seed) = seed {
        kv.set("seed", &seed.to_string())?;
    }
    if let Some(trials) = trials {
        kv.set("n_trials", &trials.to_string())?;
    }
    kv.build()
}

/// `wipt-sim preset <name> [--set k=v ...] --out <path>`.
pub fn cmd_preset(
    name: &str,
    overrides: &[(String, String)],
    out: &Path,
    seed: Option<u64>,
    trials: Option<usize>,
) -> Result<(), CliError> {
    let cfg = resolve_config(preset_config(name)?, overrides, seed, trials)?;
    write_outputs(out, &execute(&cfg)?)
}

/// `wipt-sim run --config <path> --out <path>`.
pub fn cmd_run(
    config_path: &Path,
    out: &Path,
    overrides: &[(String, String)],
    seed: Option<u64>,
    trials: Option<usize>,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", config_path.display())))?;
    let cfg = resolve_config(KeyValues::parse(&text)?, overrides, seed, trials)?;
    write_outputs(out, &execute(&cfg)?)
}
