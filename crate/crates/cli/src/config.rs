//! Flat key=value run configurations.
//!
//! One `key=value` per line, `#` starts a comment, unknown or misplaced
//! keys are rejected by name. Units ride on the key names (`T_ms`,
//! `sigma2_dbm`, `d_m`, ...); conversions to SI happen exactly once, when
//! the config is lowered to a [`SlotConfig`].

use std::fmt;

use wipt_core::channel::{path_loss, CsiModel};
use wipt_core::experiment::{ExperimentSpec, Sweep};
use wipt_core::swipt::TwoBeamStrategy;
use wipt_core::units::dbm_to_watts;
use wipt_core::wpc::SlotConfig;

use crate::CliError;

/// What a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Monte Carlo rate-versus-tau tradeoff, optionally swept over B.
    RateTradeoff,
    /// Deterministic LS-MIMO energy-efficiency tradeoff, optionally swept
    /// over Nt.
    EeTradeoff,
    /// Combined-receiver SWIPT rate-energy region (one seeded realization).
    ReRegion,
    /// Separated-case two-beam power-allocation sweep (one realization).
    TwoBeam,
    /// Minimum transmit power meeting a rate floor.
    MinPower,
}

impl Mode {
    fn parse(s: &str) -> Option<Mode> {
        match s {
            "rate_tradeoff" => Some(Mode::RateTradeoff),
            "ee_tradeoff" => Some(Mode::EeTradeoff),
            "re_region" => Some(Mode::ReRegion),
            "two_beam" => Some(Mode::TwoBeam),
            "min_power" => Some(Mode::MinPower),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::RateTradeoff => "rate_tradeoff",
            Mode::EeTradeoff => "ee_tradeoff",
            Mode::ReRegion => "re_region",
            Mode::TwoBeam => "two_beam",
            Mode::MinPower => "min_power",
        })
    }
}

/// The `B` key: a feedback amount in bits, or `full` for ideal CSI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedbackSetting {
    Bits(u32),
    Full,
}

impl FeedbackSetting {
    pub fn to_csi(self) -> CsiModel {
        match self {
            FeedbackSetting::Bits(b) => CsiModel::FeedbackBits(b),
            FeedbackSetting::Full => CsiModel::Perfect,
        }
    }
}

impl fmt::Display for FeedbackSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeedbackSetting::Bits(b) => write!(f, "{b}"),
            FeedbackSetting::Full => f.write_str("full"),
        }
    }
}

/// A validated sweep request.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepSetting {
    Feedback(Vec<FeedbackSetting>),
    /// Transmit powers in dBm (rate tradeoff with a fixed `B`).
    TxPowerDbm(Vec<f64>),
    TxAntennas(Vec<usize>),
}

/// A fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub name: String,
    pub slot_ms: f64,
    pub sigma2_dbm: f64,
    pub p_dbm: f64,
    pub p0_dbm: f64,
    pub theta: f64,
    pub d_m: f64,
    pub nu: f64,
    pub nt: usize,
    pub nr: usize,
    pub seed: u64,
    /// `B` (rate_tradeoff without a sweep, and min_power).
    pub feedback: Option<FeedbackSetting>,
    /// `rho` (ee_tradeoff).
    pub rho: Option<f64>,
    /// Monte Carlo trials (rate_tradeoff, min_power).
    pub n_trials: Option<usize>,
    /// Solver bracketing grid (tradeoff modes).
    pub tau_grid_points: Option<usize>,
    pub sweep: Option<SweepSetting>,
    /// Rate floor in bits/s/Hz (min_power).
    pub min_rate_bpshz: Option<f64>,
    pub p_lo_dbm: Option<f64>,
    pub p_hi_dbm: Option<f64>,
    /// Knob grid for re_region / two_beam.
    pub knob_grid_points: Option<usize>,
    /// Beam strategy (two_beam).
    pub strategy: Option<TwoBeamStrategy>,
    /// Energy-receiver distance in meters (two_beam).
    pub d_er_m: Option<f64>,
}

/// Every key the format knows, with the modes that use it.
const KEY_TABLE: &[(&str, &[Mode])] = &[
    ("mode", ALL_MODES),
    ("name", ALL_MODES),
    ("T_ms", ALL_MODES),
    ("sigma2_dbm", ALL_MODES),
    ("P_dbm", ALL_MODES),
    ("P0_dbm", ALL_MODES),
    ("theta", ALL_MODES),
    ("d_m", ALL_MODES),
    ("nu", ALL_MODES),
    ("Nt", ALL_MODES),
    ("Nr", ALL_MODES),
    ("seed", ALL_MODES),
    ("B", &[Mode::RateTradeoff, Mode::MinPower]),
    ("rho", &[Mode::EeTradeoff]),
    ("n_trials", &[Mode::RateTradeoff, Mode::MinPower]),
    (
        "tau_grid_points",
        &[Mode::RateTradeoff, Mode::EeTradeoff, Mode::MinPower],
    ),
    ("sweep_param", &[Mode::RateTradeoff, Mode::EeTradeoff]),
    ("sweep_values", &[Mode::RateTradeoff, Mode::EeTradeoff]),
    ("R_min_bpshz", &[Mode::MinPower]),
    ("P_lo_dbm", &[Mode::MinPower]),
    ("P_hi_dbm", &[Mode::MinPower]),
    ("knob_grid_points", &[Mode::ReRegion, Mode::TwoBeam]),
    ("strategy", &[Mode::TwoBeam]),
    ("d_er_m", &[Mode::TwoBeam]),
];

const ALL_MODES: &[Mode] = &[
    Mode::RateTradeoff,
    Mode::EeTradeoff,
    Mode::ReRegion,
    Mode::TwoBeam,
    Mode::MinPower,
];

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 10_000;
pub const DEFAULT_TAU_GRID_POINTS: usize = 64;
pub const DEFAULT_KNOB_GRID_POINTS: usize = 101;

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// An ordered key=value list (file order preserved so overrides and echo
/// stay deterministic).
#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    pairs: Vec<(String, String, usize)>,
}

impl KeyValues {
    /// Parses config text. Rejects malformed lines, unknown keys, and
    /// duplicate keys, naming the key and line.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut pairs: Vec<(String, String, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                config_err(format!("line {line_no}: expected key=value, got `{line}`"))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !KEY_TABLE.iter().any(|(k, _)| *k == key) {
                return Err(config_err(format!("line {line_no}: unknown key `{key}`")));
            }
            if pairs.iter().any(|(k, _, _)| k == key) {
                return Err(config_err(format!("line {line_no}: duplicate key `{key}`")));
            }
            pairs.push((key.to_string(), value.to_string(), line_no));
        }
        Ok(Self { pairs })
    }

    /// Sets or replaces a key (used by `--set` overrides and flags).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if !KEY_TABLE.iter().any(|(k, _)| *k == key) {
            return Err(config_err(format!("unknown key `{key}`")));
        }
        if let Some(entry) = self.pairs.iter_mut().find(|(k, _, _)| k == key) {
            entry.1 = value.to_string();
        } else {
            self.pairs.push((key.to_string(), value.to_string(), 0));
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.as_str())
    }

    fn take_required(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| config_err(format!("missing required key `{key}`")))
    }

    /// Builds and validates the typed config.
    pub fn build(&self) -> Result<RunConfig, CliError> {
        let mode_str = self.take_required("mode")?;
        let mode = Mode::parse(mode_str)
            .ok_or_else(|| config_err(format!("unknown mode `{mode_str}`")))?;

        // Keys that some other mode owns are rejected, not ignored.
        for (key, _, line) in &self.pairs {
            let allowed = KEY_TABLE
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, modes)| modes.contains(&mode))
                .unwrap_or(false);
            if !allowed {
                return Err(config_err(format!(
                    "line {line}: key `{key}` is not used by mode {mode}"
                )));
            }
        }

        let parse_f64 = |key: &str| -> Result<f64, CliError> {
            let raw = self.take_required(key)?;
            raw.parse::<f64>()
                .map_err(|_| config_err(format!("key `{key}`: `{raw}` is not a number")))
        };
        let parse_usize_opt = |key: &str| -> Result<Option<usize>, CliError> {
            self.get(key)
                .map(|raw| {
                    raw.parse::<usize>().map_err(|_| {
                        config_err(format!("key `{key}`: `{raw}` is not a nonnegative integer"))
                    })
                })
                .transpose()
        };

        let slot_ms = parse_f64("T_ms")?;
        if !(slot_ms > 0.0) {
            return Err(config_err("key `T_ms`: slot length must be positive"));
        }
        let theta = parse_f64("theta")?;
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(config_err("key `theta`: efficiency must lie in (0, 1]"));
        }
        let d_m = parse_f64("d_m")?;
        let nu = parse_f64("nu")?;
        if !(d_m > 0.0) || !(nu > 0.0) {
            return Err(config_err(
                "keys `d_m`/`nu`: distances and exponents must be positive",
            ));
        }
        let nt = parse_usize_opt("Nt")?.ok_or_else(|| config_err("missing required key `Nt`"))?;
        let nr = parse_usize_opt("Nr")?.ok_or_else(|| config_err("missing required key `Nr`"))?;
        if nt == 0 || nr == 0 {
            return Err(config_err("keys `Nt`/`Nr`: antenna counts must be >= 1"));
        }

        let seed = match self.get("seed") {
            Some(raw) => raw
                .parse::<u64>()
                .map_err(|_| config_err(format!("key `seed`: `{raw}` is not a 64-bit integer")))?,
            None => DEFAULT_SEED,
        };

        let feedback = self
            .get("B")
            .map(|raw| parse_feedback(raw).map_err(|e| config_err(format!("key `B`: {e}"))))
            .transpose()?;

        let rho = self
            .get("rho")
            .map(|raw| {
                let v = raw
                    .parse::<f64>()
                    .map_err(|_| config_err(format!("key `rho`: `{raw}` is not a number")))?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(config_err("key `rho`: accuracy must lie in [0, 1]"));
                }
                Ok(v)
            })
            .transpose()?;

        let sweep = self.parse_sweep(mode)?;

        let mut cfg = RunConfig {
            mode,
            name: self.get("name").unwrap_or(mode_str).to_string(),
            slot_ms,
            sigma2_dbm: parse_f64("sigma2_dbm")?,
            p_dbm: parse_f64("P_dbm")?,
            p0_dbm: parse_f64("P0_dbm")?,
            theta,
            d_m,
            nu,
            nt,
            nr,
            seed,
            feedback,
            rho,
            n_trials: parse_usize_opt("n_trials")?,
            tau_grid_points: parse_usize_opt("tau_grid_points")?,
            sweep,
            min_rate_bpshz: None,
            p_lo_dbm: None,
            p_hi_dbm: None,
            knob_grid_points: parse_usize_opt("knob_grid_points")?,
            strategy: None,
            d_er_m: None,
        };

        match mode {
            Mode::RateTradeoff => {
                match (&cfg.feedback, &cfg.sweep) {
                    (Some(_), Some(SweepSetting::Feedback(_))) => {
                        return Err(config_err("give either `B` or a sweep over B, not both"))
                    }
                    (None, Some(SweepSetting::TxPowerDbm(_))) => return Err(config_err(
                        "missing required key `B` (a power sweep needs a fixed feedback amount)",
                    )),
                    (None, None) => {
                        return Err(config_err("missing required key `B` (or a sweep over B)"))
                    }
                    _ => {}
                }
                cfg.n_trials = Some(cfg.n_trials.unwrap_or(DEFAULT_TRIALS));
                cfg.tau_grid_points = Some(cfg.tau_grid_points.unwrap_or(DEFAULT_TAU_GRID_POINTS));
            }
            Mode::EeTradeoff => {
                if cfg.rho.is_none() {
                    return Err(config_err("missing required key `rho`"));
                }
                cfg.tau_grid_points = Some(cfg.tau_grid_points.unwrap_or(DEFAULT_TAU_GRID_POINTS));
            }
            Mode::MinPower => {
                if cfg.feedback.is_none() {
                    return Err(config_err("missing required key `B`"));
                }
                let r_min = parse_f64("R_min_bpshz")?;
                if !(r_min > 0.0) {
                    return Err(config_err("key `R_min_bpshz`: rate floor must be positive"));
                }
                let p_lo = parse_f64("P_lo_dbm")?;
                let p_hi = parse_f64("P_hi_dbm")?;
                if !(p_lo < p_hi) {
                    return Err(config_err("key `P_lo_dbm` must be below `P_hi_dbm`"));
                }
                cfg.min_rate_bpshz = Some(r_min);
                cfg.p_lo_dbm = Some(p_lo);
                cfg.p_hi_dbm = Some(p_hi);
                cfg.n_trials = Some(cfg.n_trials.unwrap_or(DEFAULT_TRIALS));
                cfg.tau_grid_points = Some(cfg.tau_grid_points.unwrap_or(DEFAULT_TAU_GRID_POINTS));
            }
            Mode::ReRegion => {
                cfg.knob_grid_points =
                    Some(cfg.knob_grid_points.unwrap_or(DEFAULT_KNOB_GRID_POINTS));
            }
            Mode::TwoBeam => {
                let d_er = parse_f64("d_er_m")?;
                if !(d_er > 0.0) {
                    return Err(config_err("key `d_er_m`: distance must be positive"));
                }
                cfg.d_er_m = Some(d_er);
                cfg.strategy = Some(match self.get("strategy") {
                    None | Some("mrt_mrt") => TwoBeamStrategy::MrtMrt,
                    Some("zf_mrt") => TwoBeamStrategy::ZfMrt,
                    Some(other) => {
                        return Err(config_err(format!(
                            "key `strategy`: `{other}` is not one of mrt_mrt, zf_mrt"
                        )))
                    }
                });
                cfg.knob_grid_points =
                    Some(cfg.knob_grid_points.unwrap_or(DEFAULT_KNOB_GRID_POINTS));
            }
        }

        if let Some(n) = cfg.n_trials {
            if n == 0 {
                return Err(config_err("key `n_trials`: must be >= 1"));
            }
        }
        if let Some(g) = cfg.tau_grid_points {
            if g < 3 {
                return Err(config_err("key `tau_grid_points`: must be >= 3"));
            }
        }
        if let Some(g) = cfg.knob_grid_points {
            if g < 2 {
                return Err(config_err("key `knob_grid_points`: must be >= 2"));
            }
        }

        Ok(cfg)
    }

    fn parse_sweep(&self, mode: Mode) -> Result<Option<SweepSetting>, CliError> {
        let param = self.get("sweep_param");
        let values = self.get("sweep_values");
        match (param, values) {
            (None, None) => Ok(None),
            (Some(_), None) => Err(config_err("missing required key `sweep_values`")),
            (None, Some(_)) => Err(config_err("missing required key `sweep_param`")),
            (Some(param), Some(values)) => {
                let items: Vec<&str> = values
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .collect();
                if items.is_empty() {
                    return Err(config_err("key `sweep_values`: list is empty"));
                }
                match (param, mode) {
                    ("B", Mode::RateTradeoff) => {
                        let list = items
                            .iter()
                            .map(|s| {
                                parse_feedback(s)
                                    .map_err(|e| config_err(format!("key `sweep_values`: {e}")))
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(Some(SweepSetting::Feedback(list)))
                    }
                    ("P_dbm", Mode::RateTradeoff) => {
                        let list = items
                            .iter()
                            .map(|s| {
                                s.parse::<f64>().map_err(|_| {
                                    config_err(format!(
                                        "key `sweep_values`: `{s}` is not a power in dBm"
                                    ))
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(Some(SweepSetting::TxPowerDbm(list)))
                    }
                    ("Nt", Mode::EeTradeoff) => {
                        let list = items
                            .iter()
                            .map(|s| {
                                s.parse::<usize>()
                                    .map_err(|_| {
                                        config_err(format!(
                                            "key `sweep_values`: `{s}` is not an antenna count"
                                        ))
                                    })
                                    .and_then(|n| {
                                        if n == 0 {
                                            Err(config_err(
                                                "key `sweep_values`: antenna counts must be >= 1",
                                            ))
                                        } else {
                                            Ok(n)
                                        }
                                    })
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(Some(SweepSetting::TxAntennas(list)))
                    }
                    (other, _) => Err(config_err(format!(
                        "key `sweep_param`: `{other}` cannot be swept in mode {mode}"
                    ))),
                }
            }
        }
    }
}

fn parse_feedback(raw: &str) -> Result<FeedbackSetting, String> {
    if raw == "full" {
        return Ok(FeedbackSetting::Full);
    }
    raw.parse::<u32>()
        .map(FeedbackSetting::Bits)
        .map_err(|_| format!("`{raw}` is not a feedback amount (bits or `full`)"))
}

impl RunConfig {
    /// Parses config text straight to a validated run description.
    pub fn from_text(text: &str) -> Result<Self, CliError> {
        KeyValues::parse(text)?.build()
    }

    pub fn slot_seconds(&self) -> f64 {
        self.slot_ms * 1e-3
    }

    /// Lowers the config to the physical slot description. For
    /// [`Mode::TwoBeam`] the power-link gain is the energy receiver's
    /// (distance `d_er_m`) and the info-link gain the information
    /// receiver's (distance `d_m`).
    pub fn slot_config(&self) -> Result<SlotConfig, CliError> {
        let info_gain = path_loss(self.d_m, self.nu).map_err(CliError::from_core)?;
        let power_gain = match self.mode {
            Mode::TwoBeam => {
                let d_er = self.d_er_m.expect("validated two_beam config");
                path_loss(d_er, self.nu).map_err(CliError::from_core)?
            }
            _ => info_gain,
        };
        let csi = match self.mode {
            Mode::EeTradeoff => CsiModel::TddAccuracy(self.rho.expect("validated ee config")),
            _ => match (&self.feedback, &self.sweep) {
                (Some(b), _) => b.to_csi(),
                // Swept runs override per value; seat the first one.
                (None, Some(SweepSetting::Feedback(list))) => list[0].to_csi(),
                _ => CsiModel::Perfect,
            },
        };
        let cfg = SlotConfig {
            slot_duration: self.slot_seconds(),
            transfer_duration: 0.0,
            tx_power: dbm_to_watts(self.p_dbm),
            circuit_power: dbm_to_watts(self.p0_dbm),
            conversion_efficiency: self.theta,
            noise_power: dbm_to_watts(self.sigma2_dbm),
            power_link_gain: power_gain,
            info_link_gain: info_gain,
            tx_antennas: self.nt,
            rx_antennas: self.nr,
            csi,
        };
        cfg.validate().map_err(CliError::from_core)?;
        Ok(cfg)
    }

    /// Lowers a tradeoff-mode config to an experiment description.
    pub fn experiment_spec(&self) -> Result<ExperimentSpec, CliError> {
        let base = self.slot_config()?;
        let sweep = match self.mode {
            Mode::RateTradeoff => match &self.sweep {
                Some(SweepSetting::Feedback(list)) => {
                    Sweep::Feedback(list.iter().map(|f| f.to_csi()).collect())
                }
                Some(SweepSetting::TxPowerDbm(list)) => {
                    Sweep::TxPower(list.iter().map(|&dbm| dbm_to_watts(dbm)).collect())
                }
                None => {
                    Sweep::Feedback(vec![self.feedback.expect("validated rate config").to_csi()])
                }
                Some(SweepSetting::TxAntennas(_)) => {
                    return Err(config_err("rate tradeoff cannot sweep Nt"))
                }
            },
            Mode::EeTradeoff => match &self.sweep {
                Some(SweepSetting::TxAntennas(list)) => Sweep::TxAntennas(list.clone()),
                None => Sweep::TxAntennas(vec![self.nt]),
                Some(_) => return Err(config_err("EE tradeoff can only sweep Nt")),
            },
            other => {
                return Err(config_err(format!(
                    "mode {other} does not define an experiment sweep"
                )))
            }
        };
        Ok(ExperimentSpec {
            name: self.name.clone(),
            base,
            sweep,
            n_trials: self.n_trials.unwrap_or(1),
            seed: self.seed,
            tau_grid_points: self.tau_grid_points.unwrap_or(DEFAULT_TAU_GRID_POINTS),
        })
    }

    /// Canonical key=value serialization of every resolved parameter.
    /// Re-parsing the echo reproduces this config exactly.
    pub fn echo(&self) -> String {
        let mut out = String::from("# wipt-sim resolved configuration\n");
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        push("mode", self.mode.to_string());
        push("name", self.name.clone());
        push("T_ms", fmt_plain(self.slot_ms));
        push("sigma2_dbm", fmt_plain(self.sigma2_dbm));
        push("P_dbm", fmt_plain(self.p_dbm));
        push("P0_dbm", fmt_plain(self.p0_dbm));
        push("theta", fmt_plain(self.theta));
        push("d_m", fmt_plain(self.d_m));
        push("nu", fmt_plain(self.nu));
        push("Nt", self.nt.to_string());
        push("Nr", self.nr.to_string());
        push("seed", self.seed.to_string());
        if let Some(b) = self.feedback {
            push("B", b.to_string());
        }
        if let Some(rho) = self.rho {
            push("rho", fmt_plain(rho));
        }
        match &self.sweep {
            Some(SweepSetting::Feedback(list)) => {
                push("sweep_param", "B".to_string());
                let values: Vec<String> = list.iter().map(|f| f.to_string()).collect();
                push("sweep_values", values.join(","));
            }
            Some(SweepSetting::TxPowerDbm(list)) => {
                push("sweep_param", "P_dbm".to_string());
                let values: Vec<String> = list.iter().map(|&p| fmt_plain(p)).collect();
                push("sweep_values", values.join(","));
            }
            Some(SweepSetting::TxAntennas(list)) => {
                push("sweep_param", "Nt".to_string());
                let values: Vec<String> = list.iter().map(|n| n.to_string()).collect();
                push("sweep_values", values.join(","));
            }
            None => {}
        }
        if let Some(n) = self.n_trials {
            push("n_trials", n.to_string());
        }
        if let Some(g) = self.tau_grid_points {
            push("tau_grid_points", g.to_string());
        }
        if let Some(r) = self.min_rate_bpshz {
            push("R_min_bpshz", fmt_plain(r));
        }
        if let Some(p) = self.p_lo_dbm {
            push("P_lo_dbm", fmt_plain(p));
        }
        if let Some(p) = self.p_hi_dbm {
            push("P_hi_dbm", fmt_plain(p));
        }
        if let Some(g) = self.knob_grid_points {
            push("knob_grid_points", g.to_string());
        }
        if let Some(s) = self.strategy {
            push(
                "strategy",
                match s {
                    TwoBeamStrategy::MrtMrt => "mrt_mrt".to_string(),
                    TwoBeamStrategy::ZfMrt => "zf_mrt".to_string(),
                },
            );
        }
        if let Some(d) = self.d_er_m {
            push("d_er_m", fmt_plain(d));
        }
        out
    }
}

/// Shortest round-trip decimal form (`Display` for f64 never emits a
/// locale-dependent separator).
fn fmt_plain(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    const RATE_CONFIG: &str = "\
# traditional array at 10 m
mode = rate_tradeoff
T_ms = 5
sigma2_dbm = -125
P_dbm = 30
P0_dbm = 30
theta = 0.9
d_m = 10
nu = 4
Nt = 4
Nr = 4
B = 2
n_trials = 100
seed = 7
";

    #[test]
    fn parses_a_minimal_rate_config() {
        let cfg = RunConfig::from_text(RATE_CONFIG).unwrap();
        assert_eq!(cfg.mode, Mode::RateTradeoff);
        assert_eq!(cfg.feedback, Some(FeedbackSetting::Bits(2)));
        assert_eq!(cfg.n_trials, Some(100));
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.tau_grid_points, Some(DEFAULT_TAU_GRID_POINTS));
        let slot = cfg.slot_config().unwrap();
        assert!((slot.power_link_gain - 1e-6).abs() < 1e-20);
        assert!((slot.slot_duration - 5e-3).abs() < 1e-18);
    }

    #[test]
    fn missing_required_key_is_named() {
        let text = RATE_CONFIG.replace("sigma2_dbm = -125\n", "");
        let err = RunConfig::from_text(&text).unwrap_err();
        assert!(err.to_string().contains("sigma2_dbm"), "{err}");
    }

    #[test]
    fn unknown_key_is_named_with_line() {
        let text = format!("{RATE_CONFIG}богус_key = 1\n");
        let err = RunConfig::from_text(&text).unwrap_err();
        assert!(err.to_string().contains("богус_key"), "{err}");
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let text = format!("{RATE_CONFIG}B = 4\n");
        let err = RunConfig::from_text(&text).unwrap_err();
        assert!(err.to_string().contains("duplicate key `B`"), "{err}");
    }

    #[test]
    fn key_from_wrong_mode_is_rejected() {
        let text = format!("{RATE_CONFIG}rho = 0.9\n");
        let err = RunConfig::from_text(&text).unwrap_err();
        assert!(err.to_string().contains("`rho`"), "{err}");
        assert!(err.to_string().contains("rate_tradeoff"), "{err}");
    }

    #[test]
    fn sweep_replaces_single_feedback() {
        let text = RATE_CONFIG.replace("B = 2\n", "sweep_param = B\nsweep_values = 0, 2, full\n");
        let cfg = RunConfig::from_text(&text).unwrap();
        assert_eq!(
            cfg.sweep,
            Some(SweepSetting::Feedback(vec![
                FeedbackSetting::Bits(0),
                FeedbackSetting::Bits(2),
                FeedbackSetting::Full,
            ]))
        );
        let spec = cfg.experiment_spec().unwrap();
        assert_eq!(
            spec.sweep,
            Sweep::Feedback(vec![
                CsiModel::FeedbackBits(0),
                CsiModel::FeedbackBits(2),
                CsiModel::Perfect,
            ])
        );
    }

    #[test]
    fn sweep_and_single_b_conflict() {
        let text = format!("{RATE_CONFIG}sweep_param = B\nsweep_values = 0,2\n");
        assert!(RunConfig::from_text(&text).is_err());
    }

    #[test]
    fn power_sweep_needs_a_fixed_feedback_amount() {
        let with_b = format!("{RATE_CONFIG}sweep_param = P_dbm\nsweep_values = 10,20,30\n");
        let cfg = RunConfig::from_text(&with_b).unwrap();
        assert_eq!(
            cfg.sweep,
            Some(SweepSetting::TxPowerDbm(vec![10.0, 20.0, 30.0]))
        );
        let spec = cfg.experiment_spec().unwrap();
        match spec.sweep {
            Sweep::TxPower(watts) => {
                assert!((watts[0] - 1e-2).abs() < 1e-15);
                assert!((watts[2] - 1.0).abs() < 1e-15);
            }
            other => panic!("unexpected sweep {other:?}"),
        }
        let without_b = with_b.replace("B = 2\n", "");
        let err = RunConfig::from_text(&without_b).unwrap_err();
        assert!(err.to_string().contains("`B`"), "{err}");
    }

    #[test]
    fn echo_round_trips() {
        for text in [
            RATE_CONFIG.to_string(),
            RATE_CONFIG.replace("B = 2\n", "sweep_param=B\nsweep_values=0,2,4,full\n"),
            format!("{RATE_CONFIG}sweep_param=P_dbm\nsweep_values=10,20,30\n"),
            "mode=ee_tradeoff\nT_ms=5\nsigma2_dbm=-125\nP_dbm=30\nP0_dbm=30\ntheta=0.9\n\
             d_m=50\nnu=4\nNt=100\nNr=100\nrho=0.9\nsweep_param=Nt\nsweep_values=50,100,200\n"
                .to_string(),
            "mode=two_beam\nT_ms=5\nsigma2_dbm=-125\nP_dbm=30\nP0_dbm=30\ntheta=0.9\n\
             d_m=10\nnu=4\nNt=4\nNr=4\nd_er_m=5\nstrategy=zf_mrt\n"
                .to_string(),
            "mode=min_power\nT_ms=5\nsigma2_dbm=-125\nP_dbm=30\nP0_dbm=30\ntheta=0.9\n\
             d_m=10\nnu=4\nNt=4\nNr=4\nB=2\nR_min_bpshz=5\nP_lo_dbm=-10\nP_hi_dbm=40\n"
                .to_string(),
        ] {
            let cfg = RunConfig::from_text(&text).unwrap();
            let echoed = RunConfig::from_text(&cfg.echo()).unwrap();
            assert_eq!(cfg, echoed);
            assert_eq!(cfg.echo(), echoed.echo());
        }
    }

    #[test]
    fn re_region_defaults() {
        let text = "mode=re_region\nT_ms=5\nsigma2_dbm=-125\nP_dbm=30\nP0_dbm=30\ntheta=0.9\n\
                    d_m=10\nnu=4\nNt=4\nNr=4\n";
        let cfg = RunConfig::from_text(text).unwrap();
        assert_eq!(cfg.knob_grid_points, Some(DEFAULT_KNOB_GRID_POINTS));
        assert_eq!(cfg.seed, DEFAULT_SEED);
        assert_eq!(cfg.n_trials, None);
    }

    #[test]
    fn ee_mode_requires_rho() {
        let text = "mode=ee_tradeoff\nT_ms=5\nsigma2_dbm=-125\nP_dbm=30\nP0_dbm=30\ntheta=0.9\n\
                    d_m=50\nnu=4\nNt=100\nNr=100\n";
        let err = RunConfig::from_text(text).unwrap_err();
        assert!(err.to_string().contains("`rho`"), "{err}");
    }

    #[test]
    fn overrides_replace_values() {
        let mut kv = KeyValues::parse(RATE_CONFIG).unwrap();
        kv.set("seed", "99").unwrap();
        kv.set("tau_grid_points", "32").unwrap();
        let cfg = kv.build().unwrap();
        assert_eq!(cfg.seed, 99);
        assert_eq!(cfg.tau_grid_points, Some(32));
        assert!(kv.set("nope", "1").is_err());
    }
}
