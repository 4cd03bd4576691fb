//! The wireless-powered-communication slot protocol.
//!
//! Each slot of length `T` starts with a power-transfer phase of duration
//! `tau`: the multi-antenna power transmitter beamforms RF energy at the
//! single-antenna device, which harvests `theta * P * alpha * |h^H w|^2 *
//! tau` Joules (linear harvester; the -125 dBm noise contributes nothing
//! measurable). The device then spends the remaining `T - tau` seconds
//! transmitting at the average power the harvest supports, and the
//! information receiver combines its `Nr` antennas by maximum ratio
//! combining. Rates are per unit bandwidth (bits/s/Hz).
//!
//! Two evaluation paths cover the two array regimes: a Monte Carlo path
//! over fading realizations for traditional array sizes, and a
//! deterministic channel-hardening path (`lsmimo_*`) where the large-array
//! beamforming and combining gains concentrate on their means.

use rayon::prelude::*;

use crate::channel::{apply_csi_error, draw_channel, ChannelVector, CsiModel};
use crate::error::{Error, Result};
use crate::feedback::{generate_codebook, quantize};
use crate::rng::{trial_rng, TrialRng};
use crate::stats;

/// All slot and physical parameters of one link setup.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotConfig {
    /// Slot length `T` in seconds.
    pub slot_duration: f64,
    /// Power-transfer duration `tau` in seconds, `0 <= tau < T`.
    pub transfer_duration: f64,
    /// Transmit power `P` at the power transmitter, Watts.
    pub tx_power: f64,
    /// Constant circuit power `P0`, Watts, drawn for the whole slot.
    pub circuit_power: f64,
    /// RF-to-electric conversion efficiency `theta` in (0, 1].
    pub conversion_efficiency: f64,
    /// Noise power `sigma^2` at the information receiver, Watts.
    pub noise_power: f64,
    /// Power-link path gain `alpha` (linear).
    pub power_link_gain: f64,
    /// Information-link path gain `beta` (linear).
    pub info_link_gain: f64,
    /// Antennas at the power transmitter (`Nt`).
    pub tx_antennas: usize,
    /// Antennas at the information receiver (`Nr`).
    pub rx_antennas: usize,
    /// How the power transmitter learns its channel.
    pub csi: CsiModel,
}

impl SlotConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.slot_duration > 0.0) {
            return Err(Error::domain("slot duration must be positive"));
        }
        if !(0.0..self.slot_duration).contains(&self.transfer_duration) {
            return Err(Error::domain(format!(
                "transfer duration must lie in [0, T), got {} with T = {}",
                self.transfer_duration, self.slot_duration
            )));
        }
        if !(self.tx_power > 0.0) {
            return Err(Error::domain("transmit power must be positive"));
        }
        if !(self.circuit_power >= 0.0) {
            return Err(Error::domain("circuit power must be nonnegative"));
        }
        if !(self.conversion_efficiency > 0.0 && self.conversion_efficiency <= 1.0) {
            return Err(Error::domain("conversion efficiency must lie in (0, 1]"));
        }
        if !(self.noise_power > 0.0) {
            return Err(Error::domain("noise power must be positive"));
        }
        if !(self.power_link_gain > 0.0) || !(self.info_link_gain > 0.0) {
            return Err(Error::domain("path gains must be positive"));
        }
        if self.tx_antennas == 0 || self.rx_antennas == 0 {
            return Err(Error::domain("antenna counts must be >= 1"));
        }
        self.csi.validate()
    }

    /// Copy with a different switching point.
    pub fn with_transfer_duration(&self, tau: f64) -> Self {
        Self {
            transfer_duration: tau,
            ..self.clone()
        }
    }
}

/// What one simulated slot delivered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotOutcome {
    /// Energy harvested in the power phase, Joules.
    pub harvested_energy: f64,
    /// Average transmit power of the information phase, Watts.
    pub avg_tx_power: f64,
    /// Information delivered in the slot, bits per unit bandwidth.
    pub bits: f64,
    /// `bits / T`, bits/s/Hz.
    pub avg_rate: f64,
    /// Total energy drawn by the power transmitter, `P*tau + P0*T`, Joules.
    pub energy_consumed: f64,
}

/// Energy harvested during the power phase: `theta * P * alpha * gain * tau`.
///
/// Linear in each argument.
pub fn harvested_energy(
    tx_power: f64,
    transfer_duration: f64,
    path_gain: f64,
    efficiency: f64,
    beam_gain: f64,
) -> Result<f64> {
    for (name, v) in [
        ("tx_power", tx_power),
        ("transfer_duration", transfer_duration),
        ("path_gain", path_gain),
        ("efficiency", efficiency),
        ("beam_gain", beam_gain),
    ] {
        if !(v >= 0.0) {
            return Err(Error::domain(format!(
                "{name} must be nonnegative, got {v}"
            )));
        }
    }
    Ok(efficiency * tx_power * path_gain * beam_gain * transfer_duration)
}

/// Average transmit power of the information phase: harvested energy spread
/// over the remaining `T - tau` seconds.
pub fn avg_tx_power(harvested: f64, slot_duration: f64, transfer_duration: f64) -> Result<f64> {
    if !(harvested >= 0.0) {
        return Err(Error::domain("harvested energy must be nonnegative"));
    }
    if !(transfer_duration < slot_duration) {
        return Err(Error::domain(format!(
            "no information phase: transfer duration {transfer_duration} >= slot {slot_duration}"
        )));
    }
    Ok(harvested / (slot_duration - transfer_duration))
}

/// Information delivered in the slot from Shannon capacity:
/// `(T - tau) * log2(1 + p * beta * g_gain / sigma^2)` bits per unit bandwidth.
pub fn slot_information(
    info_tx_power: f64,
    info_link_gain: f64,
    combining_gain: f64,
    noise_power: f64,
    slot_duration: f64,
    transfer_duration: f64,
) -> Result<f64> {
    if !(info_tx_power >= 0.0) || !(info_link_gain >= 0.0) || !(combining_gain >= 0.0) {
        return Err(Error::domain("powers and gains must be nonnegative"));
    }
    if !(noise_power > 0.0) {
        return Err(Error::domain("noise power must be positive"));
    }
    if !(transfer_duration < slot_duration) {
        return Err(Error::domain(format!(
            "no information phase: transfer duration {transfer_duration} >= slot {slot_duration}"
        )));
    }
    let snr = info_tx_power * info_link_gain * combining_gain / noise_power;
    Ok((slot_duration - transfer_duration) * (1.0 + snr).log2())
}

/// Full slot pipeline for one realization: harvest -> average power ->
/// Shannon information -> rate. The information receiver applies maximum
/// ratio combining, so the info-channel power gain is `||g||^2`.
pub fn slot_outcome(
    cfg: &SlotConfig,
    power_channel: &ChannelVector,
    info_channel: &ChannelVector,
    beam: &ChannelVector,
) -> Result<SlotOutcome> {
    cfg.validate()?;
    if power_channel.dim() != cfg.tx_antennas || beam.dim() != cfg.tx_antennas {
        return Err(Error::domain(
            "power channel and beam must have dimension Nt",
        ));
    }
    if info_channel.dim() != cfg.rx_antennas {
        return Err(Error::domain("information channel must have dimension Nr"));
    }
    if (beam.norm_sqr() - 1.0).abs() > 1e-9 {
        return Err(Error::domain("beam must be unit-norm"));
    }
    let harvested = harvested_energy(
        cfg.tx_power,
        cfg.transfer_duration,
        cfg.power_link_gain,
        cfg.conversion_efficiency,
        power_channel.beam_power_gain(beam),
    )?;
    let p_info = avg_tx_power(harvested, cfg.slot_duration, cfg.transfer_duration)?;
    let bits = slot_information(
        p_info,
        cfg.info_link_gain,
        info_channel.norm_sqr(),
        cfg.noise_power,
        cfg.slot_duration,
        cfg.transfer_duration,
    )?;
    Ok(SlotOutcome {
        harvested_energy: harvested,
        avg_tx_power: p_info,
        bits,
        avg_rate: bits / cfg.slot_duration,
        energy_consumed: cfg.tx_power * cfg.transfer_duration
            + cfg.circuit_power * cfg.slot_duration,
    })
}

/// Average rate of one slot realization, bits/s/Hz.
pub fn avg_rate_for_slot(
    cfg: &SlotConfig,
    power_channel: &ChannelVector,
    info_channel: &ChannelVector,
    beam: &ChannelVector,
) -> Result<f64> {
    Ok(slot_outcome(cfg, power_channel, info_channel, beam)?.avg_rate)
}

/// The two scalars one fading realization contributes to the rate:
/// the energy-beamforming power gain `|h^H w|^2` (with `w` chosen by the
/// CSI model) and the MRC combining gain `||g||^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialGains {
    pub beam_gain: f64,
    pub combining_gain: f64,
}

/// Draws one trial's channels and resolves the beam per the CSI model.
///
/// Draw order is fixed (power link, information link, then any CSI-model
/// draws) so that the same trial stream yields the same channels no matter
/// which CSI model consumes it; the sweep over feedback amounts then runs
/// on common random numbers.
pub fn draw_trial_gains(cfg: &SlotConfig, csi: CsiModel, rng: &mut TrialRng) -> Result<TrialGains> {
    let h = draw_channel(cfg.tx_antennas, rng)?;
    let g = draw_channel(cfg.rx_antennas, rng)?;
    let beam_gain = match csi {
        CsiModel::Perfect => h.norm_sqr(),
        CsiModel::FeedbackBits(bits) => {
            let cb = generate_codebook(bits, cfg.tx_antennas, rng)?;
            let (_, beam) = quantize(&h, &cb)?;
            h.beam_power_gain(beam)
        }
        CsiModel::TddAccuracy(rho) => {
            let estimate = apply_csi_error(&h, rho, rng)?;
            let beam = estimate.normalized()?;
            h.beam_power_gain(&beam)
        }
    };
    Ok(TrialGains {
        beam_gain,
        combining_gain: g.norm_sqr(),
    })
}

/// Draws the full batch of trial gains, one substream per trial index.
///
/// Trials run in parallel; the result is ordered by trial index, so every
/// downstream reduction is bit-identical regardless of thread count.
pub fn draw_all_trial_gains(
    cfg: &SlotConfig,
    csi: CsiModel,
    n_trials: usize,
    seed: u64,
) -> Result<Vec<TrialGains>> {
    cfg.validate()?;
    csi.validate()?;
    if n_trials == 0 {
        return Err(Error::domain("trial count must be >= 1"));
    }
    (0..n_trials as u64)
        .into_par_iter()
        .map(|t| draw_trial_gains(cfg, csi, &mut trial_rng(seed, t)))
        .collect()
}

/// Slot rate for fixed gains at switching point `tau`, treating both slot
/// ends as their limit value 0 (no harvest at `tau = 0`, no information
/// phase as `tau -> T`).
pub fn rate_from_gains(cfg: &SlotConfig, gains: TrialGains, tau: f64) -> f64 {
    let t = cfg.slot_duration;
    if tau <= 0.0 || tau >= t {
        return 0.0;
    }
    let harvested =
        cfg.conversion_efficiency * cfg.tx_power * cfg.power_link_gain * gains.beam_gain * tau;
    let p_info = harvested / (t - tau);
    let snr = p_info * cfg.info_link_gain * gains.combining_gain / cfg.noise_power;
    (t - tau) * (1.0 + snr).log2() / t
}

/// Monte Carlo mean rate over a batch of trial gains at one `tau`.
pub fn mean_rate_over_gains(cfg: &SlotConfig, gains: &[TrialGains], tau: f64) -> f64 {
    let rates: Vec<f64> = gains
        .iter()
        .map(|&g| rate_from_gains(cfg, g, tau))
        .collect();
    stats::mean(&rates)
}

/// One sampled point of a `tau`-indexed objective curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub tau: f64,
    pub value: f64,
    pub std_error: f64,
}

/// Monte Carlo mean rate across a `tau` grid with common random numbers:
/// every grid point reuses the same channel (and codebook) realizations.
pub fn mean_rate_curve(
    cfg: &SlotConfig,
    csi: CsiModel,
    tau_grid: &[f64],
    n_trials: usize,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    if tau_grid.is_empty() {
        return Err(Error::domain("tau grid must not be empty"));
    }
    for &tau in tau_grid {
        if !(0.0..cfg.slot_duration).contains(&tau) {
            return Err(Error::domain(format!(
                "tau grid point {tau} outside [0, T) with T = {}",
                cfg.slot_duration
            )));
        }
    }
    let gains = draw_all_trial_gains(cfg, csi, n_trials, seed)?;
    Ok(tau_grid
        .iter()
        .map(|&tau| {
            let rates: Vec<f64> = gains
                .iter()
                .map(|&g| rate_from_gains(cfg, g, tau))
                .collect();
            let (mean, std_error) = stats::mean_and_std_error(&rates);
            CurvePoint {
                tau,
                value: mean,
                std_error,
            }
        })
        .collect())
}

/// Deterministic harvested power of the LS-MIMO pipeline, Watts.
///
/// Channel hardening for MRT on a Gauss-Markov estimate: the beamforming
/// gain concentrates on its mean `rho^2 * Nt + (1 - rho^2)`, so the
/// harvested power is `theta * P * alpha * (rho^2 * Nt + (1 - rho^2))`.
pub fn lsmimo_harvested_power(
    tx_power: f64,
    path_gain: f64,
    efficiency: f64,
    tx_antennas: usize,
    accuracy: f64,
) -> Result<f64> {
    if tx_antennas == 0 {
        return Err(Error::domain("antenna count must be >= 1"));
    }
    if !(0.0..=1.0).contains(&accuracy) {
        return Err(Error::domain(format!(
            "CSI accuracy must lie in [0, 1], got {accuracy}"
        )));
    }
    if !(tx_power >= 0.0) || !(path_gain >= 0.0) || !(efficiency >= 0.0) {
        return Err(Error::domain("powers and gains must be nonnegative"));
    }
    let hardened_gain = accuracy * accuracy * tx_antennas as f64 + (1.0 - accuracy * accuracy);
    Ok(efficiency * tx_power * path_gain * hardened_gain)
}

/// Deterministic LS-MIMO information rate, bits/s/Hz: hardening replaces
/// the MRC gain `||g||^2` by its mean `Nr`.
pub fn lsmimo_rate(
    info_tx_power: f64,
    info_link_gain: f64,
    rx_antennas: usize,
    noise_power: f64,
) -> Result<f64> {
    if rx_antennas == 0 {
        return Err(Error::domain("antenna count must be >= 1"));
    }
    if !(info_tx_power >= 0.0) || !(info_link_gain >= 0.0) {
        return Err(Error::domain("powers and gains must be nonnegative"));
    }
    if !(noise_power > 0.0) {
        return Err(Error::domain("noise power must be positive"));
    }
    Ok((1.0 + info_tx_power * info_link_gain * rx_antennas as f64 / noise_power).log2())
}

/// Bits per slot of the deterministic LS-MIMO pipeline at switching point
/// `tau`, with the same endpoint-limit convention as [`rate_from_gains`].
pub fn lsmimo_slot_bits(cfg: &SlotConfig, accuracy: f64, tau: f64) -> Result<f64> {
    let t = cfg.slot_duration;
    if tau <= 0.0 || tau >= t {
        return Ok(0.0);
    }
    let harvest_rate = lsmimo_harvested_power(
        cfg.tx_power,
        cfg.power_link_gain,
        cfg.conversion_efficiency,
        cfg.tx_antennas,
        accuracy,
    )?;
    let p_info = harvest_rate * tau / (t - tau);
    let rate = lsmimo_rate(p_info, cfg.info_link_gain, cfg.rx_antennas, cfg.noise_power)?;
    Ok((t - tau) * rate)
}

/// Energy efficiency in bits per Joule (per unit bandwidth): information
/// delivered over the total energy drawn, `P * tau` in the power amplifier
/// plus the constant circuit power `P0` for the whole slot.
pub fn energy_efficiency(cfg: &SlotConfig, bits_per_slot: f64) -> Result<f64> {
    if !(bits_per_slot >= 0.0) {
        return Err(Error::domain("bits per slot must be nonnegative"));
    }
    let consumed = cfg.tx_power * cfg.transfer_duration + cfg.circuit_power * cfg.slot_duration;
    if !(consumed > 0.0) {
        return Err(Error::domain("total energy consumption must be positive"));
    }
    Ok(bits_per_slot / consumed)
}
