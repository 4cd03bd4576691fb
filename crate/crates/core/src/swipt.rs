//! SWIPT rate-energy regions and the separated-case two-beam sweep.
//!
//! Combined case: one node both decodes and harvests, with the slot shared
//! either in time (time division) or in power (power splitting). The MRT
//! beam on the combined receiver's channel is optimal for both roles, so a
//! realization is summarized by `||h||^2`.
//!
//! Separated case: distinct information and energy receivers; the energy
//! receiver doubles as the eavesdropper. The transmitter splits its power
//! between an information beam and an energy beam. The energy beam carries
//! a publicly known waveform the eavesdropper can cancel, so only the
//! information beam leaks.

use crate::channel::ChannelVector;
use crate::error::{Error, Result};
use crate::wpc::SlotConfig;

/// One point of a rate-energy frontier, tagged with the protocol knob
/// (time fraction, split ratio, or beam-power share) that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct REPoint {
    /// Information rate, bits/s/Hz.
    pub rate: f64,
    /// Energy harvested per slot, Joules.
    pub energy: f64,
    /// Protocol parameter in [0, 1].
    pub knob: f64,
}

fn check_knobs(knobs: &[f64]) -> Result<()> {
    for &k in knobs {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::domain(format!(
                "protocol knob must lie in [0, 1], got {k}"
            )));
        }
    }
    Ok(())
}

fn combined_link(h: &ChannelVector, cfg: &SlotConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    if h.dim() != cfg.tx_antennas {
        return Err(Error::domain(
            "combined-receiver channel must have dimension Nt",
        ));
    }
    // MRT beam: received power gain ||h||^2 for decoding and harvesting.
    let snr = cfg.tx_power * cfg.power_link_gain * h.norm_sqr() / cfg.noise_power;
    let max_energy = cfg.conversion_efficiency
        * cfg.tx_power
        * cfg.power_link_gain
        * h.norm_sqr()
        * cfg.slot_duration;
    Ok((snr, max_energy))
}

/// Time-division rate-energy region: fraction `f` of the slot decodes,
/// the rest harvests. `rate = f * log2(1 + S)`, `energy = (1 - f) * E_max`.
pub fn re_region_time_division(
    h: &ChannelVector,
    cfg: &SlotConfig,
    fractions: &[f64],
) -> Result<Vec<REPoint>> {
    check_knobs(fractions)?;
    let (snr, max_energy) = combined_link(h, cfg)?;
    let max_rate = (1.0 + snr).log2();
    Ok(fractions
        .iter()
        .map(|&f| REPoint {
            rate: f * max_rate,
            energy: (1.0 - f) * max_energy,
            knob: f,
        })
        .collect())
}

/// Power-splitting rate-energy region: fraction `lambda` of the received
/// power feeds the decoder. `rate = log2(1 + lambda * S)`,
/// `energy = (1 - lambda) * E_max`. All receiver noise enters the decoder
/// branch unscaled.
pub fn re_region_power_splitting(
    h: &ChannelVector,
    cfg: &SlotConfig,
    splits: &[f64],
) -> Result<Vec<REPoint>> {
    check_knobs(splits)?;
    let (snr, max_energy) = combined_link(h, cfg)?;
    Ok(splits
        .iter()
        .map(|&lambda| REPoint {
            rate: (1.0 + lambda * snr).log2(),
            energy: (1.0 - lambda) * max_energy,
            knob: lambda,
        })
        .collect())
}

/// How the information beam is pointed in the separated case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoBeamStrategy {
    /// Information beam is MRT on the information channel.
    MrtMrt,
    /// Information beam is the information channel projected onto the
    /// null space of the energy receiver's channel (zero leakage).
    ZfMrt,
}

/// One point of the separated-case power-allocation sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBeamPoint {
    /// Information rate, bits/s/Hz.
    pub rate: f64,
    /// `max(0, rate - eavesdropper rate)`, bits/s/Hz.
    pub secrecy_rate: f64,
    /// Power harvested by the energy receiver, Watts.
    pub harvested_power: f64,
    /// Fraction of transmit power on the information beam.
    pub share: f64,
}

/// Projects `v` onto the orthogonal complement of `reference` and
/// normalizes: the zero-forcing information beam. Two projection passes
/// keep the residual alignment at the double-precision floor.
pub fn zero_forcing_beam(v: &ChannelVector, reference: &ChannelVector) -> Result<ChannelVector> {
    let ref_norm_sqr = reference.norm_sqr();
    let mut out = v.clone();
    for _ in 0..2 {
        let coeff = reference.inner(&out) / ref_norm_sqr;
        out = ChannelVector::new(
            out.entries()
                .iter()
                .zip(reference.entries())
                .map(|(o, r)| o - coeff * r)
                .collect(),
        )?;
    }
    if out.norm() <= 1e-9 * v.norm() {
        return Err(Error::domain(
            "information channel is collinear with the energy channel; no zero-forcing beam",
        ));
    }
    out.normalized()
}

/// Sweeps the power split between the information beam and the energy beam
/// for the separated case.
///
/// `cfg.info_link_gain` is the path gain to the information receiver and
/// `cfg.power_link_gain` the path gain to the energy receiver; both
/// channels have dimension `Nt`. For share `phi`, power `phi * P` drives
/// the information beam and `(1 - phi) * P` the energy beam (MRT on the
/// energy channel). The eavesdropper SNR counts only the information
/// beam's leakage.
pub fn separated_two_beam_sweep(
    info_channel: &ChannelVector,
    energy_channel: &ChannelVector,
    cfg: &SlotConfig,
    shares: &[f64],
    strategy: TwoBeamStrategy,
) -> Result<Vec<TwoBeamPoint>> {
    cfg.validate()?;
    check_knobs(shares)?;
    if info_channel.dim() != cfg.tx_antennas || energy_channel.dim() != cfg.tx_antennas {
        return Err(Error::domain(
            "both separated-case channels must have dimension Nt",
        ));
    }
    if strategy == TwoBeamStrategy::ZfMrt && cfg.tx_antennas < 2 {
        return Err(Error::domain(
            "zero-forcing needs at least 2 transmit antennas",
        ));
    }

    let info_beam = match strategy {
        TwoBeamStrategy::MrtMrt => info_channel.normalized()?,
        TwoBeamStrategy::ZfMrt => zero_forcing_beam(info_channel, energy_channel)?,
    };
    let energy_beam = energy_channel.normalized()?;

    let info_gain = info_channel.beam_power_gain(&info_beam);
    let leak_gain = energy_channel.beam_power_gain(&info_beam);
    let harvest_gain = energy_channel.beam_power_gain(&energy_beam);

    let alpha_ir = cfg.info_link_gain;
    let alpha_er = cfg.power_link_gain;

    Ok(shares
        .iter()
        .map(|&phi| {
            let snr_ir = phi * cfg.tx_power * alpha_ir * info_gain / cfg.noise_power;
            let snr_er = phi * cfg.tx_power * alpha_er * leak_gain / cfg.noise_power;
            let rate = (1.0 + snr_ir).log2();
            let secrecy_rate = (rate - (1.0 + snr_er).log2()).max(0.0);
            let harvested_power = cfg.conversion_efficiency
                * cfg.tx_power
                * alpha_er
                * (phi * leak_gain + (1.0 - phi) * harvest_gain);
            TwoBeamPoint {
                rate,
                secrecy_rate,
                harvested_power,
                share: phi,
            }
        })
        .collect())
}
