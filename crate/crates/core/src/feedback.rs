//! Limited-feedback beamforming with random vector quantization.
//!
//! The codebook holds `2^B` isotropically distributed unit vectors,
//! regenerated independently per trial; the receiver feeds back the index
//! of the codeword best aligned with the channel. `expected_rvq_gain`
//! gives the closed-form mean beamforming power gain, used as the analytic
//! oracle against brute-force sampling.

use rand::Rng;
use statrs::function::beta::ln_beta;

use crate::channel::{draw_channel, ChannelVector};
use crate::error::{Error, Result};

/// Largest accepted feedback amount for explicit codebook construction.
/// `2^24` four-antenna codewords is ~1 GiB; beyond that the closed form in
/// [`expected_rvq_gain`] is the only sensible route.
pub const MAX_CODEBOOK_BITS: u32 = 24;

/// A `2^B`-entry set of unit-norm beamforming vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    vectors: Vec<ChannelVector>,
    bits: u32,
}

impl Codebook {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[ChannelVector] {
        &self.vectors
    }

    /// Builds a codebook from explicit vectors (all unit-norm, all the same
    /// dimension, exactly `2^bits` of them).
    pub fn from_vectors(vectors: Vec<ChannelVector>, bits: u32) -> Result<Self> {
        if bits > MAX_CODEBOOK_BITS {
            return Err(Error::domain(format!(
                "feedback amount {bits} exceeds the {MAX_CODEBOOK_BITS}-bit construction limit"
            )));
        }
        if vectors.len() != 1usize << bits {
            return Err(Error::domain(format!(
                "codebook must hold exactly 2^{bits} vectors, got {}",
                vectors.len()
            )));
        }
        let dim = vectors[0].dim();
        for v in &vectors {
            if v.dim() != dim {
                return Err(Error::domain("codebook vectors must share one dimension"));
            }
            if (v.norm_sqr() - 1.0).abs() > 1e-12 {
                return Err(Error::domain("codebook vectors must be unit-norm"));
            }
        }
        Ok(Self { vectors, bits })
    }
}

/// Draws a random vector quantization codebook: `2^bits` i.i.d. isotropic
/// unit vectors of dimension `tx_antennas`.
pub fn generate_codebook(bits: u32, tx_antennas: usize, rng: &mut impl Rng) -> Result<Codebook> {
    if tx_antennas == 0 {
        return Err(Error::domain("antenna count must be >= 1"));
    }
    if bits > MAX_CODEBOOK_BITS {
        return Err(Error::domain(format!(
            "feedback amount {bits} exceeds the {MAX_CODEBOOK_BITS}-bit construction limit"
        )));
    }
    let size = 1usize << bits;
    let mut vectors = Vec::with_capacity(size);
    for _ in 0..size {
        vectors.push(draw_channel(tx_antennas, rng)?.normalized()?);
    }
    Ok(Codebook { vectors, bits })
}

/// Selects the codeword maximizing `|h^H c|^2`; ties break to the lowest
/// index. Returns the winning index and a reference to the beam.
pub fn quantize<'a>(
    h: &ChannelVector,
    codebook: &'a Codebook,
) -> Result<(usize, &'a ChannelVector)> {
    let first = &codebook.vectors[0];
    if h.dim() != first.dim() {
        return Err(Error::domain(format!(
            "channel dimension {} does not match codebook dimension {}",
            h.dim(),
            first.dim()
        )));
    }
    let mut best = 0usize;
    let mut best_gain = h.beam_power_gain(first);
    for (i, c) in codebook.vectors.iter().enumerate().skip(1) {
        let gain = h.beam_power_gain(c);
        if gain > best_gain {
            best = i;
            best_gain = gain;
        }
    }
    Ok((best, &codebook.vectors[best]))
}

/// Closed-form mean beamforming power gain `E[|h^H c_hat|^2]` of RVQ over
/// i.i.d. Rayleigh channels:
///
/// `Nt * (1 - 2^B * Beta(2^B, Nt / (Nt - 1)))` for `Nt >= 2`, and 1 for a
/// single antenna (a scalar channel has no direction to quantize). With
/// `B = 0` the single isotropic codeword is independent of the channel and
/// the gain is exactly 1 for every `Nt`. Strictly increasing in `B` for
/// `Nt >= 2` with limit `Nt` as `B` grows.
pub fn expected_rvq_gain(bits: u32, tx_antennas: usize) -> Result<f64> {
    if tx_antennas == 0 {
        return Err(Error::domain("antenna count must be >= 1"));
    }
    if tx_antennas == 1 || bits == 0 {
        return Ok(1.0);
    }
    let nt = tx_antennas as f64;
    let codewords = 2f64.powi(bits as i32);
    // 2^B * Beta(2^B, Nt/(Nt-1)) evaluated in log space to survive large B.
    let log_err = (bits as f64) * std::f64::consts::LN_2 + ln_beta(codewords, nt / (nt - 1.0));
    Ok(nt * (1.0 - log_err.exp()))
}
