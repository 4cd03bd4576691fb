//! Fading channel generation, path loss, and imperfect TDD CSI.
//!
//! Channels are i.i.d. Rayleigh: every entry is a zero-mean unit-variance
//! circularly-symmetric complex Gaussian, one realization per slot (block
//! fading). The power link (transmitter -> harvester, dimension `Nt`) and
//! the information link (dimension `Nr`) are drawn independently; large-
//! scale attenuation enters separately through the path-loss gains.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Linear power gain at the 1 m reference distance (a 20 dB reference loss).
pub const REFERENCE_GAIN: f64 = 1e-2;

/// A complex channel vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector {
    entries: Vec<Complex64>,
}

impl ChannelVector {
    /// Wraps raw coefficients. Fails on an empty or non-finite vector.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("channel vector must have dimension >= 1"));
        }
        if entries
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::domain("channel vector entries must be finite"));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Squared Euclidean norm.
    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian inner product `self^H other`.
    ///
    /// Panics if the dimensions differ; callers exposed to unvalidated
    /// input check dimensions first.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "channel vector dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Beamforming power gain `|self^H other|^2`.
    pub fn beam_power_gain(&self, beam: &Self) -> f64 {
        self.inner(beam).norm_sqr()
    }

    /// Unit-norm copy. Fails on a (numerically) zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 0.0 {
            return Err(Error::domain("cannot normalize a zero channel vector"));
        }
        Ok(Self {
            entries: self.entries.iter().map(|c| c / n).collect(),
        })
    }

    pub(crate) fn axpy(&self, scale_self: f64, other: &Self, scale_other: f64) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a * scale_self + b * scale_other)
                .collect(),
        }
    }
}

/// Distance-power-law attenuation: `gain(d) = reference_gain * d^(-exponent)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel {
    /// Linear power gain at 1 m.
    pub reference_gain: f64,
    /// Path-loss exponent.
    pub exponent: f64,
    /// Link distance in meters.
    pub distance: f64,
}

impl PathLossModel {
    pub fn new(reference_gain: f64, exponent: f64, distance: f64) -> Result<Self> {
        if reference_gain <= 0.0 || exponent <= 0.0 || distance <= 0.0 {
            return Err(Error::domain(
                "path loss requires reference_gain > 0, exponent > 0, distance > 0",
            ));
        }
        Ok(Self {
            reference_gain,
            exponent,
            distance,
        })
    }

    /// Linear power gain at the configured distance.
    pub fn gain(&self) -> f64 {
        self.reference_gain * self.distance.powf(-self.exponent)
    }
}

/// Linear power gain `10^-2 * d^(-nu)` at distance `d` meters.
pub fn path_loss(distance: f64, exponent: f64) -> Result<f64> {
    if distance <= 0.0 {
        return Err(Error::domain(format!(
            "path loss distance must be positive, got {distance}"
        )));
    }
    if exponent <= 0.0 {
        return Err(Error::domain(format!(
            "path loss exponent must be positive, got {exponent}"
        )));
    }
    Ok(REFERENCE_GAIN * distance.powf(-exponent))
}

/// How the transmitter learns the power-link channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CsiModel {
    /// Ideal full CSI: beamform on the true channel.
    Perfect,
    /// FDD limited feedback with a `2^B`-entry quantization codebook.
    FeedbackBits(u32),
    /// TDD reciprocity estimate with scalar accuracy `rho` in [0, 1].
    TddAccuracy(f64),
}

impl CsiModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CsiModel::TddAccuracy(rho) if !(0.0..=1.0).contains(&rho) => Err(Error::domain(
                format!("CSI accuracy must lie in [0, 1], got {rho}"),
            )),
            _ => Ok(()),
        }
    }
}

/// Draws an `n`-dimensional channel with i.i.d. unit-variance
/// circularly-symmetric complex Gaussian entries.
pub fn draw_channel(n: usize, rng: &mut impl Rng) -> Result<ChannelVector> {
    if n == 0 {
        return Err(Error::domain("antenna count must be >= 1"));
    }
    let entries = (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect();
    Ok(ChannelVector { entries })
}

/// Gauss-Markov CSI estimate: `h_est = rho * h + sqrt(1 - rho^2) * e`,
/// with `e` an independent draw of the same dimension and statistics.
///
/// `rho = 1` reproduces `h` exactly; `rho = 0` yields an independent
/// channel. The estimate keeps the marginal statistics of `h`.
pub fn apply_csi_error(h: &ChannelVector, rho: f64, rng: &mut impl Rng) -> Result<ChannelVector> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::domain(format!(
            "CSI accuracy must lie in [0, 1], got {rho}"
        )));
    }
    if rho == 1.0 {
        return Ok(h.clone());
    }
    let noise = draw_channel(h.dim(), rng)?;
    Ok(h.axpy(rho, &noise, (1.0 - rho * rho).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;
    use crate::stats;
    use proptest::prelude::*;

    #[test]
    fn path_loss_matches_stated_values() {
        assert!((path_loss(1.0, 4.0).unwrap() - 1e-2).abs() < 1e-17);
        assert!((path_loss(10.0, 4.0).unwrap() - 1e-6).abs() < 1e-20);
        assert!((path_loss(50.0, 4.0).unwrap() - 1.6e-9).abs() < 1e-22);
    }

    #[test]
    fn path_loss_rejects_bad_domain() {
        assert!(path_loss(0.0, 4.0).is_err());
        assert!(path_loss(-3.0, 4.0).is_err());
        assert!(path_loss(5.0, 0.0).is_err());
    }

    #[test]
    fn path_loss_model_agrees_with_free_function() {
        let m = PathLossModel::new(REFERENCE_GAIN, 4.0, 10.0).unwrap();
        assert_eq!(m.gain(), path_loss(10.0, 4.0).unwrap());
    }

    #[test]
    fn draw_channel_rejects_zero_dimension() {
        let mut rng = trial_rng(0, 0);
        assert!(draw_channel(0, &mut rng).is_err());
    }

    #[test]
    fn draw_channel_is_deterministic_per_stream() {
        let a = draw_channel(4, &mut trial_rng(11, 2)).unwrap();
        let b = draw_channel(4, &mut trial_rng(11, 2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mean_squared_norm_is_antenna_count() {
        // E[||h||^2] = n; 1e5 draws at n = 4 must land within 4.0 +/- 0.05.
        let n_trials = 100_000u64;
        let mut acc = Vec::with_capacity(n_trials as usize);
        for t in 0..n_trials {
            let h = draw_channel(4, &mut trial_rng(1, t)).unwrap();
            acc.push(h.norm_sqr());
        }
        let (m, se) = stats::mean_and_std_error(&acc);
        assert!((m - 4.0).abs() < 0.05, "mean ||h||^2 = {m}");
        assert!(
            (m - 4.0).abs() < 3.0 * se,
            "mean {m} off by more than 3 SE ({se})"
        );
    }

    #[test]
    fn scalar_power_gain_is_exponential() {
        // Kolmogorov-Smirnov against Exp(1) at the 1% level.
        let n = 100_000usize;
        let mut samples: Vec<f64> = (0..n)
            .map(|t| {
                draw_channel(1, &mut trial_rng(2, t as u64))
                    .unwrap()
                    .norm_sqr()
            })
            .collect();
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut d_max = 0.0f64;
        for (i, &x) in samples.iter().enumerate() {
            let cdf = 1.0 - (-x).exp();
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            d_max = d_max.max((cdf - lo).abs()).max((hi - cdf).abs());
        }
        let critical = 1.628 / (n as f64).sqrt();
        assert!(
            d_max < critical,
            "KS statistic {d_max} >= critical {critical}"
        );
    }

    #[test]
    fn csi_error_identity_and_domain() {
        let mut rng = trial_rng(3, 0);
        let h = draw_channel(4, &mut rng).unwrap();
        let est = apply_csi_error(&h, 1.0, &mut rng).unwrap();
        assert_eq!(est, h);
        assert!(apply_csi_error(&h, 1.5, &mut rng).is_err());
        assert!(apply_csi_error(&h, -0.1, &mut rng).is_err());
    }

    #[test]
    fn csi_error_at_zero_accuracy_is_uncorrelated() {
        // Sample correlation of matching entries (real parts) over 1e5 draws.
        let n_trials = 100_000u64;
        let mut prod = Vec::with_capacity(n_trials as usize);
        for t in 0..n_trials {
            let mut rng = trial_rng(4, t);
            let h = draw_channel(2, &mut rng).unwrap();
            let est = apply_csi_error(&h, 0.0, &mut rng).unwrap();
            prod.push(h.entries()[0].re * est.entries()[0].re * 2.0);
        }
        let (corr, _) = stats::mean_and_std_error(&prod);
        assert!(corr.abs() < 0.01, "entry correlation {corr}");
    }

    #[test]
    fn csi_error_preserves_expected_norm() {
        for &rho in &[0.0, 0.3, 0.7, 1.0] {
            let n_trials = 20_000u64;
            let mut acc = Vec::with_capacity(n_trials as usize);
            for t in 0..n_trials {
                let mut rng = trial_rng(5, t);
                let h = draw_channel(4, &mut rng).unwrap();
                acc.push(apply_csi_error(&h, rho, &mut rng).unwrap().norm_sqr());
            }
            let (m, se) = stats::mean_and_std_error(&acc);
            assert!(
                (m - 4.0).abs() < 3.0 * se.max(1e-12),
                "rho = {rho}: E[||h_est||^2] = {m}, se = {se}"
            );
        }
    }

    proptest! {
        // path_loss(d, nu) = path_loss(1, nu) * d^(-nu), multiplicatively
        // separable to 1e-12 relative.
        #[test]
        fn path_loss_is_separable(d in 0.1f64..1000.0, nu in 0.5f64..6.0) {
            let direct = path_loss(d, nu).unwrap();
            let separated = path_loss(1.0, nu).unwrap() * d.powf(-nu);
            prop_assert!((direct - separated).abs() <= 1e-12 * direct);
        }
    }

    #[test]
    fn mrt_on_estimate_gain_matches_closed_form_mean() {
        // E[|h_est^H h|^2 / ||h_est||^2] = rho^2 * Nt + (1 - rho^2).
        let (rho, nt) = (0.9, 100);
        let n_trials = 10_000u64;
        let mut acc = Vec::with_capacity(n_trials as usize);
        for t in 0..n_trials {
            let mut rng = trial_rng(6, t);
            let h = draw_channel(nt, &mut rng).unwrap();
            let est = apply_csi_error(&h, rho, &mut rng).unwrap();
            acc.push(est.inner(&h).norm_sqr() / est.norm_sqr());
        }
        let expected = rho * rho * nt as f64 + (1.0 - rho * rho);
        let (m, _) = stats::mean_and_std_error(&acc);
        assert!(
            (m - expected).abs() / expected < 0.01,
            "mean MRT-on-estimate gain {m} vs {expected}"
        );
    }
}
