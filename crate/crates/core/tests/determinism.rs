//! Reproducibility across thread counts and batch sizes.
//!
//! Per-trial substreams plus trial-ordered reduction must make every
//! Monte Carlo result a pure function of (config, seed), whatever rayon
//! does underneath.

use rayon::ThreadPoolBuilder;
use wipt_core::channel::{path_loss, CsiModel};
use wipt_core::experiment::{preset_fig5, run};
use wipt_core::units::dbm_to_watts;
use wipt_core::wpc::{draw_all_trial_gains, mean_rate_curve, SlotConfig};

fn reference_config() -> SlotConfig {
    SlotConfig {
        slot_duration: 5e-3,
        transfer_duration: 0.0,
        tx_power: 1.0,
        circuit_power: 1.0,
        conversion_efficiency: 0.9,
        noise_power: dbm_to_watts(-125.0),
        power_link_gain: path_loss(10.0, 4.0).unwrap(),
        info_link_gain: path_loss(10.0, 4.0).unwrap(),
        tx_antennas: 4,
        rx_antennas: 4,
        csi: CsiModel::FeedbackBits(2),
    }
}

#[test]
fn mean_rate_curve_is_bit_identical_across_thread_counts() {
    let cfg = reference_config();
    let grid: Vec<f64> = (0..32)
        .map(|i| i as f64 * cfg.slot_duration / 32.0)
        .collect();
    let serial = ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| mean_rate_curve(&cfg, CsiModel::FeedbackBits(2), &grid, 3_000, 123).unwrap());
    let parallel = ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| mean_rate_curve(&cfg, CsiModel::FeedbackBits(2), &grid, 3_000, 123).unwrap());
    assert_eq!(serial, parallel);
}

#[test]
fn experiment_runs_are_bit_identical_across_thread_counts() {
    let mut spec = preset_fig5();
    spec.n_trials = 1_000;
    let serial = ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run(&spec).unwrap());
    let parallel = ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| run(&spec).unwrap());
    assert_eq!(serial, parallel);
}

#[test]
fn trial_gains_do_not_depend_on_batch_size() {
    let cfg = reference_config();
    let small = draw_all_trial_gains(&cfg, CsiModel::FeedbackBits(2), 50, 7).unwrap();
    let large = draw_all_trial_gains(&cfg, CsiModel::FeedbackBits(2), 200, 7).unwrap();
    assert_eq!(&large[..50], &small[..]);
}
