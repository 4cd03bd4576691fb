//! One-dimensional tradeoff optimizers over the switching point `tau`.
//!
//! Monte Carlo objectives are evaluated on a fixed batch of realizations
//! (common random numbers), so the solver always sees a noiseless,
//! deterministic function of `tau`. A coarse bracketing grid guards the
//! golden-section refinement against non-unimodal curves: every local
//! maximum found on the grid is refined and the best refined point wins.

use crate::channel::CsiModel;
use crate::error::{Error, Result};
use crate::stats;
use crate::wpc::{
    draw_all_trial_gains, energy_efficiency, lsmimo_slot_bits, mean_rate_over_gains,
    rate_from_gains, CurvePoint, SlotConfig, TrialGains,
};

/// Points in the coarse bracketing scan.
pub const DEFAULT_BRACKET_POINTS: usize = 64;

/// Result of a one-dimensional tradeoff solve.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffResult {
    /// Optimal switching point, seconds.
    pub tau_star: f64,
    /// Objective value at `tau_star` (bits/s/Hz or bits/Joule).
    pub objective_star: f64,
    /// The coarse objective curve that bracketed the optimum.
    pub curve: Vec<CurvePoint>,
    /// False when a constrained solve could not meet its constraint; the
    /// reported point is then the least-infeasible one.
    pub feasible: bool,
    /// Slack of the active constraint at the reported point (0 for
    /// unconstrained solves).
    pub constraint_slack: f64,
}

/// Golden-section search for the maximum of `f` on `[lo, hi]`.
///
/// Returns `(x_star, f(x_star))` with `x_star` within `tol` of a local
/// maximum, the global one when `f` is unimodal.
pub fn golden_section_max(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if !(lo < hi) {
        return Err(Error::domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    if !f1.is_finite() || !f2.is_finite() {
        return Err(Error::solver("objective returned a non-finite value"));
    }
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if !f2.is_finite() {
                return Err(Error::solver("objective returned a non-finite value"));
            }
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if !f1.is_finite() {
                return Err(Error::solver("objective returned a non-finite value"));
            }
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Best refined point plus the coarse scan: `(x_star, f_star, grid)`.
type BracketScan = (f64, f64, Vec<(f64, f64)>);

/// Scans `f` on an inclusive uniform grid, golden-refines around every
/// local maximum, and returns the best point plus the grid values.
fn bracket_and_refine(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid_points: usize,
    tol: f64,
) -> Result<BracketScan> {
    let n = grid_points.max(3);
    let step = (hi - lo) / n as f64;
    let grid: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let x = if i == n { hi } else { lo + i as f64 * step };
            (x, f(x))
        })
        .collect();
    if grid.iter().any(|&(_, v)| !v.is_finite()) {
        return Err(Error::solver(
            "objective returned a non-finite value on the grid",
        ));
    }

    let (mut best_x, mut best_v) = grid
        .iter()
        .copied()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();

    for i in 0..=n {
        let here = grid[i].1;
        let left_ok = i == 0 || grid[i - 1].1 <= here;
        let right_ok = i == n || grid[i + 1].1 <= here;
        if left_ok && right_ok {
            let a = grid[i.saturating_sub(1)].0;
            let b = grid[(i + 1).min(n)].0;
            let (x, v) = golden_section_max(f, a, b, tol)?;
            if v > best_v {
                best_x = x;
                best_v = v;
            }
        }
    }
    Ok((best_x, best_v, grid))
}

fn rate_objective_result(
    cfg: &SlotConfig,
    gains: &[TrialGains],
    bracket_points: usize,
    tol: f64,
) -> Result<TradeoffResult> {
    let t = cfg.slot_duration;
    let f = |tau: f64| mean_rate_over_gains(cfg, gains, tau);
    let (tau_star, objective_star, grid) = bracket_and_refine(&f, 0.0, t, bracket_points, tol)?;
    let curve = grid
        .into_iter()
        .map(|(tau, _)| {
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
        .collect();
    Ok(TradeoffResult {
        tau_star,
        objective_star,
        curve,
        feasible: true,
        constraint_slack: 0.0,
    })
}

/// Maximizes the Monte Carlo mean rate over `tau` in `[0, T)` with the
/// default bracketing grid.
///
/// `csi` overrides `cfg.csi` so a sweep can share one base config. The
/// objective is deterministic given `seed`; repeated calls are
/// bit-identical.
pub fn optimize_tau_rate(
    cfg: &SlotConfig,
    csi: CsiModel,
    n_trials: usize,
    seed: u64,
    tol: f64,
) -> Result<TradeoffResult> {
    optimize_tau_rate_with_bracket(cfg, csi, n_trials, seed, tol, DEFAULT_BRACKET_POINTS)
}

/// [`optimize_tau_rate`] with an explicit bracketing-grid size (also the
/// length of the reported curve, plus one).
pub fn optimize_tau_rate_with_bracket(
    cfg: &SlotConfig,
    csi: CsiModel,
    n_trials: usize,
    seed: u64,
    tol: f64,
    bracket_points: usize,
) -> Result<TradeoffResult> {
    let gains = draw_all_trial_gains(cfg, csi, n_trials, seed)?;
    rate_objective_result(cfg, &gains, bracket_points, tol)
}

/// Maximizes the deterministic LS-MIMO energy efficiency over `tau` with
/// the default bracketing grid.
pub fn optimize_tau_ee(cfg: &SlotConfig, accuracy: f64, tol: f64) -> Result<TradeoffResult> {
    optimize_tau_ee_with_bracket(cfg, accuracy, tol, DEFAULT_BRACKET_POINTS)
}

/// [`optimize_tau_ee`] with an explicit bracketing-grid size.
pub fn optimize_tau_ee_with_bracket(
    cfg: &SlotConfig,
    accuracy: f64,
    tol: f64,
    bracket_points: usize,
) -> Result<TradeoffResult> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&accuracy) {
        return Err(Error::domain(format!(
            "CSI accuracy must lie in [0, 1], got {accuracy}"
        )));
    }
    let t = cfg.slot_duration;
    let f = |tau: f64| {
        let bits = lsmimo_slot_bits(cfg, accuracy, tau).expect("validated config");
        energy_efficiency(&cfg.with_transfer_duration(tau), bits).expect("validated config")
    };
    let (tau_star, objective_star, grid) = bracket_and_refine(&f, 0.0, t, bracket_points, tol)?;
    let curve = grid
        .into_iter()
        .map(|(tau, value)| CurvePoint {
            tau,
            value,
            std_error: 0.0,
        })
        .collect();
    Ok(TradeoffResult {
        tau_star,
        objective_star,
        curve,
        feasible: true,
        constraint_slack: 0.0,
    })
}

/// Minimizes the transmit power subject to an optimized-rate constraint.
///
/// Bisects `P` over `power_bounds`; the inner problem is the `tau` rate
/// maximization on the same realization batch (the beam gains do not
/// depend on `P`, so all inner solves share common random numbers).
/// Returns the smallest feasible power and its tradeoff solve. When even
/// the upper bound misses `min_rate`, the result carries `feasible =
/// false` and describes the upper-bound solve.
pub fn min_power_subject_to_rate(
    cfg: &SlotConfig,
    csi: CsiModel,
    min_rate: f64,
    power_bounds: (f64, f64),
    n_trials: usize,
    seed: u64,
    tol: f64,
) -> Result<(f64, TradeoffResult)> {
    let (p_lo, p_hi) = power_bounds;
    if !(min_rate > 0.0) {
        return Err(Error::domain(format!(
            "rate constraint must be positive, got {min_rate}"
        )));
    }
    if !(0.0 < p_lo && p_lo < p_hi) {
        return Err(Error::domain(format!(
            "invalid power bounds [{p_lo}, {p_hi}]"
        )));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::domain("relative power tolerance must lie in (0, 1)"));
    }
    let gains = draw_all_trial_gains(cfg, csi, n_trials, seed)?;
    let tau_tol = 1e-6 * cfg.slot_duration;
    let solve = |p: f64| -> Result<TradeoffResult> {
        rate_objective_result(
            &SlotConfig {
                tx_power: p,
                ..cfg.clone()
            },
            &gains,
            DEFAULT_BRACKET_POINTS,
            tau_tol,
        )
    };

    let at_hi = solve(p_hi)?;
    if at_hi.objective_star < min_rate {
        return Ok((
            p_hi,
            TradeoffResult {
                feasible: false,
                constraint_slack: at_hi.objective_star - min_rate,
                ..at_hi
            },
        ));
    }
    let at_lo = solve(p_lo)?;
    if at_lo.objective_star >= min_rate {
        return Ok((
            p_lo,
            TradeoffResult {
                constraint_slack: at_lo.objective_star - min_rate,
                ..at_lo
            },
        ));
    }

    // Invariant: rate(lo) < min_rate <= rate(hi).
    let mut lo = p_lo;
    let mut hi = p_hi;
    while (hi - lo) / hi > tol {
        let mid = 0.5 * (lo + hi);
        if solve(mid)?.objective_star >= min_rate {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let result = solve(hi)?;
    let slack = result.objective_star - min_rate;
    Ok((
        hi,
        TradeoffResult {
            constraint_slack: slack,
            ..result
        },
    ))
}
