//! Order-stable summation helpers.
//!
//! All Monte Carlo aggregation goes through these so that results are
//! bit-identical no matter how the per-trial values were produced
//! (sequentially or in parallel): callers collect per-trial values into a
//! trial-indexed buffer first, then reduce here in a fixed order.

/// Compensated (Kahan) sum over a slice, left to right.
pub(crate) fn kahan_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for &v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Mean of a slice (compensated). Empty input returns 0.
pub(crate) fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    kahan_sum(values) / values.len() as f64
}

/// Mean and standard error of the mean.
///
/// The standard error is `sample_std / sqrt(n)` with the n-1 denominator;
/// a single sample reports a standard error of 0 by convention.
pub(crate) fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n <= 1 {
        return (mean(values), 0.0);
    }
    let m = mean(values);
    let sq: Vec<f64> = values.iter().map(|&v| (v - m) * (v - m)).collect();
    let var = kahan_sum(&sq) / (n as f64 - 1.0);
    (m, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_se_of_known_samples() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let (m, se) = mean_and_std_error(&xs);
        assert!((m - 2.5).abs() < 1e-15);
        // sample std = sqrt(5/3), se = std/2
        let expected = (5.0f64 / 3.0).sqrt() / 2.0;
        assert!((se - expected).abs() < 1e-15);
    }

    #[test]
    fn single_sample_has_zero_std_error() {
        let (m, se) = mean_and_std_error(&[42.0]);
        assert_eq!(m, 42.0);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn kahan_keeps_sub_ulp_increments() {
        // 200 increments of 1e-16 on top of 1.0: naive summation drops
        // every one of them, compensated summation keeps the total.
        let mut xs = vec![1.0];
        xs.extend(std::iter::repeat_n(1e-16, 200));
        let naive: f64 = xs.iter().sum();
        assert_eq!(naive, 1.0);
        let expected = 1.0 + 2e-14;
        assert!((kahan_sum(&xs) - expected).abs() < 1e-16);
    }
}
