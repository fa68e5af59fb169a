//! Shared fixtures for the benchmarks.

use blowup_core::witness_functions::{make_bump_train, Bump, BumpTrain};

/// Modulated trains with frequency weights (1, -8, 9) at spacing `a`.
pub fn modulated_trains(n: u64, a: u64) -> Vec<BumpTrain> {
    let base = Bump::new(0.5).expect("valid half-width");
    [1.0, -8.0, 9.0]
        .iter()
        .map(|w| make_bump_train(base, n, a, a as f64 * w, 1.0).expect("valid train"))
        .collect()
}

/// Evenly spaced points in [lo, hi).
pub fn sample_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo + (hi - lo) * i as f64 / count as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_the_requested_shape() {
        let t = modulated_trains(4, 32);
        assert_eq!(t.len(), 3);
        assert_eq!(t[0].len(), t[2].len());
        let xs = sample_points(0.0, 1.0, 4);
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75]);
    }
}
