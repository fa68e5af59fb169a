use serde::{Deserialize, Serialize};

use crate::profile::ramp;

/// Smooth cutoffs with 1_{[−½,½]} ≤ Φ ≤ 1_{[−1,1]} and 1_{[2,∞)} ≤ Ψ ≤ 1_{[1,∞)}.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnvelopePair;

impl EnvelopePair {
    #[inline]
    pub fn phi(&self, t: f64) -> f64 {
        ramp(2.0 * (1.0 - t.abs()))
    }

    #[inline]
    pub fn psi(&self, t: f64) -> f64 {
        ramp(t - 1.0)
    }
}

/// Low-pass piece: 1 on [−2^{k−1}, 2^{k−1}], 0 outside (−2^k, 2^k).
#[inline]
pub fn low_pass(k: i32, xi: f64) -> f64 {
    let top = 2f64.powi(k);
    ramp((top - xi.abs()) / (0.5 * top))
}

/// Annular piece: 1 for |log₂|ξ| − k| ≤ ¼, 0 for |log₂|ξ| − k| ≥ ½.
#[inline]
pub fn band_pass(k: i32, xi: f64) -> f64 {
    if xi == 0.0 {
        return 0.0;
    }
    ramp(2.0 - 4.0 * (xi.abs().log2() - k as f64).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sandwich_conditions_hold() {
        let e = EnvelopePair;
        for i in -400..=400 {
            let t = i as f64 / 100.0;
            let p = e.phi(t);
            let lower = if t.abs() <= 0.5 { 1.0 } else { 0.0 };
            let upper = if t.abs() <= 1.0 { 1.0 } else { 0.0 };
            assert!(lower <= p && p <= upper, "phi({t}) = {p}");
            let s = e.psi(t);
            let lower = if t >= 2.0 { 1.0 } else { 0.0 };
            let upper = if t >= 1.0 { 1.0 } else { 0.0 };
            assert!(lower <= s && s <= upper, "psi({t}) = {s}");
        }
    }

    #[test]
    fn littlewood_paley_pieces_respect_their_windows() {
        for k in 1..=8 {
            let half = 2f64.powi(k - 1);
            let full = 2f64.powi(k);
            assert_eq!(low_pass(k, half), 1.0);
            assert_eq!(low_pass(k, -half * 0.3), 1.0);
            assert_eq!(low_pass(k, full), 0.0);
            assert_eq!(band_pass(k, full), 1.0);
            assert_eq!(band_pass(k, -full), 1.0);
            assert_eq!(band_pass(k, full * 2f64.powf(0.5)), 0.0);
            assert_eq!(band_pass(k, full * 2f64.powf(-0.5)), 0.0);
            assert_eq!(band_pass(k, half), 0.0);
        }
    }

    #[test]
    fn low_pass_family_telescopes() {
        for i in 0..200 {
            let xi = -300.0 + 3.0 * i as f64;
            let sum: f64 = (1..=8).map(|k| low_pass(k, xi) - low_pass(k - 1, xi)).sum();
            assert!((sum - (low_pass(8, xi) - low_pass(0, xi))).abs() < 1e-14);
        }
    }
}
