//! Bohr sets `{1 ≤ n ≤ N : sup_{ξ∈S} ‖ξn‖ < ρ}` and nearest-integer offsets for
//! irrational scale vectors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Guard band on the strict inequality `‖ξn‖ < ρ` for double-precision frequencies.
pub const GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BohrSet {
    pub frequencies: Vec<f64>,
    pub radius: f64,
    pub horizon: u64,
    pub members: Vec<u64>,
    /// ⌈N ρ^{|S|} − 1⌉ clamped at 0.
    pub bound: u64,
    pub pass: bool,
}

/// Distance from `x` to the nearest integer.
#[inline]
pub fn circle_dist(x: f64) -> f64 {
    let frac = x - x.floor();
    frac.min(1.0 - frac)
}

pub fn is_member(freqs: &[f64], radius: f64, n: u64) -> bool {
    freqs
        .iter()
        .all(|&xi| circle_dist(xi * n as f64) + GUARD < radius)
}

pub fn bohr_bound(horizon: u64, radius: f64, size: usize) -> u64 {
    let b = (horizon as f64 * radius.powi(size as i32) - 1.0).ceil();
    if b > 0.0 {
        b as u64
    } else {
        0
    }
}

pub fn enumerate_bohr(freqs: &[f64], radius: f64, horizon: u64) -> Result<BohrSet> {
    if !(radius > 0.0 && radius <= 0.5) {
        return Err(Error::RadiusOutOfRange(radius));
    }
    let members: Vec<u64> = (1..=horizon)
        .into_par_iter()
        .filter(|&n| is_member(freqs, radius, n))
        .collect();
    let bound = bohr_bound(horizon, radius, freqs.len());
    Ok(BohrSet {
        frequencies: freqs.to_vec(),
        radius,
        horizon,
        pass: members.len() as u64 >= bound,
        members,
        bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffsetTable {
    pub scale: Vec<f64>,
    pub anchor: i64,
    pub nearest: Vec<i64>,
    pub offsets: Vec<f64>,
}

/// 𝒩_j = round(n₀ / a_j) with ties away from zero, δ_j = n₀ − a_j 𝒩_j.
pub fn nearest_integer_offsets(scale: &[f64], anchor: i64) -> Result<OffsetTable> {
    if let Some(j) = scale.iter().position(|&a| a == 0.0) {
        return Err(Error::ZeroScale(j));
    }
    let n0 = anchor as f64;
    let nearest: Vec<i64> = scale.iter().map(|&a| (n0 / a).round() as i64).collect();
    let offsets = scale
        .iter()
        .zip(&nearest)
        .map(|(&a, &z)| n0 - a * z as f64)
        .collect();
    Ok(OffsetTable {
        scale: scale.to_vec(),
        anchor,
        nearest,
        offsets,
    })
}

/// Anchors in [lo, hi] that lie in the Bohr set of the reciprocal scales, so that
/// every offset is below ρ|a_j|.
pub fn bohr_anchors(scale: &[f64], radius: f64, lo: u64, hi: u64) -> Result<Vec<u64>> {
    if let Some(j) = scale.iter().position(|&a| a == 0.0) {
        return Err(Error::ZeroScale(j));
    }
    let recip: Vec<f64> = scale.iter().map(|a| 1.0 / a).collect();
    let set = enumerate_bohr(&recip, radius, hi)?;
    Ok(set.members.into_iter().filter(|&n| n >= lo).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(freqs: &[f64], radius: f64, horizon: u64) -> Vec<u64> {
        let mut out = Vec::new();
        for n in 1..=horizon {
            let mut worst: f64 = 0.0;
            for &xi in freqs {
                let v = xi * n as f64;
                let d = (v - v.round()).abs();
                worst = worst.max(d);
            }
            if worst + GUARD < radius {
                out.push(n);
            }
        }
        out
    }

    #[test]
    fn half_frequency_picks_even_numbers() {
        let b = enumerate_bohr(&[0.5], 0.3, 10).unwrap();
        assert_eq!(b.members, vec![2, 4, 6, 8, 10]);
        assert_eq!(b.bound, 2);
        assert!(b.pass);
    }

    #[test]
    fn integer_frequency_keeps_everything() {
        let b = enumerate_bohr(&[1.0], 0.1, 5).unwrap();
        assert_eq!(b.members, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn sqrt_two_convergent_denominators() {
        let b = enumerate_bohr(&[2f64.sqrt()], 0.05, 100).unwrap();
        for n in [29, 70, 99] {
            assert!(b.members.contains(&n), "{n} missing from {:?}", b.members);
        }
    }

    #[test]
    fn radius_is_validated() {
        assert_eq!(
            enumerate_bohr(&[0.5], 0.6, 10),
            Err(Error::RadiusOutOfRange(0.6))
        );
        assert!(enumerate_bohr(&[0.5], 0.0, 10).is_err());
    }

    #[test]
    fn offsets_examples() {
        let t = nearest_integer_offsets(&[3.0], 7).unwrap();
        assert_eq!((t.nearest[0], t.offsets[0]), (2, 1.0));
        let t = nearest_integer_offsets(&[2f64.sqrt()], 99).unwrap();
        assert_eq!(t.nearest[0], 70);
        // δ = n₀ − a𝒩 = 99 − 70√2 > 0
        assert!((t.offsets[0] - 0.005_050_633_883_342_9).abs() < 1e-12);
        let t = nearest_integer_offsets(&[2.0, 3.0], 6).unwrap();
        assert_eq!(t.nearest, vec![3, 2]);
        assert_eq!(t.offsets, vec![0.0, 0.0]);
        assert_eq!(nearest_integer_offsets(&[1.0, 0.0], 1), Err(Error::ZeroScale(1)));
    }

    #[test]
    fn ties_round_away_from_zero() {
        let t = nearest_integer_offsets(&[2.0], 5).unwrap();
        assert_eq!(t.nearest[0], 3);
        let t = nearest_integer_offsets(&[2.0], -5).unwrap();
        assert_eq!(t.nearest[0], -3);
    }

    #[test]
    fn bohr_members_have_small_offsets() {
        let a = [6.0f64.sqrt(), 3.0f64.sqrt() + 1.0, 2.0 / 3.0f64.sqrt()];
        let anchors = bohr_anchors(&a, 0.2, 1, 2000).unwrap();
        assert!(!anchors.is_empty());
        for n0 in anchors {
            let t = nearest_integer_offsets(&a, n0 as i64).unwrap();
            for (d, aj) in t.offsets.iter().zip(&a) {
                assert!(d.abs() < 0.2 * aj.abs());
            }
        }
    }

    #[test]
    fn grid_lower_bound_never_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[10u64, 100, 1000] {
            for &rho in &[0.05, 0.1, 0.3] {
                for size in 1..=3 {
                    let s: Vec<f64> = (0..size).map(|_| rng.random_range(0.0..10.0)).collect();
                    let b = enumerate_bohr(&s, rho, n).unwrap();
                    assert!(b.pass, "{s:?} rho={rho} N={n}");
                    assert_eq!(b.members, naive(&s, rho, n));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn membership_is_monotone_in_radius(
            s in proptest::collection::vec(-5.0f64..5.0, 1..4),
            r1 in 0.01f64..0.5, r2 in 0.01f64..0.5, n in 1u64..400
        ) {
            let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
            let small = enumerate_bohr(&s, lo, n).unwrap();
            let big = enumerate_bohr(&s, hi, n).unwrap();
            prop_assert!(small.members.iter().all(|m| big.members.contains(m)));
        }

        #[test]
        fn agrees_with_naive_loop(
            s in proptest::collection::vec(-5.0f64..5.0, 1..4),
            r in 0.01f64..0.5, n in 1u64..1000
        ) {
            let b = enumerate_bohr(&s, r, n).unwrap();
            prop_assert_eq!(b.members, naive(&s, r, n));
            prop_assert!(b.pass);
        }

        #[test]
        fn offsets_never_exceed_half_scale(a in proptest::collection::vec(0.1f64..20.0, 1..5), n0 in -10_000i64..10_000) {
            let t = nearest_integer_offsets(&a, n0).unwrap();
            for (d, aj) in t.offsets.iter().zip(&a) {
                prop_assert!(d.abs() <= aj / 2.0 + 1e-9);
            }
        }
    }
}
