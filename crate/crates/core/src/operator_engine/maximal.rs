//! Littlewood–Paley maximal variants sup_k |H(f₁∗F_k · f₂∗G_k)| and the separable
//! evaluation of T_{sgn(ξ₁+ξ₂)·a(ξ₂,ξ₃)} for the dyadic paraproduct a.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::packets::{overlapping, pair_pv, Packet};
use crate::error::{Error, Result};
use crate::symbol_forge::envelopes::{band_pass, low_pass};
use crate::witness_functions::BumpTrain;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpFamily {
    /// Smooth indicator of |ξ| < 2^k.
    Low,
    /// Smooth indicator of |ξ| ≈ 2^k.
    Band,
}

impl LpFamily {
    pub fn eval(&self, k: i32, xi: f64) -> f64 {
        match self {
            LpFamily::Low => low_pass(k, xi),
            LpFamily::Band => band_pass(k, xi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaximalKind {
    /// sup_k |H(f₁∗F_k · f₂∗G_k)|
    Pair,
    /// sup_l |Σ_{k≤l} H(f₁∗F_k · f₂∗G_k)|
    PartialSum,
}

fn packets(train: &BumpTrain, filter: Option<(LpFamily, i32)>) -> Vec<Packet> {
    train
        .indices()
        .map(|m| match filter {
            None => Packet::unfiltered(train, m),
            Some((fam, k)) => Packet::new(train, m, &|xi| fam.eval(k, xi)),
        })
        .collect()
}

/// Σ over overlapping pairs of p.v.∫ p(x − t)q(x − t) dt/t.
fn pv_of_product(ps: &[Packet], qs: &[Packet], x: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for p in ps.iter().filter(|p| !p.is_zero()) {
        for q in qs.iter().filter(|q| !q.is_zero()) {
            if overlapping(p, q) {
                acc += pair_pv(p, q, x);
            }
        }
    }
    acc
}

/// Scales at which either filtered train can be nonzero, padded by one on each side.
pub fn scale_window(f1: &BumpTrain, f2: &BumpTrain) -> std::ops::RangeInclusive<i32> {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for f in [f1, f2] {
        let h = f.base.h;
        for m in f.indices() {
            let mu = f.frequency(m).abs();
            lo = lo.min((mu - h).max(h));
            hi = hi.max(mu + h);
        }
    }
    (lo.log2().floor() as i32 - 1)..=(hi.log2().ceil() as i32 + 1)
}

/// H(f₁∗F_k · f₂∗G_k)(x) for each k, with H g = (1/π) p.v.∫ g(x − t) dt/t.
pub fn scale_values(
    families: (LpFamily, LpFamily),
    f1: &BumpTrain,
    f2: &BumpTrain,
    x: f64,
    ks: std::ops::RangeInclusive<i32>,
) -> Vec<Complex64> {
    ks.map(|k| {
        let a = packets(f1, Some((families.0, k)));
        let b = packets(f2, Some((families.1, k)));
        pv_of_product(&a, &b, x) / std::f64::consts::PI
    })
    .collect()
}

pub fn apply_maximal_variant(
    kind: MaximalKind,
    families: (LpFamily, LpFamily),
    f1: &BumpTrain,
    f2: &BumpTrain,
    xs: &[f64],
    ks: Option<std::ops::RangeInclusive<i32>>,
) -> Result<Vec<f64>> {
    let ks = ks.unwrap_or_else(|| scale_window(f1, f2));
    if ks.is_empty() {
        return Err(Error::EmptyGrid);
    }
    // packets are rebuilt per point; tables are cheap next to the p.v. integrals
    Ok(xs
        .par_iter()
        .map(|&x| {
            let vals = scale_values(families, f1, f2, x, ks.clone());
            match kind {
                MaximalKind::Pair => vals.iter().map(|v| v.norm()).fold(0.0, f64::max),
                MaximalKind::PartialSum => {
                    let mut s = Complex64::new(0.0, 0.0);
                    let mut best: f64 = 0.0;
                    for v in vals {
                        s += v;
                        best = best.max(s.norm());
                    }
                    best
                }
            }
        })
        .collect())
}

/// Per-scale terms of T_{sgn(ξ₁+ξ₂)a}(f⃗)(x): entry k−1 is
/// p.v.∫ f₁(x−t)·(f₂∗φ_k)(x−t) dt/t times (f₃∗ψ_k)(x), for k = 1..=k_max.
/// The operator value is (i/π) times the sum.
pub fn sgn_paraproduct_terms(trains: &[BumpTrain], k_max: u32, xs: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    if trains.len() != 3 {
        return Err(Error::Dimension(format!("expected three trains, got {}", trains.len())));
    }
    if k_max == 0 {
        return Err(Error::Config("k_max must be at least 1".into()));
    }
    let first = packets(&trains[0], None);
    let scales: Vec<(Vec<Packet>, Vec<Packet>)> = (1..=k_max as i32)
        .into_par_iter()
        .map(|k| {
            (
                packets(&trains[1], Some((LpFamily::Low, k))),
                packets(&trains[2], Some((LpFamily::Band, k))),
            )
        })
        .collect();
    Ok(xs
        .par_iter()
        .map(|&x| {
            scales
                .iter()
                .map(|(low, band)| {
                    let outer: Complex64 = band.iter().map(|p| p.eval(x)).sum();
                    if outer == Complex64::new(0.0, 0.0) {
                        return outer;
                    }
                    pv_of_product(&first, low, x) * outer
                })
                .collect()
        })
        .collect())
}

/// T_{sgn(ξ₁+ξ₂)a(ξ₂,ξ₃)}(f⃗)(x) with a = Σ_{k=1}^{k_max} φ̂_k(ξ₂)ψ̂_k(ξ₃).
pub fn apply_sgn_paraproduct(trains: &[BumpTrain], k_max: u32, xs: &[f64]) -> Result<Vec<Complex64>> {
    let scale = Complex64::new(0.0, 1.0 / std::f64::consts::PI);
    Ok(sgn_paraproduct_terms(trains, k_max, xs)?
        .into_iter()
        .map(|row| row.into_iter().sum::<Complex64>() * scale)
        .collect())
}
