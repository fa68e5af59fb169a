//! sup over cuts M of |T_{ξ·α>0, ξ_n<M}(f⃗)(x)|, on the frequency side and through the
//! dt/t kernel with one prefix sum per bump of the last train.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::multiplier::{apply_multiplier, QuadOptions};
use super::pv_window;
use crate::error::{Error, Result};
use crate::symbol_forge::make_carleson_region;
use crate::witness_functions::{BumpTrain, Modulation};

/// Cuts between consecutive spectral supports of a train, plus one below and one above
/// all of them. Every cut in a gap gives the same operator value as any other in it.
pub fn gap_cuts(train: &BumpTrain) -> Vec<f64> {
    let mut mus: Vec<f64> = train.indices().map(|m| train.frequency(m)).collect();
    mus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = train.base.h;
    let mut cuts = Vec::with_capacity(mus.len() + 1);
    if let (Some(first), Some(last)) = (mus.first(), mus.last()) {
        cuts.push(first - h - 1.0);
        for w in mus.windows(2) {
            if w[1] - w[0] > 2.0 * h {
                cuts.push(0.5 * (w[0] + w[1]));
            }
        }
        cuts.push(last + h + 1.0);
    }
    cuts
}

/// The cut that keeps bumps m ≤ n₀ of a linearly modulated train: slope·n₀ + 5·slope/A.
pub fn anchor_cut(train: &BumpTrain, n0: i64) -> Result<f64> {
    match train.modulation {
        Modulation::Linear { slope } => Ok(slope * n0 as f64 + 5.0 * slope / train.spacing),
        Modulation::Dyadic { .. } => Err(Error::Config("anchor cuts need a linear modulation".into())),
    }
}

/// max over `m_grid` of |T_m(f⃗)(x)| with m the Carleson region cut at M.
pub fn apply_ncarleson(
    alpha: &[f64],
    trains: &[BumpTrain],
    xs: &[f64],
    m_grid: &[f64],
    opts: QuadOptions,
) -> Result<Vec<f64>> {
    if m_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut best = vec![0.0f64; xs.len()];
    for &cut in m_grid {
        let sym = make_carleson_region(alpha.to_vec(), Some(cut));
        let vals = apply_multiplier(&sym, trains, xs, opts)?;
        for (b, v) in best.iter_mut().zip(vals) {
            *b = b.max(v.norm());
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPathOptions {
    pub panel: f64,
    pub nodes: usize,
    /// Bumps are cut off where φ drops below this fraction of its peak.
    pub tail: f64,
}

impl Default for KernelPathOptions {
    fn default() -> Self {
        KernelPathOptions {
            panel: 0.25,
            nodes: 12,
            tail: 1e-14,
        }
    }
}

/// Values at one point for every requested cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarlesonProfile {
    pub cuts: Vec<f64>,
    /// p.v.∫ ∏ f_j(x − α_j t) dt/t with the last train restricted below the cut.
    pub signed: Vec<Complex64>,
    /// ∏ f_j(x) with the same restriction.
    pub product: Vec<Complex64>,
}

impl CarlesonProfile {
    /// The half-space operator: ½∏f + (i/2π)·p.v.
    pub fn half_space(&self) -> Vec<Complex64> {
        self.signed
            .iter()
            .zip(&self.product)
            .map(|(s, p)| 0.5 * p + Complex64::new(0.0, 0.5 / std::f64::consts::PI) * s)
            .collect()
    }

    pub fn sup_signed(&self) -> f64 {
        self.signed.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Kernel-side evaluation at one point. Each bump of the last train contributes one
/// p.v. integral over the t-window where that bump is alive; cuts are prefix sums in
/// frequency order. Cuts must fall in gaps between the last train's supports.
pub fn carleson_kernel_profile(
    alpha: &[f64],
    trains: &[BumpTrain],
    x: f64,
    cuts: &[f64],
    opts: &KernelPathOptions,
) -> Result<CarlesonProfile> {
    let n = trains.len();
    if n == 0 || alpha.len() != n {
        return Err(Error::Dimension("α and the trains must share a positive length".into()));
    }
    if cuts.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let last = &trains[n - 1];
    let speed = alpha[n - 1];
    if speed == 0.0 {
        return Err(Error::Dimension("the last entry of α must be nonzero".into()));
    }
    let h = last.base.h;
    for &c in cuts {
        if last.indices().any(|m| (c - last.frequency(m)).abs() < h) {
            return Err(Error::Config(format!("cut {c} falls inside a spectral support")));
        }
    }
    let radius = trains
        .iter()
        .map(|t| t.base.decay_radius(opts.tail))
        .fold(0.0, f64::max);
    let head = &trains[..n - 1];
    let others = |t: f64| -> Complex64 {
        head.iter()
            .zip(alpha)
            .map(|(f, a)| f.eval_near(x - a * t, radius))
            .product()
    };
    let mut bumps: Vec<(f64, Complex64, Complex64)> = last
        .indices()
        .map(|m| {
            let c = last.center(m);
            let (t1, t2) = ((x - c - radius) / speed, (x - c + radius) / speed);
            let window = (t1.min(t2), t1.max(t2));
            let integrand = |t: f64| last.term(m, x - speed * t) * others(t);
            let pv = pv_window(&integrand, window, opts.panel, opts.nodes);
            (last.frequency(m), pv, last.term(m, x))
        })
        .collect();
    bumps.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let head_product = others(0.0);
    let mut signed = Vec::with_capacity(cuts.len());
    let mut product = Vec::with_capacity(cuts.len());
    for &c in cuts {
        let mut s = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(0.0, 0.0);
        for b in bumps.iter().take_while(|b| b.0 < c) {
            s += b.1;
            p += b.2;
        }
        signed.push(s);
        product.push(p * head_product);
    }
    Ok(CarlesonProfile {
        cuts: cuts.to_vec(),
        signed,
        product,
    })
}

/// Kernel-side counterpart of [`apply_ncarleson`].
pub fn apply_ncarleson_kernel(
    alpha: &[f64],
    trains: &[BumpTrain],
    xs: &[f64],
    m_grid: &[f64],
    opts: &KernelPathOptions,
) -> Result<Vec<f64>> {
    xs.par_iter()
        .map(|&x| {
            let p = carleson_kernel_profile(alpha, trains, x, m_grid, opts)?;
            Ok(p.half_space().iter().map(|v| v.norm()).fold(0.0, f64::max))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness_functions::{make_bump_train, Bump};

    fn small() -> (Vec<f64>, Vec<BumpTrain>) {
        let b = Bump::new(0.5).unwrap();
        let alpha = vec![2.0, 1.0];
        // slopes chosen so that tuples with μ·α = 0 exist: 2·1·m₁ + 1·(−2)·m₂ = 0 at m₁ = m₂
        let trains = vec![
            make_bump_train(b, 2, 16, 1.0, 1.0).unwrap(),
            make_bump_train(b, 2, 16, -2.0, 1.0).unwrap(),
        ];
        (alpha, trains)
    }

    #[test]
    fn gap_cuts_separate_supports() {
        let (_, f) = small();
        let cuts = gap_cuts(&f[1]);
        assert_eq!(cuts.len(), 6);
        for c in &cuts {
            assert!(f[1].spectral_support().iter().all(|(a, b)| c < a || c > b));
        }
        let b = Bump::new(0.5).unwrap();
        let t = make_bump_train(b, 4, 32, 288.0, 1.0).unwrap();
        assert_eq!(anchor_cut(&t, 2).unwrap(), 576.0 + 45.0);
    }

    #[test]
    fn refining_the_grid_never_lowers_the_sup() {
        let (alpha, f) = small();
        let xs = [0.0, 9.0];
        let cuts = gap_cuts(&f[1]);
        let coarse = apply_ncarleson(&alpha, &f, &xs, &cuts[..3], QuadOptions::default()).unwrap();
        let fine = apply_ncarleson(&alpha, &f, &xs, &cuts, QuadOptions::default()).unwrap();
        for (c, d) in coarse.iter().zip(&fine) {
            assert!(d >= c);
        }
        assert_eq!(apply_ncarleson(&alpha, &f, &xs, &[], QuadOptions::default()), Err(Error::EmptyGrid));
    }

    #[test]
    fn saturates_above_the_top_support() {
        let (alpha, f) = small();
        let top = *gap_cuts(&f[1]).last().unwrap();
        let a = apply_ncarleson(&alpha, &f, &[4.0], &[top], QuadOptions::default()).unwrap();
        let b = apply_ncarleson(&alpha, &f, &[4.0], &[top + 50.0], QuadOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kernel_side_matches_frequency_side() {
        let (alpha, f) = small();
        let cuts = gap_cuts(&f[1]);
        let opts = KernelPathOptions {
            panel: 0.02,
            nodes: 12,
            tail: 1e-16,
        };
        for x in [0.0, 5.0, 16.3] {
            let prof = carleson_kernel_profile(&alpha, &f, x, &cuts, &opts).unwrap();
            for (c, k) in cuts.iter().zip(prof.half_space()) {
                let sym = make_carleson_region(alpha.clone(), Some(*c));
                let fr = apply_multiplier(&sym, &f, &[x], QuadOptions::default()).unwrap()[0];
                let scale = fr.norm().max(1e-2 * f[0].base.peak());
                assert!((fr - k).norm() < 1e-4 * scale, "x={x} cut={c}: {fr} vs {k}");
            }
        }
    }

    #[test]
    fn cuts_inside_a_support_are_rejected() {
        let (alpha, f) = small();
        let r = carleson_kernel_profile(&alpha, &f, 0.0, &[f[1].frequency(1)], &KernelPathOptions::default());
        assert!(matches!(r, Err(Error::Config(_))));
    }
}
