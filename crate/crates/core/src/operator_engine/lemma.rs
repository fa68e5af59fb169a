//! Lower bound for a single far kernel block:
//! Im ∫∫_{[−A,A]²} ∏φ(α_j t + β_j s) e^{2πiAsk} K₁(s) K₂(t + Ak) ds dt ≳ D/(Ak),
//! with D = C₁C₂ ∫_{−A}^{A} ∏φ(α_j t) dt.

use serde::{Deserialize, Serialize};

use super::kernel::{panel_rule, KernelSpec};
use super::TWO_PI;
use crate::error::{Error, Result};
use crate::quadrature::composite;
use crate::witness_functions::Bump;

const CHEB: usize = 16;

/// Chebyshev–Lobatto samples on one panel with barycentric evaluation.
struct ChebPanel {
    a: f64,
    b: f64,
    x: [f64; CHEB],
    v: [f64; CHEB],
}

impl ChebPanel {
    fn new(a: f64, b: f64, f: &dyn Fn(f64) -> f64) -> Self {
        let mut x = [0.0; CHEB];
        let mut v = [0.0; CHEB];
        for j in 0..CHEB {
            let c = (std::f64::consts::PI * j as f64 / (CHEB - 1) as f64).cos();
            x[j] = 0.5 * (a + b) + 0.5 * (b - a) * c;
            v[j] = f(x[j]);
        }
        ChebPanel { a, b, x, v }
    }

    fn eval(&self, s: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..CHEB {
            let d = s - self.x[j];
            if d == 0.0 {
                return self.v[j];
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == CHEB - 1 {
                w *= 0.5;
            }
            num += w / d * self.v[j];
            den += w / d;
        }
        num / den
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub k: i64,
    pub im_value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalvingRow {
    pub k: i64,
    /// value(2k) / value(k); the 1/(Ak) law predicts ½.
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub d: f64,
    pub k0: i64,
    pub theta: f64,
    pub rows: Vec<LemmaRow>,
    pub halving: Vec<HalvingRow>,
    pub pass: bool,
}

pub struct LemmaSetup<'a> {
    pub bump: &'a Bump,
    pub alpha: &'a [f64],
    pub beta: &'a [f64],
    pub a: u64,
    /// Kernel in the oscillating variable s.
    pub k1: &'a KernelSpec,
    /// Kernel evaluated at t + Ak.
    pub k2: &'a KernelSpec,
}

impl LemmaSetup<'_> {
    fn bump_product(&self, t: f64, s: f64) -> f64 {
        self.alpha
            .iter()
            .zip(self.beta)
            .map(|(a, b)| self.bump.spatial(a * t + b * s))
            .product()
    }

    /// D = C₁C₂ ∫_{−A}^{A} ∏φ(α_j t) dt, with C₁ from the kernel at t + Ak and C₂ from
    /// the oscillating one.
    pub fn d_constant(&self) -> f64 {
        let a = self.a as f64;
        let mass = composite(-a, a, 32, 16, |t| self.bump_product(t, 0.0));
        self.k2.c1 * self.k1.c2 * mass
    }

    /// The imaginary part for one k ≥ 2.
    pub fn im_value(&self, k: i64) -> f64 {
        let a = self.a as f64;
        let shift = a * k as f64;
        let t_nodes = panel_rule(-a, a, 16, 16);
        let inner = |s: f64| -> f64 {
            t_nodes
                .iter()
                .map(|&(t, w)| w * self.bump_product(t, s) * self.k2.eval(t + shift))
                .sum()
        };
        let panels: Vec<ChebPanel> = (0..16)
            .map(|i| {
                let lo = -a + 2.0 * a * i as f64 / 16.0;
                ChebPanel::new(lo, lo + 2.0 * a / 16.0, &inner)
            })
            .collect();
        let omega = TWO_PI * shift;
        // two oscillations per panel, sixteen nodes each
        let cycles = omega * 2.0 * a / TWO_PI;
        let count = (cycles / 2.0).ceil().max(16.0) as usize;
        let count = count.div_ceil(16) * 16;
        let per = count / 16;
        let mut acc = 0.0;
        for p in &panels {
            for &(s, w) in &panel_rule(p.a, p.b, per, 16) {
                // Im[e^{iωs}K₁(s)] = sin(ωs)K₁(s) for a real kernel
                acc += w * (omega * s).sin() / s * self.k1.eval_times_t(s) * p.eval(s);
            }
        }
        acc
    }
}

/// Rows for every k in `ks` (all ≥ k0 ≥ 2), the bound θ·D/(Ak), and halving checks
/// for each k whose double is also in range.
pub fn verify_kernel_lemma(
    setup: &LemmaSetup,
    k0: i64,
    ks: std::ops::RangeInclusive<i64>,
    theta: f64,
) -> Result<LemmaReport> {
    if setup.alpha.len() != setup.beta.len() || setup.alpha.is_empty() {
        return Err(Error::Dimension("α and β must share a positive length".into()));
    }
    if k0 < 2 {
        return Err(Error::Config("k0 must be at least 2 so that t + Ak stays away from 0".into()));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Config(format!("margin θ must lie in (0, 1), got {theta}")));
    }
    if *ks.start() < k0 {
        return Err(Error::BelowK0 { k: *ks.start(), k0 });
    }
    let d = setup.d_constant();
    let a = setup.a as f64;
    let values: Vec<(i64, f64)> = {
        use rayon::prelude::*;
        let ks: Vec<i64> = ks.collect();
        ks.par_iter().map(|&k| (k, setup.im_value(k))).collect()
    };
    let rows: Vec<LemmaRow> = values
        .iter()
        .map(|&(k, v)| {
            let bound = theta * d / (a * k as f64);
            LemmaRow {
                k,
                im_value: v,
                bound,
                pass: v >= bound,
            }
        })
        .collect();
    let lookup = |k: i64| values.iter().find(|r| r.0 == k).map(|r| r.1);
    let halving: Vec<HalvingRow> = values
        .iter()
        .filter_map(|&(k, v)| {
            let w = lookup(2 * k)?;
            let ratio = w / v;
            Some(HalvingRow {
                k,
                ratio,
                pass: (ratio - 0.5).abs() <= 0.05,
            })
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass) && halving.iter().all(|h| h.pass);
    Ok(LemmaReport {
        d,
        k0,
        theta,
        rows,
        halving,
        pass,
    })
}

/// Smallest k0 ≥ 2 from which the bound holds for `run` consecutive k.
pub fn calibrate_k0(setup: &LemmaSetup, theta: f64, run: usize, k_limit: i64) -> Result<i64> {
    let d = setup.d_constant();
    let a = setup.a as f64;
    let mut start = 2;
    let mut streak = 0;
    for k in 2..=k_limit {
        if setup.im_value(k) >= theta * d / (a * k as f64) {
            streak += 1;
            if streak == run {
                return Ok(start);
            }
        } else {
            streak = 0;
            start = k + 1;
        }
    }
    Err(Error::Config(format!("no k0 found up to {k_limit}")))
}
