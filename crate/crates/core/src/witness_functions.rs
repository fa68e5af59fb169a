//! Nonnegative bumps with compact Fourier support and the modulated trains built on them.
//!
//! Transforms use f̂(ξ) = ∫ f(x) e^{−2πixξ} dx. The profile Φ is a cardinal B-spline of
//! order r squeezed onto [−h/2, h/2], so φ = Φ̌² and φ̂ = Φ∗Φ both have closed forms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{cardinal_bspline, sinc_pi};
use crate::quadrature::composite;

pub const DEFAULT_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    /// φ̂ is supported in [−h, h].
    pub h: f64,
    /// B-spline order of the profile Φ.
    pub order: usize,
}

impl Bump {
    pub fn new(h: f64) -> Result<Self> {
        Self::with_order(h, DEFAULT_ORDER)
    }

    pub fn with_order(h: f64, order: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Config(format!("bump half-width must be positive, got {h}")));
        }
        if !(1..32).contains(&order) {
            return Err(Error::Config(format!("bump order must be in 1..32, got {order}")));
        }
        Ok(Bump { h, order })
    }

    pub fn unit(&self) -> f64 {
        self.h / self.order as f64
    }

    /// Φ(u) = M_r(u r / h), supported in [−h/2, h/2].
    pub fn profile(&self, u: f64) -> f64 {
        cardinal_bspline(self.order, u / self.unit())
    }

    /// Φ̌(x) = (h/r)·sinc(x h/r)^r.
    pub fn profile_inverse(&self, x: f64) -> f64 {
        self.unit() * sinc_pi(x * self.unit()).powi(self.order as i32)
    }

    /// φ(x) = Φ̌(x)², nonnegative by construction.
    #[inline]
    pub fn spatial(&self, x: f64) -> f64 {
        let u = self.unit();
        u * u * sinc_pi(x * u).powi(2 * self.order as i32)
    }

    /// φ̂(ξ) = (Φ∗Φ)(ξ) = (h/r)·M_{2r}(ξ r/h), supported in [−h, h].
    #[inline]
    pub fn spectral(&self, xi: f64) -> f64 {
        let u = self.unit();
        u * cardinal_bspline(2 * self.order, xi / u)
    }

    /// Knots of φ̂: the polynomial pieces live between consecutive entries.
    pub fn spectral_knots(&self) -> Vec<f64> {
        let u = self.unit();
        let r = self.order as i64;
        (-r..=r).map(|j| j as f64 * u).collect()
    }

    /// φ(0) = ‖Φ‖₁².
    pub fn peak(&self) -> f64 {
        self.unit() * self.unit()
    }

    /// Radius beyond which φ(x) < rel·φ(0), from |sinc(y)| ≤ 1/(π|y|).
    pub fn decay_radius(&self, rel: f64) -> f64 {
        let y = rel.powf(-1.0 / (2 * self.order) as f64) / std::f64::consts::PI;
        y.max(1.0) / self.unit()
    }

    /// ∫ φ^p.
    pub fn lp_norm_pow(&self, p: f64) -> f64 {
        let r = self.decay_radius(1e-18);
        let width = 1.0 / self.unit();
        let panels = (2.0 * r / width).ceil() as usize;
        composite(-r, r, panels.max(8), 16, |x| self.spatial(x).powf(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "lowercase")]
pub enum Modulation {
    /// μ(m) = slope·m.
    Linear { slope: f64 },
    /// μ(m) = sign·2^m.
    Dyadic { sign: i8 },
}

/// f(x) = Σ_{m=lo}^{hi} φ(x − A·a·m) e^{2πi μ(m) x}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpTrain {
    pub base: Bump,
    pub lo: i64,
    pub hi: i64,
    pub spacing: f64,
    pub scale: f64,
    pub modulation: Modulation,
}

impl BumpTrain {
    pub fn center(&self, m: i64) -> f64 {
        self.spacing * self.scale * m as f64
    }

    pub fn frequency(&self, m: i64) -> f64 {
        match self.modulation {
            Modulation::Linear { slope } => slope * m as f64,
            Modulation::Dyadic { sign } => sign as f64 * 2f64.powi(m as i32),
        }
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One term φ(x − c_m) e^{2πiμ_m x}.
    #[inline]
    pub fn term(&self, m: i64, x: f64) -> Complex64 {
        let amp = self.base.spatial(x - self.center(m));
        Complex64::from_polar(amp, 2.0 * std::f64::consts::PI * self.frequency(m) * x)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.indices().map(|m| self.term(m, x)).sum()
    }

    /// Indices whose centres lie within `radius` of x.
    pub fn near(&self, x: f64, radius: f64) -> std::ops::RangeInclusive<i64> {
        let step = self.spacing * self.scale;
        let (a, b) = ((x - radius) / step, (x + radius) / step);
        let (a, b) = if step > 0.0 { (a, b) } else { (b, a) };
        (a.ceil() as i64).max(self.lo)..=(b.floor() as i64).min(self.hi)
    }

    /// Sum over the bumps centred within `radius` of x.
    pub fn eval_near(&self, x: f64, radius: f64) -> Complex64 {
        self.near(x, radius).map(|m| self.term(m, x)).sum()
    }

    /// Transform of one term: φ̂(ξ − μ_m) e^{−2πi(ξ − μ_m)c_m}.
    #[inline]
    pub fn spectral_term(&self, m: i64, xi: f64) -> Complex64 {
        let d = xi - self.frequency(m);
        let amp = self.base.spectral(d);
        if amp == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(amp, -2.0 * std::f64::consts::PI * d * self.center(m))
    }

    pub fn spectral(&self, xi: f64) -> Complex64 {
        self.indices().map(|m| self.spectral_term(m, xi)).sum()
    }

    /// [μ_m − h, μ_m + h] for every bump.
    pub fn spectral_support(&self) -> Vec<(f64, f64)> {
        self.indices()
            .map(|m| {
                let mu = self.frequency(m);
                (mu - self.base.h, mu + self.base.h)
            })
            .collect()
    }

    /// Spatial extent covering every bump up to relative size `rel`.
    pub fn spatial_extent(&self, rel: f64) -> (f64, f64) {
        let r = self.base.decay_radius(rel);
        let (a, b) = (self.center(self.lo), self.center(self.hi));
        (a.min(b) - r, a.max(b) + r)
    }

    /// ‖f‖_p^p by composite quadrature over the spatial extent.
    pub fn lp_norm_pow(&self, p: f64) -> f64 {
        let (a, b) = self.spatial_extent(1e-18);
        let width = 0.5 / self.base.unit();
        let panels = ((b - a) / width).ceil() as usize;
        // oscillation only matters where tails of neighbours overlap
        composite(a, b, panels.max(8), 16, |x| self.eval(x).norm().powf(p))
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        self.lp_norm_pow(p).powf(1.0 / p)
    }
}

/// Train over m ∈ [−N, N] centred at A·a·m with modulation slope·m.
pub fn make_bump_train(base: Bump, n: u64, spacing: u64, slope: f64, scale: f64) -> Result<BumpTrain> {
    if spacing == 0 {
        return Err(Error::Config("spacing A must be at least 1".into()));
    }
    if scale == 0.0 {
        return Err(Error::ZeroScale(0));
    }
    Ok(BumpTrain {
        base,
        lo: -(n as i64),
        hi: n as i64,
        spacing: spacing as f64,
        scale,
        modulation: Modulation::Linear { slope },
    })
}

/// f₁ = Σ φ(x − Am)e^{−2πi2^m x}, f₂ = f₃ = Σ φ(x − Am)e^{2πi2^m x}, 1 ≤ m ≤ N, A = 2^M,
/// with bump half-width ¼.
pub fn make_dyadic_chirps(n: u64, m: u32) -> Result<[BumpTrain; 3]> {
    if m < 3 {
        return Err(Error::Config(format!("spacing exponent must be at least 3, got {m}")));
    }
    dyadic_chirps_with_spacing(n, 1u64 << m)
}

pub fn dyadic_chirps_with_spacing(n: u64, spacing: u64) -> Result<[BumpTrain; 3]> {
    if !spacing.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(spacing));
    }
    if n == 0 {
        return Err(Error::Config("chirp length N must be at least 1".into()));
    }
    if n > 50 {
        return Err(Error::Config("chirp length N above 50 overflows the dyadic law".into()));
    }
    let base = Bump::new(0.25)?;
    let train = |sign: i8| BumpTrain {
        base,
        lo: 1,
        hi: n as i64,
        spacing: spacing as f64,
        scale: 1.0,
        modulation: Modulation::Dyadic { sign },
    };
    Ok([train(-1), train(1), train(1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Numerical transform of a train by quadrature over its spatial extent.
    fn numeric_transform(f: &BumpTrain, xi: f64) -> Complex64 {
        let (a, b) = f.spatial_extent(1e-20);
        let panels = ((b - a) * (2.0 + xi.abs())).ceil() as usize;
        composite(a, b, panels, 16, |x| {
            f.eval(x) * Complex64::from_polar(1.0, -2.0 * PI * x * xi)
        })
    }

    #[test]
    fn bump_invariants() {
        let b = Bump::new(0.5).unwrap();
        for i in 0..100_000 {
            let x = -200.0 + 400.0 * i as f64 / 100_000.0;
            assert!(b.spatial(x) >= 0.0);
        }
        let l1: f64 = composite(-0.25, 0.25, 6, 16, |u| b.profile(u));
        assert!((b.spatial(0.0) - l1 * l1).abs() < 1e-15);
        assert!(b.spatial(0.0) > 0.0);
        assert_eq!(b.spectral(0.5), 0.0);
        assert_eq!(b.spectral(-0.6), 0.0);
        assert!((b.spectral(0.2) - b.spectral(-0.2)).abs() < 1e-16);
    }

    #[test]
    fn spectral_side_is_the_transform_of_the_spatial_side() {
        let b = Bump::new(0.5).unwrap();
        let r = b.decay_radius(1e-20);
        for xi in [0.0, 0.1, 0.33, 0.49, 0.55, 1.3] {
            let num: f64 = composite(-r, r, (2.0 * r) as usize, 16, |x| {
                b.spatial(x) * (2.0 * PI * x * xi).cos()
            });
            assert!((num - b.spectral(xi)).abs() < 1e-10, "xi={xi}: {num} vs {}", b.spectral(xi));
        }
    }

    #[test]
    fn profile_and_its_inverse_agree() {
        let b = Bump::with_order(0.5, 4).unwrap();
        for x in [0.0, 0.7, 3.0] {
            let num: f64 = composite(-0.25, 0.25, 4, 16, |u| b.profile(u) * (2.0 * PI * u * x).cos());
            assert!((num - b.profile_inverse(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn single_bump_train_is_the_bump() {
        let b = Bump::new(0.5).unwrap();
        let f = make_bump_train(b, 0, 32, 5.0, 1.0).unwrap();
        for x in [-3.0, 0.0, 1.7] {
            assert!((f.eval(x).re - b.spatial(x)).abs() < 1e-16);
            assert_eq!(f.eval(x).im, 0.0);
        }
    }

    #[test]
    fn separated_train_norm_scales_with_length() {
        let b = Bump::new(0.5).unwrap();
        for p in [1.5, 2.0, 3.0] {
            let single = b.lp_norm_pow(p);
            let f = make_bump_train(b, 3, 64, 1.0, 1.0).unwrap();
            let ratio = f.lp_norm_pow(p) / (7.0 * single);
            assert!((ratio - 1.0).abs() < 0.01, "p={p}: {ratio}");
        }
    }

    #[test]
    fn transform_matches_closed_form_and_support() {
        let b = Bump::new(0.5).unwrap();
        let f = make_bump_train(b, 2, 16, 3.0, 1.0).unwrap();
        let mut worst: f64 = 0.0;
        let scale = f.spectral(0.0).norm();
        for xi in [-6.2, -3.0, -0.1, 0.0, 0.3, 2.9, 5.6] {
            let num = numeric_transform(&f, xi);
            worst = worst.max((num - f.spectral(xi)).norm() / scale);
        }
        assert!(worst < 1e-8, "{worst}");
        // outside ∪[μ − h, μ + h] the numerical transform is negligible
        let total: f64 = f.lp_norm_pow(2.0);
        let mut outside = 0.0;
        let step = 0.05;
        let mut xi = -8.0;
        while xi < 8.0 {
            let inside = f.spectral_support().iter().any(|(a, c)| xi > *a && xi < *c);
            if !inside {
                outside += numeric_transform(&f, xi).norm_sqr() * step;
            }
            xi += step;
        }
        assert!(outside < 1e-8 * total, "{outside} vs {total}");
    }

    #[test]
    fn dyadic_chirps_have_the_declared_windows() {
        let [f1, f2, f3] = make_dyadic_chirps(5, 7).unwrap();
        assert_eq!(f1.spacing, 128.0);
        for m in 1..=5 {
            let mu = 2f64.powi(m as i32);
            assert_eq!(f1.frequency(m), -mu);
            assert_eq!(f2.frequency(m), mu);
            assert_eq!(f3.spectral_support()[(m - 1) as usize], (mu - 0.25, mu + 0.25));
        }
        let [g1, ..] = make_dyadic_chirps(1, 3).unwrap();
        assert_eq!(g1.len(), 1);
        assert_eq!(dyadic_chirps_with_spacing(2, 100), Err(Error::NotPowerOfTwo(100)));
        assert!(make_dyadic_chirps(2, 2).is_err());
    }

    proptest! {
        #[test]
        fn bump_is_nonnegative(x in -1e4f64..1e4, h in 0.05f64..2.0) {
            prop_assert!(Bump::new(h).unwrap().spatial(x) >= 0.0);
        }

        #[test]
        fn consecutive_bumps_are_spectrally_disjoint(a in 16u64..64, sharp in 1.0f64..4.0) {
            let b = Bump::new(0.5).unwrap();
            let f = make_bump_train(b, 4, a, sharp * 2.0 * b.h, 1.0).unwrap();
            let s = f.spectral_support();
            for w in s.windows(2) {
                prop_assert!(w[0].1 <= w[1].0);
            }
        }
    }
}
