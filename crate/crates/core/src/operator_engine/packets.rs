//! Single bumps of a train after a one-variable Fourier filter, and the p.v. integral of
//! a product of two such packets.

use std::sync::Arc;

use num_complex::Complex64;

use super::{pv_window, TWO_PI};
use crate::quadrature::gauss_legendre;
use crate::witness_functions::{Bump, BumpTrain};

const TAIL: f64 = 1e-14;

/// Complex profile P(u) on a uniform grid, cubic Lagrange in between, zero outside.
#[derive(Debug, Clone)]
pub struct ProfileTable {
    start: f64,
    step: f64,
    values: Vec<Complex64>,
}

impl ProfileTable {
    /// P(u) = ∫ φ̂(η) w(η + μ) e^{2πiηu} dη.
    fn build(base: &Bump, mu: f64, filter: &dyn Fn(f64) -> f64) -> Self {
        let radius = base.decay_radius(TAIL);
        let step = 1.0 / (128.0 * base.h);
        let count = (2.0 * radius / step).ceil() as usize + 1;
        let start = -radius;
        let mut values = vec![Complex64::new(0.0, 0.0); count];
        let rule = gauss_legendre(24);
        for w in base.spectral_knots().windows(2) {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            for (z, wt) in rule.nodes.iter().zip(&rule.weights) {
                let eta = 0.5 * (a + b) + half * z;
                let amp = wt * half * base.spectral(eta) * filter(eta + mu);
                if amp == 0.0 {
                    continue;
                }
                let mut phase = Complex64::from_polar(amp, TWO_PI * eta * start);
                let rot = Complex64::from_polar(1.0, TWO_PI * eta * step);
                for v in values.iter_mut() {
                    *v += phase;
                    phase *= rot;
                }
            }
        }
        ProfileTable { start, step, values }
    }

    pub fn eval(&self, u: f64) -> Complex64 {
        let pos = (u - self.start) / self.step;
        let n = self.values.len();
        if pos < 1.0 || pos > (n - 3) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let i = pos.floor() as usize - 1;
        let s = pos - (i + 1) as f64;
        let w = [
            -s * (s - 1.0) * (s - 2.0) / 6.0,
            (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0,
            (s + 1.0) * s * (s - 1.0) / 6.0,
        ];
        (0..4).map(|j| self.values[i + j] * w[j]).sum()
    }
}

#[derive(Debug, Clone)]
pub enum PacketShape {
    Zero,
    /// The filter is constant on the spectral support.
    Scaled(f64),
    Profile(Arc<ProfileTable>),
}

/// e^{2πiμy}·P(y − c) for one filtered bump.
#[derive(Debug, Clone)]
pub struct Packet {
    pub base: Bump,
    pub center: f64,
    pub freq: f64,
    pub shape: PacketShape,
}

impl Packet {
    pub fn new(train: &BumpTrain, m: i64, filter: &dyn Fn(f64) -> f64) -> Self {
        let base = train.base;
        let mu = train.frequency(m);
        let center = train.center(m);
        let rule = gauss_legendre(8);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for w in base.spectral_knots().windows(2) {
            let half = 0.5 * (w[1] - w[0]);
            let probe = [w[0], w[1]]
                .into_iter()
                .chain(rule.nodes.iter().map(|z| 0.5 * (w[0] + w[1]) + half * z));
            for eta in probe {
                let v = filter(eta + mu);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        let shape = if hi - lo <= 1e-15 * hi.abs().max(1.0) {
            if hi == 0.0 {
                PacketShape::Zero
            } else {
                PacketShape::Scaled(hi)
            }
        } else {
            PacketShape::Profile(Arc::new(ProfileTable::build(&base, mu, filter)))
        };
        Packet {
            base,
            center,
            freq: mu,
            shape,
        }
    }

    pub fn unfiltered(train: &BumpTrain, m: i64) -> Self {
        Packet {
            base: train.base,
            center: train.center(m),
            freq: train.frequency(m),
            shape: PacketShape::Scaled(1.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.shape, PacketShape::Zero)
    }

    #[inline]
    pub fn eval(&self, y: f64) -> Complex64 {
        let carrier = Complex64::from_polar(1.0, TWO_PI * self.freq * y);
        match &self.shape {
            PacketShape::Zero => Complex64::new(0.0, 0.0),
            PacketShape::Scaled(c) => carrier * (c * self.base.spatial(y - self.center)),
            PacketShape::Profile(t) => carrier * t.eval(y - self.center),
        }
    }

    /// Closed interval holding the spectrum.
    pub fn spectrum(&self) -> (f64, f64) {
        (self.freq - self.base.h, self.freq + self.base.h)
    }

    pub fn radius(&self) -> f64 {
        self.base.decay_radius(TAIL)
    }
}

/// True when the two packets overlap enough in space for their product to matter.
pub fn overlapping(p: &Packet, q: &Packet) -> bool {
    let d = (p.center - q.center).abs();
    let rel = |b: &Bump| b.spatial(0.5 * d) / b.peak();
    rel(&p.base) * rel(&q.base) > TAIL * TAIL
}

/// p.v.∫ p(x − t) q(x − t) dt/t. When the product spectrum avoids 0 this is
/// −iπ·sgn·p(x)q(x) exactly.
pub fn pair_pv(p: &Packet, q: &Packet, x: f64) -> Complex64 {
    if p.is_zero() || q.is_zero() {
        return Complex64::new(0.0, 0.0);
    }
    let (a1, b1) = p.spectrum();
    let (a2, b2) = q.spectrum();
    let (lo, hi) = (a1 + a2, b1 + b2);
    if lo > 0.0 || hi < 0.0 {
        let s = if lo > 0.0 { 1.0 } else { -1.0 };
        return Complex64::new(0.0, -std::f64::consts::PI * s) * p.eval(x) * q.eval(x);
    }
    let r = p.radius().max(q.radius());
    let (y_lo, y_hi) = (p.center.max(q.center) - r, p.center.min(q.center) + r);
    if y_lo >= y_hi {
        return Complex64::new(0.0, 0.0);
    }
    let top = lo.abs().max(hi.abs());
    let panel = 0.5 / top.max(0.5);
    pv_window(&|t| p.eval(x - t) * q.eval(x - t), (x - y_hi, x - y_lo), panel, 16)
}
