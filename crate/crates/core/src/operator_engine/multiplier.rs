//! Frequency-side evaluation of T_m(f₁, …, f_n)(x) = ∫ m(ξ) ∏ f̂_j(ξ_j) e^{2πixξ_j} dξ
//! over bump trains, one spectral box per bump tuple.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::symbol_forge::{BoxClass, Breakplane, Symbol};
use crate::witness_functions::BumpTrain;

use super::TWO_PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadOptions {
    /// Gauss–Legendre nodes on each smooth piece before oscillation is counted.
    pub base_nodes: usize,
    /// Extra nodes per oscillation cycle.
    pub nodes_per_cycle: f64,
    /// Integrate boxes the symbol declares constant instead of using the closed form.
    pub force_quadrature: bool,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            base_nodes: 16,
            nodes_per_cycle: 6.0,
            force_quadrature: false,
        }
    }
}

impl QuadOptions {
    pub fn refined(&self) -> Self {
        QuadOptions {
            base_nodes: 2 * self.base_nodes,
            nodes_per_cycle: 2.0 * self.nodes_per_cycle,
            ..*self
        }
    }
}

/// Odometer over the index ranges of the trains, last index fastest.
pub(crate) fn for_each_tuple(trains: &[BumpTrain], mut visit: impl FnMut(&[i64])) {
    if trains.iter().any(BumpTrain::is_empty) {
        return;
    }
    let mut idx: Vec<i64> = trains.iter().map(|t| t.lo).collect();
    loop {
        visit(&idx);
        let mut i = trains.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < trains[i].hi {
                idx[i] += 1;
                break;
            }
            idx[i] = trains[i].lo;
        }
    }
}

fn check_inputs(m: &Symbol, trains: &[BumpTrain]) -> Result<()> {
    if let Some(n) = m.arity() {
        if n != trains.len() {
            return Err(Error::Dimension(format!(
                "symbol takes {n} variables, got {} trains",
                trains.len()
            )));
        }
    }
    let sup = m.sup_bound();
    if !sup.is_finite() {
        return Err(Error::Unbounded(sup));
    }
    Ok(())
}

/// Breakplane with the index of its last nonzero coordinate.
struct Plane<'a> {
    plane: &'a Breakplane,
    last: usize,
}

struct BoxQuadrature<'a> {
    trains: &'a [BumpTrain],
    tuple: &'a [i64],
    x: f64,
    planes: Vec<Plane<'a>>,
    knots: Vec<Vec<f64>>,
    symbol: &'a dyn Fn(&[f64]) -> Complex64,
    opts: QuadOptions,
}

impl BoxQuadrature<'_> {
    fn factor(&self, i: usize, xi: f64) -> Complex64 {
        self.trains[i].spectral_term(self.tuple[i], xi) * Complex64::from_polar(1.0, TWO_PI * self.x * xi)
    }

    fn breakpoints(&self, i: usize, prefix: &[f64]) -> Vec<f64> {
        let (lo, hi) = (self.knots[i][0], *self.knots[i].last().unwrap());
        let mut pts = self.knots[i].clone();
        let partial = |p: &Breakplane, upto: usize| -> f64 {
            p.normal[..upto].iter().zip(prefix).map(|(a, b)| a * b).sum::<f64>()
        };
        for p in &self.planes {
            let nrm = &p.plane.normal;
            if p.last == i {
                pts.push((p.plane.offset - partial(p.plane, i)) / nrm[i]);
            } else if p.last == i + 1 && nrm[i] != 0.0 {
                // kinks of the inner integral: the inner crossing meets an inner knot
                let rest = p.plane.offset - partial(p.plane, i);
                for &k in &self.knots[i + 1] {
                    pts.push((rest - nrm[i + 1] * k) / nrm[i]);
                }
            }
        }
        pts.retain(|&t| t.is_finite() && t >= lo && t <= hi);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * (1.0 + b.abs()));
        pts
    }

    fn integrate(&self, i: usize, xi: &mut Vec<f64>) -> Complex64 {
        let n = self.trains.len();
        let osc = (self.x - self.trains[i].center(self.tuple[i])).abs();
        let pts = self.breakpoints(i, &xi[..i]);
        let mut acc = Complex64::new(0.0, 0.0);
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a <= 0.0 {
                continue;
            }
            let cycles = osc * (b - a);
            let sub = (cycles / 4.0).ceil().max(1.0) as usize;
            let nodes = self.opts.base_nodes + (self.opts.nodes_per_cycle * cycles / sub as f64).ceil() as usize;
            let rule = gauss_legendre(nodes);
            let width = (b - a) / sub as f64;
            for s in 0..sub {
                let lo = a + width * s as f64;
                let mid = lo + 0.5 * width;
                for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
                    let v = mid + 0.5 * width * t;
                    let f = self.factor(i, v);
                    if f == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    xi.push(v);
                    let inner = if i + 1 == n {
                        (self.symbol)(xi)
                    } else {
                        self.integrate(i + 1, xi)
                    };
                    xi.pop();
                    acc += f * inner * (0.5 * width * wt);
                }
            }
        }
        acc
    }
}

fn spectral_box(trains: &[BumpTrain], tuple: &[i64]) -> (Vec<f64>, Vec<f64>) {
    trains
        .iter()
        .zip(tuple)
        .map(|(t, &m)| {
            let mu = t.frequency(m);
            (mu - t.base.h, mu + t.base.h)
        })
        .unzip()
}

/// ∫ over one tuple's box of symbol(ξ)∏ spectral_term_j(ξ_j)e^{2πixξ_j}, split along the
/// bump knots and the given breakplanes.
pub(crate) fn integrate_box(
    trains: &[BumpTrain],
    tuple: &[i64],
    x: f64,
    planes: &[Breakplane],
    symbol: &dyn Fn(&[f64]) -> Complex64,
    opts: QuadOptions,
) -> Complex64 {
    let knots = trains
        .iter()
        .zip(tuple)
        .map(|(t, &m)| {
            let mu = t.frequency(m);
            t.base.spectral_knots().into_iter().map(|k| k + mu).collect()
        })
        .collect();
    let planes = planes
        .iter()
        .filter_map(|p| {
            let last = p.normal.iter().rposition(|&c| c != 0.0)?;
            Some(Plane { plane: p, last })
        })
        .collect();
    let q = BoxQuadrature {
        trains,
        tuple,
        x,
        planes,
        knots,
        symbol,
        opts,
    };
    q.integrate(0, &mut Vec::with_capacity(trains.len()))
}

fn apply_at(m: &Symbol, trains: &[BumpTrain], planes: &[Breakplane], x: f64, opts: QuadOptions) -> Complex64 {
    let eval = |xi: &[f64]| m.eval(xi);
    let mut acc = Complex64::new(0.0, 0.0);
    for_each_tuple(trains, |tuple| {
        let (lo, hi) = spectral_box(trains, tuple);
        match m.classify_box(&lo, &hi) {
            BoxClass::Zero => {}
            BoxClass::Constant(c) if !opts.force_quadrature => {
                let prod: Complex64 = trains.iter().zip(tuple).map(|(t, &j)| t.term(j, x)).product();
                acc += c * prod;
            }
            _ => acc += integrate_box(trains, tuple, x, planes, &eval, opts),
        }
    });
    acc
}

/// T_m(f⃗)(x) for each x; the quadrature covers only the product of the bump spectra.
pub fn apply_multiplier(m: &Symbol, trains: &[BumpTrain], xs: &[f64], opts: QuadOptions) -> Result<Vec<Complex64>> {
    check_inputs(m, trains)?;
    let planes = m.breakplanes(trains.len());
    Ok(xs.par_iter().map(|&x| apply_at(m, trains, &planes, x, opts)).collect())
}

/// Brute-force reference: every tuple box is bisected wherever the symbol varies across a
/// cell, down to `depth` levels, then integrated with a fixed tensor rule. No symbol
/// structure beyond point evaluation is used.
pub fn apply_multiplier_dense(
    m: &Symbol,
    trains: &[BumpTrain],
    xs: &[f64],
    depth: u32,
    nodes: usize,
) -> Result<Vec<Complex64>> {
    check_inputs(m, trains)?;
    let n = trains.len();
    Ok(xs
        .par_iter()
        .map(|&x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for_each_tuple(trains, |tuple| {
                let (lo, hi) = spectral_box(trains, tuple);
                let cell = DenseCell { trains, tuple, x, m, n, nodes, depth };
                acc += cell.integrate(&lo, &hi, 0);
            });
            acc
        })
        .collect())
}

struct DenseCell<'a> {
    trains: &'a [BumpTrain],
    tuple: &'a [i64],
    x: f64,
    m: &'a Symbol,
    n: usize,
    nodes: usize,
    depth: u32,
}

impl DenseCell<'_> {
    fn varies(&self, lo: &[f64], hi: &[f64]) -> bool {
        let mid: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let centre = self.m.eval(&mid);
        let mut p = vec![0.0; self.n];
        for corner in 0..(1usize << self.n) {
            for i in 0..self.n {
                p[i] = if corner >> i & 1 == 1 { hi[i] } else { lo[i] };
            }
            if (self.m.eval(&p) - centre).norm() > 1e-3 {
                return true;
            }
        }
        false
    }

    fn integrate(&self, lo: &[f64], hi: &[f64], level: u32) -> Complex64 {
        if level < self.depth && self.varies(lo, hi) {
            let mut acc = Complex64::new(0.0, 0.0);
            for child in 0..(1usize << self.n) {
                let mut a = lo.to_vec();
                let mut b = hi.to_vec();
                for i in 0..self.n {
                    let mid = 0.5 * (lo[i] + hi[i]);
                    if child >> i & 1 == 1 {
                        a[i] = mid;
                    } else {
                        b[i] = mid;
                    }
                }
                acc += self.integrate(&a, &b, level + 1);
            }
            return acc;
        }
        // leaves still cut by a discontinuity converge only to first order in the node
        // count, so they get a much denser rule
        let boost = if level == self.depth && self.varies(lo, hi) { 8 } else { 1 };
        self.tensor(lo, hi, boost)
    }

    fn tensor(&self, lo: &[f64], hi: &[f64], boost: usize) -> Complex64 {
        let rules: Vec<(Vec<f64>, Vec<Complex64>)> = (0..self.n)
            .map(|i| {
                let t = &self.trains[i];
                let osc = (self.x - t.center(self.tuple[i])).abs();
                let mu = t.frequency(self.tuple[i]);
                // the spectral bump is a spline, so each rule stops at its knots
                let mut cuts = vec![lo[i]];
                cuts.extend(t.base.spectral_knots().iter().map(|k| k + mu).filter(|&k| k > lo[i] && k < hi[i]));
                cuts.push(hi[i]);
                let mut pts = Vec::new();
                let mut wts = Vec::new();
                for c in cuts.windows(2) {
                    let q = self.nodes * boost + (4.0 * osc * (c[1] - c[0])).ceil() as usize;
                    let rule = gauss_legendre(q);
                    let half = 0.5 * (c[1] - c[0]);
                    let mid = 0.5 * (c[1] + c[0]);
                    for (s, w) in rule.nodes.iter().zip(&rule.weights) {
                        let v = mid + half * s;
                        let f = t.spectral_term(self.tuple[i], v) * Complex64::from_polar(1.0, TWO_PI * self.x * v);
                        pts.push(v);
                        wts.push(f * (w * half));
                    }
                }
                (pts, wts)
            })
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = vec![0usize; self.n];
        let mut p = vec![0.0; self.n];
        loop {
            let mut w = Complex64::new(1.0, 0.0);
            for i in 0..self.n {
                p[i] = rules[i].0[idx[i]];
                w *= rules[i].1[idx[i]];
            }
            if w != Complex64::new(0.0, 0.0) {
                acc += w * self.m.eval(&p);
            }
            let mut i = self.n;
            loop {
                if i == 0 {
                    return acc;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < rules[i].0.len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }
}

/// (i/π)·p.v.∫ g(x − t) dt/t, the one-variable sign multiplier in kernel form, for g
/// concentrated on [a, b] with oscillation at most `max_freq`.
pub fn sign_multiplier_1d(g: &dyn Fn(f64) -> Complex64, x: f64, support: (f64, f64), max_freq: f64) -> Complex64 {
    super::pv_hilbert(g, x, support, max_freq) * Complex64::new(0.0, 1.0 / std::f64::consts::PI)
}
