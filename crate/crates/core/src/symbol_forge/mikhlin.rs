//! Finite-difference estimates of sup |∂^α m(ξ)|·dist(ξ, Γ)^{|α|}.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Symbol;
use crate::error::{Error, Result};
use crate::subspace_lab::Subspace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub points: Vec<Vec<f64>>,
    /// Every point must sit at least this far from the singular set.
    pub margin: f64,
    /// Difference step as a fraction of the distance to the singular set.
    pub step_ratio: f64,
}

/// Points r(cos θ, sin θ) with r geometric over [rmin, rmax] and θ uniform, offset by
/// half a cell so no point lands on a coordinate axis.
pub fn log_polar_grid(rmin: f64, rmax: f64, per_octave: usize, angles: usize) -> SampleGrid {
    let octaves = (rmax / rmin).log2();
    let radii = (octaves * per_octave as f64).ceil() as usize + 1;
    let mut points = Vec::with_capacity(radii * angles);
    for i in 0..radii {
        let r = rmin * 2f64.powf(i as f64 / per_octave as f64);
        for j in 0..angles {
            let t = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / angles as f64;
            points.push(vec![r * t.cos(), r * t.sin()]);
        }
    }
    SampleGrid {
        points,
        margin: 0.5 * rmin,
        step_ratio: 0.01,
    }
}

impl SampleGrid {
    /// Twice the density in every direction and half the difference step.
    pub fn refined_log_polar(rmin: f64, rmax: f64, per_octave: usize, angles: usize) -> Self {
        let mut g = log_polar_grid(rmin, rmax, 2 * per_octave, 2 * angles);
        g.step_ratio = 0.005;
        g
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MikhlinEntry {
    pub multi_index: Vec<usize>,
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MikhlinReport {
    pub entries: Vec<MikhlinEntry>,
}

impl MikhlinReport {
    pub fn constant(&self, multi_index: &[usize]) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.multi_index == multi_index)
            .map(|e| e.constant)
    }

    /// Largest relative change between matching entries, ignoring entries that are
    /// negligible in both reports.
    pub fn drift(&self, other: &MikhlinReport) -> f64 {
        let mut worst: f64 = 0.0;
        for e in &self.entries {
            if let Some(c) = other.constant(&e.multi_index) {
                let scale = e.constant.abs().max(c.abs());
                if scale > 1e-9 {
                    worst = worst.max((e.constant - c).abs() / scale);
                }
            }
        }
        worst
    }
}

/// Multi-indices of total order ≤ `max_order` in `n` variables, graded then lexicographic.
pub fn multi_indices(n: usize, max_order: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for order in 0..=max_order {
        let mut cur = vec![0; n];
        fill(&mut cur, 0, order, &mut out);
    }
    out
}

fn fill(cur: &mut Vec<usize>, i: usize, left: usize, out: &mut Vec<Vec<usize>>) {
    if i == cur.len() - 1 {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    for take in (0..=left).rev() {
        cur[i] = take;
        fill(cur, i + 1, left - take, out);
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// |Δ^α m(ξ)|, central differences with step h in each differentiated coordinate.
pub fn central_difference(m: &Symbol, xi: &[f64], alpha: &[usize], h: f64) -> f64 {
    // tensor product of one-dimensional stencils (offset, weight)
    let mut terms: Vec<(Vec<f64>, f64)> = vec![(xi.to_vec(), 1.0)];
    for (i, &o) in alpha.iter().enumerate() {
        if o == 0 {
            continue;
        }
        let scale = h.powi(o as i32);
        let mut next = Vec::with_capacity(terms.len() * (o + 1));
        for (p, w) in &terms {
            for k in 0..=o {
                let mut q = p.clone();
                q[i] += (o as f64 / 2.0 - k as f64) * h;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                next.push((q, w * sign * binomial(o, k) / scale));
            }
        }
        terms = next;
    }
    terms
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, (p, w)| acc + m.eval(p) * *w)
        .norm()
}

pub fn check_mikhlin(
    m: &Symbol,
    gamma: &Subspace,
    max_order: usize,
    grid: &SampleGrid,
) -> Result<MikhlinReport> {
    let n = gamma.ambient;
    let dists: Vec<f64> = grid.points.iter().map(|p| gamma.distance(p)).collect();
    if let Some(i) = dists.iter().position(|&d| d < grid.margin) {
        return Err(Error::InsideMargin(grid.points[i].clone()));
    }
    let entries = multi_indices(n, max_order)
        .into_iter()
        .map(|alpha| {
            let order: usize = alpha.iter().sum();
            let constant = grid
                .points
                .iter()
                .zip(&dists)
                .map(|(p, &d)| {
                    let h = grid.step_ratio * d;
                    central_difference(m, p, &alpha, h) * d.powi(order as i32)
                })
                .fold(0.0, f64::max);
            MikhlinEntry {
                multi_index: alpha,
                constant,
            }
        })
        .collect();
    Ok(MikhlinReport { entries })
}
