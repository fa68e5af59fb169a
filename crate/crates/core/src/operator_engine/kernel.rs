//! Kernel side: ∫∫ ∏ f_j(x − α_j t − β_j s) K₁(t) K₂(s) ds dt split into blocks of side A.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{composite, gauss_legendre};
use crate::witness_functions::BumpTrain;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KernelKind {
    /// p.v. 1/t.
    Hilbert,
    /// s₁/|s|^{d+1} restricted to one variable; only d = 1 has a scalar form.
    Riesz { d: u32 },
    /// sgn(t)/|t|^p with 0 < p ≤ 1.
    OddPower { exponent: f64 },
}

/// An odd kernel with its lower-bound constants: K(t) ≥ c1/t for t ≥ 1 and
/// liminf Im Ǩ(s) = c2 as s → ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub c1: f64,
    pub c2: f64,
}

impl KernelSpec {
    pub fn hilbert() -> Self {
        KernelSpec {
            kind: KernelKind::Hilbert,
            c1: 1.0,
            c2: std::f64::consts::PI,
        }
    }

    pub fn riesz(d: u32) -> Result<Self> {
        if d != 1 {
            return Err(Error::Config(format!(
                "the Riesz kernel in {d} variables has no scalar block form"
            )));
        }
        Ok(KernelSpec {
            kind: KernelKind::Riesz { d },
            ..Self::hilbert()
        })
    }

    pub fn odd_power(exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent <= 1.0) {
            return Err(Error::Config(format!("odd power exponent must lie in (0, 1], got {exponent}")));
        }
        // Ǩ(s) = 2i Γ(1−p) cos(πp/2) (2πs)^{p−1}; the limit is π at p = 1 and 0 below
        let c2 = if exponent == 1.0 { std::f64::consts::PI } else { 0.0 };
        Ok(KernelSpec {
            kind: KernelKind::OddPower { exponent },
            c1: 1.0,
            c2,
        })
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match self.kind {
            KernelKind::Hilbert | KernelKind::Riesz { .. } => 1.0 / t,
            KernelKind::OddPower { exponent } => t.signum() * t.abs().powf(-exponent),
        }
    }

    /// t·K(t), bounded near the origin for every supported kind.
    #[inline]
    pub fn eval_times_t(&self, t: f64) -> f64 {
        match self.kind {
            KernelKind::Hilbert | KernelKind::Riesz { .. } => 1.0,
            KernelKind::OddPower { exponent } => t.abs().powf(1.0 - exponent),
        }
    }
}

/// The window [A(k−½), A(k+½)] × [A(l−½), A(l+½)].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockIndex {
    pub k: i64,
    pub l: i64,
}

impl BlockIndex {
    pub fn window(&self, a: f64) -> ((f64, f64), (f64, f64)) {
        let k = self.k as f64;
        let l = self.l as f64;
        ((a * (k - 0.5), a * (k + 0.5)), (a * (l - 0.5), a * (l + 0.5)))
    }

    /// All blocks with |k|, |l| ≤ radius (l = 0 only when `single`).
    pub fn square(radius: i64, single: bool) -> Vec<BlockIndex> {
        let ls = if single { 0..=0 } else { -radius..=radius };
        (-radius..=radius)
            .flat_map(|k| ls.clone().map(move |l| BlockIndex { k, l }))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockOptions {
    /// Composite panel width in the kernel variables.
    pub panel: f64,
    pub nodes: usize,
    /// Pair t with −t inside blocks that contain the singularity.
    pub pv_pairing: bool,
}

impl Default for BlockOptions {
    fn default() -> Self {
        BlockOptions {
            panel: 0.25,
            nodes: 12,
            pv_pairing: true,
        }
    }
}

impl BlockOptions {
    /// Panel small enough for the fastest phase any bump tuple can produce.
    pub fn for_trains(trains: &[BumpTrain], alpha: &[f64]) -> Self {
        let speed: f64 = trains
            .iter()
            .zip(alpha)
            .map(|(t, a)| {
                let top = t.frequency(t.lo).abs().max(t.frequency(t.hi).abs()) + t.base.h;
                a.abs() * top
            })
            .sum();
        BlockOptions {
            panel: (0.25 / speed.max(1.0)).min(0.25),
            ..Default::default()
        }
    }
}

fn eval_trains(trains: &[BumpTrain], args: impl Iterator<Item = f64>, radius: f64) -> Complex64 {
    trains
        .iter()
        .zip(args)
        .map(|(f, y)| f.eval_near(y, radius))
        .product()
}

/// ∫ over one kernel variable: symmetric pairing when the window holds 0.
fn block_1d(
    (a, b): (f64, f64),
    kernel: &KernelSpec,
    opts: &BlockOptions,
    h: &dyn Fn(f64) -> Complex64,
) -> Complex64 {
    if a < 0.0 && b > 0.0 {
        // t K(t) is even, so pairing reduces to (h(t) − h(−t))·tK(t)/t
        let r = a.abs().max(b);
        let panels = (r / opts.panel).ceil() as usize;
        let paired = composite(0.0, a.abs().min(b), panels.max(1), opts.nodes, |t| {
            (h(t) - h(-t)) * (kernel.eval_times_t(t) / t)
        });
        // leftover one-sided strip when the window is not symmetric
        let rest = if b > -a {
            composite(-a, b, ((b + a) / opts.panel).ceil().max(1.0) as usize, opts.nodes, |t| h(t) * kernel.eval(t))
        } else if -a > b {
            composite(a, -b, ((-a - b) / opts.panel).ceil().max(1.0) as usize, opts.nodes, |t| h(t) * kernel.eval(t))
        } else {
            Complex64::new(0.0, 0.0)
        };
        paired + rest
    } else {
        let panels = ((b - a) / opts.panel).ceil().max(1.0) as usize;
        composite(a, b, panels, opts.nodes, |t| h(t) * kernel.eval(t))
    }
}

/// Σ over `window` of ∫∫_block ∏ f_j(x − α_j t − β_j s) K₁(t) K₂(s). With `beta = None`
/// there is a single kernel variable and every block must have l = 0.
#[allow(clippy::too_many_arguments)]
pub fn apply_kernel_blocks(
    trains: &[BumpTrain],
    alpha: &[f64],
    beta: Option<&[f64]>,
    k1: &KernelSpec,
    k2: &KernelSpec,
    a: u64,
    x: f64,
    window: &[BlockIndex],
    opts: &BlockOptions,
) -> Result<Complex64> {
    let n = trains.len();
    if alpha.len() != n || beta.is_some_and(|b| b.len() != n) {
        return Err(Error::Dimension("α, β and the trains must share a length".into()));
    }
    for kind in [k1.kind, k2.kind] {
        if let KernelKind::Riesz { d } = kind {
            KernelSpec::riesz(d)?;
        }
    }
    let radius = trains
        .iter()
        .map(|t| t.base.decay_radius(1e-16))
        .fold(0.0, f64::max);
    let af = a as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for blk in window {
        let singular = blk.k == 0 || (beta.is_some() && blk.l == 0);
        if singular && !opts.pv_pairing {
            return Err(Error::Config(format!(
                "block ({}, {}) meets the singularity and pairing is disabled",
                blk.k, blk.l
            )));
        }
        let (tw, sw) = blk.window(af);
        let v = match beta {
            None => {
                if blk.l != 0 {
                    return Err(Error::Config("single-variable blocks must have l = 0".into()));
                }
                block_1d(tw, k1, opts, &|t| eval_trains(trains, alpha.iter().map(|al| x - al * t), radius))
            }
            Some(beta) => block_1d(tw, k1, opts, &|t| {
                block_1d(sw, k2, opts, &|s| {
                    eval_trains(trains, alpha.iter().zip(beta).map(|(al, be)| x - al * t - be * s), radius)
                })
            }),
        };
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Quadrature(format!("block ({}, {}) produced {v}", blk.k, blk.l)));
        }
        acc += v;
    }
    Ok(acc)
}

/// ∫ kernel(t) ∏ f_j(x − α_j t) dt over `range` for a kernel without singularity.
pub fn apply_kernel_form(
    trains: &[BumpTrain],
    alpha: &[f64],
    kernel: &dyn Fn(f64) -> f64,
    x: f64,
    range: (f64, f64),
    panel: f64,
    nodes: usize,
) -> Complex64 {
    let radius = trains
        .iter()
        .map(|t| t.base.decay_radius(1e-16))
        .fold(0.0, f64::max);
    let panels = ((range.1 - range.0) / panel).ceil().max(1.0) as usize;
    composite(range.0, range.1, panels, nodes, |t| {
        let k = kernel(t);
        if k == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        eval_trains(trains, alpha.iter().map(|al| x - al * t), radius) * k
    })
}

/// An even kernel sampled on a uniform grid over [0, t_max], read back by four-point
/// Lagrange interpolation and taken as zero beyond t_max.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvenKernelTable {
    pub step: f64,
    pub values: Vec<f64>,
}

impl EvenKernelTable {
    pub fn tabulate(t_max: f64, step: f64, f: impl Fn(f64) -> f64) -> Self {
        let count = (t_max / step).ceil() as usize + 3;
        EvenKernelTable {
            step,
            values: (0..count).map(|i| f(i as f64 * step)).collect(),
        }
    }

    /// Inverse transform of ξ ↦ profile(ξ/width), where profile is even and supported in
    /// [−1, 1] with smooth pieces split at `breaks` (in units of width).
    pub fn inverse_transform_of_profile(
        profile: impl Fn(f64) -> f64,
        width: f64,
        breaks: &[f64],
        t_max: f64,
        step: f64,
    ) -> Self {
        let mut cuts: Vec<f64> = breaks.iter().map(|b| b * width).filter(|&b| b > 0.0 && b < width).collect();
        cuts.insert(0, 0.0);
        cuts.push(width);
        Self::tabulate(t_max, step, |t| {
            let mut acc = 0.0;
            for w in cuts.windows(2) {
                let cycles = t * (w[1] - w[0]);
                let panels = (cycles / 2.0).ceil().max(1.0) as usize;
                acc += composite(w[0], w[1], panels, 24, |eta: f64| {
                    profile(eta / width) * (super::TWO_PI * t * eta).cos()
                });
            }
            2.0 * acc
        })
    }

    pub fn t_max(&self) -> f64 {
        (self.values.len() - 3) as f64 * self.step
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = t.abs() / self.step;
        let i = u.floor() as usize;
        if i + 2 >= self.values.len() {
            return 0.0;
        }
        // stencil i−1..i+2, reflected through 0 by evenness
        let at = |j: isize| self.values[j.unsigned_abs()];
        let s = u - i as f64;
        let i = i as isize;
        let (p0, p1, p2, p3) = (at(i - 1), at(i), at(i + 1), at(i + 2));
        -s * (s - 1.0) * (s - 2.0) / 6.0 * p0 + (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0 * p1
            - (s + 1.0) * s * (s - 2.0) / 2.0 * p2
            + (s + 1.0) * s * (s - 1.0) / 6.0 * p3
    }
}

/// Fixed-order tensor rule helper shared with the lemma module.
pub(crate) fn panel_rule(a: f64, b: f64, panels: usize, nodes: usize) -> Vec<(f64, f64)> {
    let rule = gauss_legendre(nodes);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * nodes);
    for p in 0..panels {
        let mid = a + h * (p as f64 + 0.5);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}
