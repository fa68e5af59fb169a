//! Multilinear operators on bump trains: frequency-side multipliers, kernel blocks with
//! principal-value pairing, Carleson-type maximal cuts, the kernel lower-bound lemma and
//! Littlewood–Paley maximal variants.

pub mod carleson;
pub mod kernel;
pub mod lemma;
pub mod maximal;
pub mod multiplier;
pub mod packets;

use num_complex::Complex64;

use crate::quadrature::{composite, pv_symmetric};

pub use carleson::{anchor_cut, apply_ncarleson, apply_ncarleson_kernel, carleson_kernel_profile, gap_cuts, CarlesonProfile, KernelPathOptions};
pub use kernel::{apply_kernel_blocks, apply_kernel_form, BlockIndex, BlockOptions, EvenKernelTable, KernelKind, KernelSpec};
pub use lemma::{calibrate_k0, verify_kernel_lemma, HalvingRow, LemmaReport, LemmaRow, LemmaSetup};
pub use maximal::{apply_maximal_variant, apply_sgn_paraproduct, LpFamily, MaximalKind};
pub use multiplier::{apply_multiplier, apply_multiplier_dense, sign_multiplier_1d, QuadOptions};

pub(crate) const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// p.v.∫ g(x − t) dt/t for g concentrated on `support`, oscillating at most `max_freq`.
///
/// The window around t = 0 is paired symmetrically; everything else is plain composite
/// Gauss–Legendre with at least eight nodes per oscillation.
pub(crate) fn pv_hilbert(g: &dyn Fn(f64) -> Complex64, x: f64, support: (f64, f64), max_freq: f64) -> Complex64 {
    let (tl, tr) = (x - support.1, x - support.0);
    let panel = (0.5 / max_freq.max(0.5)).min(1.0);
    pv_window(&|t| g(x - t), (tl, tr), panel, 16)
}

/// p.v.∫_{tl}^{tr} h(t) dt/t with symmetric pairing whenever the window is close to 0.
pub(crate) fn pv_window(h: &dyn Fn(f64) -> Complex64, (tl, tr): (f64, f64), panel: f64, nodes: usize) -> Complex64 {
    let len = tr - tl;
    if len <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let near = tl.abs().min(tr.abs());
    if (tl <= 0.0 && tr >= 0.0) || near < len {
        let a = tl.abs().max(tr.abs());
        let panels = (a / panel).ceil().max(1.0) as usize;
        pv_symmetric(a, panels, nodes, h)
    } else {
        let panels = (len / panel).ceil().max(1.0) as usize;
        composite(tl, tr, panels, nodes, |t| h(t) * (1.0 / t))
    }
}
