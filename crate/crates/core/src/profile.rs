//! Scalar profiles shared by symbols and witnesses: a C^∞ transition ramp and
//! cardinal B-splines with their closed-form Fourier transforms.

/// e^{-1/t} for t > 0, else 0.
#[inline]
fn flat(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// C^∞ ramp: 0 for t ≤ 0, 1 for t ≥ 1, strictly monotone in between.
#[inline]
pub fn ramp(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = flat(t);
        a / (a + flat(1.0 - t))
    }
}

/// Plateau of height one on [-inner, inner], vanishing outside [-outer, outer].
#[inline]
pub fn plateau(x: f64, inner: f64, outer: f64) -> f64 {
    ramp((outer - x.abs()) / (outer - inner))
}

/// Cardinal B-spline of order `r` (degree r−1) centred at 0 with unit knot spacing,
/// support [−r/2, r/2], unit integral. Cox–de Boor recursion keeps it nonnegative.
pub fn cardinal_bspline(r: usize, x: f64) -> f64 {
    let u = x + r as f64 / 2.0;
    if u <= 0.0 || u >= r as f64 {
        return 0.0;
    }
    // Order-1 pieces on [j, j+1), then raise the order in place.
    let mut vals = [0.0f64; 64];
    assert!(r < 64, "B-spline order too large");
    let cell = u.floor() as usize;
    for (j, v) in vals.iter_mut().enumerate().take(r) {
        *v = if j == cell { 1.0 } else { 0.0 };
    }
    for k in 2..=r {
        let kf = (k - 1) as f64;
        for j in 0..=(r - k) {
            let left = (u - j as f64) / kf * vals[j];
            let right = (j as f64 + k as f64 - u) / kf * vals[j + 1];
            vals[j] = left + right;
        }
    }
    vals[0]
}

/// sin(πx)/(πx) with the removable singularity filled in.
#[inline]
pub fn sinc_pi(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - (std::f64::consts::PI * x).powi(2) / 6.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::composite;

    #[test]
    fn ramp_is_a_smooth_step() {
        assert_eq!(ramp(-0.1), 0.0);
        assert_eq!(ramp(1.2), 1.0);
        assert!((ramp(0.5) - 0.5).abs() < 1e-15);
        for i in 1..100 {
            let t = i as f64 / 100.0;
            assert!(ramp(t) >= ramp(t - 0.01));
            assert!((ramp(t) + ramp(1.0 - t) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bspline_has_unit_mass_and_known_values() {
        for r in [1usize, 2, 4, 6, 12] {
            let mass: f64 = composite(-(r as f64) / 2.0, r as f64 / 2.0, 4 * r, 16, |x| {
                cardinal_bspline(r, x)
            });
            assert!((mass - 1.0).abs() < 1e-12, "r={r} mass={mass}");
        }
        // hat function and cubic B-spline centre values
        assert!((cardinal_bspline(2, 0.0) - 1.0).abs() < 1e-15);
        assert!((cardinal_bspline(4, 0.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((cardinal_bspline(4, 1.0) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn bspline_transform_is_sinc_power() {
        // ∫ M_r(x) cos(2πξx) dx = sinc(ξ)^r
        let r = 6;
        for xi in [0.0, 0.3, 1.1, 2.5] {
            let v: f64 = composite(-3.0, 3.0, 6, 24, |x| {
                cardinal_bspline(r, x) * (2.0 * std::f64::consts::PI * xi * x).cos()
            });
            assert!((v - sinc_pi(xi).powi(r as i32)).abs() < 1e-13);
        }
    }
}
