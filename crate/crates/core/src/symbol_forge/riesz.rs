//! Normalization of the first Riesz kernel s₁/|s|^{d+1} on ℝ^d.
//!
//! Its transform is −i·c_d·η₁/|η|. In polar coordinates the constant splits into an
//! angular moment ∫_{S^{d−1}} |ω₁| dω and the oscillatory integral ∫_0^∞ sin(2πr)/r dr,
//! both evaluated numerically here and cached on disk.

use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};

use std::collections::HashMap;

use crate::quadrature::composite;

/// Environment variable naming the directory for calibration caches.
pub const CACHE_ENV: &str = "BLOWUP_CACHE_DIR";

/// ∫_0^π sin^k θ dθ.
fn sine_power_integral(k: u32) -> f64 {
    composite(0.0, std::f64::consts::PI, 16, 24, |t: f64| t.sin().powi(k as i32))
}

/// Surface area of S^k ⊂ ℝ^{k+1}.
fn sphere_area(k: u32) -> f64 {
    // |S^0| = 2, |S^k| = |S^{k−1}|·∫_0^π sin^{k−1}
    (1..=k).fold(2.0, |acc, j| acc * sine_power_integral(j - 1))
}

/// ∫_{S^{d−1}} |ω₁| dω.
pub fn angular_moment(d: u32) -> f64 {
    assert!(d >= 1);
    if d == 1 {
        return 2.0;
    }
    let inner = composite(0.0, std::f64::consts::PI, 32, 24, |t: f64| {
        t.cos().abs() * t.sin().powi(d as i32 - 2)
    });
    sphere_area(d - 2) * inner
}

/// ∫_0^∞ sin(2πr)/r dr by half-period blocks and repeated averaging of the partial sums.
pub fn sine_integral_at_infinity() -> f64 {
    let blocks = 40;
    let mut partial = Vec::with_capacity(blocks);
    let mut acc = 0.0;
    for k in 0..blocks {
        let a = 0.5 * k as f64;
        acc += composite(a, a + 0.5, 1, 32, |r: f64| {
            if r == 0.0 {
                2.0 * std::f64::consts::PI
            } else {
                (2.0 * std::f64::consts::PI * r).sin() / r
            }
        });
        partial.push(acc);
    }
    // Euler transform of an alternating tail: average neighbours until one value remains.
    let mut level = partial[blocks - 20..].to_vec();
    while level.len() > 1 {
        level = level.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    level[0]
}

fn compute(d: u32) -> f64 {
    angular_moment(d) * sine_integral_at_infinity()
}

fn cache_file(d: u32) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(|dir| PathBuf::from(dir).join(format!("riesz_c{d}.json")))
}

/// c_d with K̂_d(η) = −i c_d η₁/|η|; memoized in-process and, when the cache
/// directory variable is set, on disk.
pub fn riesz_constant(d: u32) -> f64 {
    static MEMO: OnceLock<Mutex<HashMap<u32, f64>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&c) = memo.lock().expect("riesz memo poisoned").get(&d) {
        return c;
    }
    let from_disk = cache_file(d).and_then(|p| {
        let text = std::fs::read_to_string(p).ok()?;
        let v: serde_json::Value = serde_json::from_str(&text).ok()?;
        v.get("c_d")?.as_f64()
    });
    let c = match from_disk {
        Some(c) => c,
        None => {
            let c = compute(d);
            if let Some(p) = cache_file(d) {
                if let Some(dir) = p.parent() {
                    let _ = std::fs::create_dir_all(dir);
                }
                let _ = std::fs::write(p, serde_json::json!({ "d": d, "c_d": c }).to_string());
            }
            c
        }
    };
    memo.lock().expect("riesz memo poisoned").insert(d, c);
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn oscillatory_integral_is_quarter_turn() {
        assert!((sine_integral_at_infinity() - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn constants_match_closed_form() {
        // π^{(d+1)/2} / Γ((d+1)/2)
        let closed = [PI, 2.0 * PI, PI * PI, 4.0 * PI * PI / 3.0];
        for (d, want) in (1..=4).zip(closed) {
            let got = compute(d);
            assert!((got - want).abs() < 1e-9 * want, "d={d}: {got} vs {want}");
        }
    }

    #[test]
    fn cache_is_written_and_read_back() {
        let dir = tempfile::tempdir().unwrap();
        std::env::set_var(CACHE_ENV, dir.path());
        let c7 = riesz_constant(7);
        assert!((c7 - compute(7)).abs() < 1e-15);
        assert!(dir.path().join("riesz_c7.json").exists());
        // a planted value proves the disk path is consulted before recomputing
        std::fs::write(dir.path().join("riesz_c8.json"), r#"{"d":8,"c_d":1.25}"#).unwrap();
        assert_eq!(riesz_constant(8), 1.25);
        std::env::remove_var(CACHE_ENV);
    }
}
