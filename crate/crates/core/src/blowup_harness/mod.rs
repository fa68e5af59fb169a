//! Blow-up experiments: witness trains for growing N, an operator evaluated on the
//! anchor set, and the ratio of the restricted output norm to ∏‖f_j‖_{p_j}.

mod output;
mod run;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator_engine::{apply_multiplier, apply_multiplier_dense, QuadOptions};
use crate::rational_core::{parse_rational, rational_to_f64};
use crate::symbol_forge::Symbol;
use crate::witness_functions::BumpTrain;

pub use output::{render_svg, write_outputs};
pub use run::{build_witnesses, run_blowup, Witnesses};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tag {
    #[serde(rename = "MT**")]
    Modulated,
    #[serde(rename = "IT")]
    Chirp,
    #[serde(rename = "MT*")]
    Localized,
    #[serde(rename = "TechThm")]
    Riesz,
    #[serde(rename = "control")]
    Control,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnchorWindow {
    /// n₀ ∈ [N/2, N]
    Upper,
    /// n₀ ∈ [N/2, 2N/3]
    Middle,
    /// n₀ ∈ [−N/3, N/3]
    Centered,
}

impl AnchorWindow {
    pub fn range(&self, n: u64) -> (i64, i64) {
        let n = n as i64;
        match self {
            AnchorWindow::Upper => ((n + 1) / 2, n),
            AnchorWindow::Middle => ((n + 1) / 2, 2 * n / 3),
            AnchorWindow::Centered => (-(n / 3), n / 3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Accuracy {
    /// Panel length for t-integrals.
    #[serde(default = "default_panel")]
    pub panel: f64,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    /// Gauss–Legendre points per anchor interval.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Bumps are cut off below this fraction of their peak.
    #[serde(default = "default_tail")]
    pub tail: f64,
}

fn default_panel() -> f64 {
    0.25
}
fn default_nodes() -> usize {
    12
}
fn default_samples() -> usize {
    4
}
fn default_tail() -> f64 {
    1e-14
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy {
            panel: default_panel(),
            nodes: default_nodes(),
            samples: default_samples(),
            tail: default_tail(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assertions {
    #[serde(default)]
    pub increasing: bool,
    pub min_slope: Option<f64>,
    pub max_residual: Option<f64>,
    /// Bound on max R / min R.
    pub max_spread: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub tag: Tag,
    pub n: usize,
    #[serde(default = "one")]
    pub d: usize,
    /// Rational entries as strings ("1/3"); α defaults to lcm(q)/q_j for integer q.
    #[serde(default)]
    pub q: Vec<String>,
    #[serde(default)]
    pub alpha: Vec<String>,
    #[serde(default)]
    pub beta: Vec<String>,
    pub n_schedule: Vec<u64>,
    pub a: u64,
    pub p: Vec<f64>,
    #[serde(default = "default_window")]
    pub anchor_window: AnchorWindow,
    /// Length of each anchor interval; defaults to c_α/A, or 1 for chirps.
    pub anchor_width: Option<f64>,
    /// Half-width of the bump's spectral support.
    pub bump_h: Option<f64>,
    #[serde(default)]
    pub accuracy: Accuracy,
    pub output: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub assertions: Assertions,
}

fn one() -> usize {
    1
}
fn default_window() -> AnchorWindow {
    AnchorWindow::Upper
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n_schedule.is_empty() {
            return bad("n_schedule is empty".into());
        }
        if self.n_schedule.windows(2).any(|w| w[1] <= w[0]) {
            return bad("n_schedule must be strictly increasing".into());
        }
        if self.n_schedule[0] == 0 {
            return bad("train lengths must be positive".into());
        }
        if self.p.len() != self.n {
            return bad(format!("expected {} exponents, got {}", self.n, self.p.len()));
        }
        if self.p.iter().any(|&p| !(p >= 1.0)) {
            return bad("exponents must lie in [1, ∞]".into());
        }
        if self.target_exponent() < 1.0 {
            return bad("Σ 1/p_j must be at most 1".into());
        }
        if self.a == 0 {
            return bad("A must be positive".into());
        }
        if self.accuracy.samples == 0 || self.accuracy.nodes == 0 || !(self.accuracy.panel > 0.0) {
            return bad("accuracy settings must be positive".into());
        }
        match self.tag {
            Tag::Modulated | Tag::Control => {
                if self.n < 2 {
                    return bad("need at least two functions".into());
                }
                self.alpha_values()?;
                self.beta_values()?;
            }
            Tag::Chirp => {
                if self.n != 3 {
                    return bad("chirp experiments are trilinear".into());
                }
                if !self.a.is_power_of_two() {
                    return Err(Error::NotPowerOfTwo(self.a));
                }
            }
            Tag::Localized | Tag::Riesz => {
                return bad("this experiment family is not available in the harness".into());
            }
        }
        Ok(())
    }

    /// p with 1/p = Σ 1/p_j.
    pub fn target_exponent(&self) -> f64 {
        1.0 / self.p.iter().map(|p| 1.0 / p).sum::<f64>()
    }

    pub fn alpha_rational(&self) -> Result<Vec<num_rational::BigRational>> {
        if !self.alpha.is_empty() {
            if self.alpha.len() != self.n {
                return Err(Error::Config(format!("alpha needs {} entries", self.n)));
            }
            return self.alpha.iter().map(|s| parse_rational(s)).collect();
        }
        if self.q.len() != self.n {
            return Err(Error::Config("give either alpha or q with n entries".into()));
        }
        let q: Vec<num_rational::BigRational> = self.q.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
        if q.iter().any(|x| !x.is_integer() || num_traits::Zero::is_zero(x)) {
            return Err(Error::Config("α can only be derived from nonzero integer q".into()));
        }
        let lcm = q.iter().fold(num_bigint::BigInt::from(1), |acc, x| {
            num_integer::Integer::lcm(&acc, &x.to_integer())
        });
        Ok(q.iter()
            .map(|x| num_rational::BigRational::from_integer(lcm.clone()) / x)
            .collect())
    }

    pub fn alpha_values(&self) -> Result<Vec<f64>> {
        Ok(self.alpha_rational()?.iter().map(rational_to_f64).collect())
    }

    pub fn beta_values(&self) -> Result<Vec<f64>> {
        if self.beta.is_empty() {
            return Ok(vec![0.0; self.n]);
        }
        if self.beta.len() != self.n {
            return Err(Error::Config(format!("beta needs {} entries", self.n)));
        }
        self.beta.iter().map(|s| parse_rational(s).map(|r| rational_to_f64(&r))).collect()
    }

    /// 1/(10·(max|α_j| + max|β_j|)).
    pub fn anchor_constant(&self) -> Result<f64> {
        let m = |v: Vec<f64>| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        Ok(1.0 / (10.0 * (m(self.alpha_values()?) + m(self.beta_values()?))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: u64,
    pub ratio: f64,
    /// ‖T(f⃗)‖ restricted to the anchor set.
    pub restricted_norm: f64,
    pub input_norms: Vec<f64>,
    pub norm_product: f64,
    /// (number of bumps)^{Σ1/p_j} ∏‖φ‖_{p_j}.
    pub norm_reference: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    /// max_i |R_i − fit_i| / |R_i|
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssertionOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub os: String,
    pub arch: String,
    pub extra: BTreeMap<String, String>,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            extra: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub config: ExperimentConfig,
    pub rows: Vec<RatioRow>,
    pub fit: Option<LogFit>,
    pub assertions: Vec<AssertionOutcome>,
    pub environment: Environment,
    pub pass: bool,
}

impl ExperimentRecord {
    pub fn ratios(&self) -> Vec<(u64, f64)> {
        self.rows.iter().map(|r| (r.n, r.ratio)).collect()
    }

    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .rows
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r.ratio), hi.max(r.ratio)));
        hi / lo
    }

    pub fn strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].ratio > w[0].ratio)
    }
}

/// Least squares of R against ln N.
pub fn fit_log_growth(points: &[(u64, f64)]) -> Result<LogFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(points).map(|(x, p)| (x - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Config("all train lengths coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(points)
        .map(|(x, p)| ((p.1 - (slope * x + intercept)) / p.1).abs())
        .fold(0.0, f64::max);
    Ok(LogFit {
        slope,
        intercept,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub max_rel_error: f64,
    pub engine: Vec<num_complex::Complex64>,
    pub oracle: Vec<num_complex::Complex64>,
}

/// Engine against adaptive dense tensor quadrature with four times the leaf nodes.
/// Errors are relative to the largest oracle value on the grid.
pub fn oracle_cross_check(m: &Symbol, trains: &[BumpTrain], xs: &[f64]) -> Result<OracleReport> {
    let engine = apply_multiplier(m, trains, xs, QuadOptions::default())?;
    let depth = if trains.len() <= 2 { 11 } else { 6 };
    let oracle = apply_multiplier_dense(m, trains, xs, depth, 24)?;
    let scale = oracle.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let max_rel_error = engine
        .iter()
        .zip(&oracle)
        .map(|(a, b)| (a - b).norm() / scale)
        .fold(0.0, f64::max);
    Ok(OracleReport {
        max_rel_error,
        engine,
        oracle,
    })
}
