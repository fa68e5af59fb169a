//! Subspaces cut out by normal vectors, the Γ(α, q) family, and the chain test for
//! non-degeneracy.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational_core::{determinant, rank, rational_to_f64, RationalVector};

/// Minors whose magnitude relative to the product of row norms is below this are
/// treated as singular on the floating-point path.
pub const MINOR_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    pub alpha: f64,
    pub q: RationalVector,
    pub d: usize,
}

/// Γ = ∩_m {ξ · normal_m = 0} in ℝⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subspace {
    pub ambient: usize,
    pub normals: Vec<Vec<f64>>,
    /// Present when every normal is rational; enables exact minors.
    pub exact: Option<Vec<RationalVector>>,
    pub generator: Option<GammaParams>,
}

impl Subspace {
    pub fn from_normals(normals: Vec<Vec<f64>>) -> Result<Self> {
        let ambient = check_shape(normals.iter().map(Vec::len))?;
        if float_rank(&normals) < normals.len() {
            return Err(Error::Dimension("normals are linearly dependent".into()));
        }
        Ok(Subspace {
            ambient,
            normals,
            exact: None,
            generator: None,
        })
    }

    pub fn from_rational_normals(normals: Vec<RationalVector>) -> Result<Self> {
        let ambient = check_shape(normals.iter().map(RationalVector::len))?;
        let rows: Vec<Vec<BigRational>> = normals.iter().map(|v| v.0.clone()).collect();
        if rank(&rows, ambient) < normals.len() {
            return Err(Error::Dimension("normals are linearly dependent".into()));
        }
        Ok(Subspace {
            ambient,
            normals: normals.iter().map(RationalVector::to_f64).collect(),
            exact: Some(normals),
            generator: None,
        })
    }

    /// The zero subspace {0} ⊂ ℝⁿ.
    pub fn origin(n: usize) -> Self {
        let normals = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Subspace {
            ambient: n,
            normals,
            exact: None,
            generator: None,
        }
    }

    pub fn codim(&self) -> usize {
        self.normals.len()
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.codim()
    }

    /// Euclidean distance from ξ to Γ, i.e. the norm of the component of ξ in Γ_⊥.
    pub fn distance(&self, xi: &[f64]) -> f64 {
        let basis = orthonormal(&self.normals);
        basis
            .iter()
            .map(|e| dot(e, xi).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

fn check_shape(mut lens: impl Iterator<Item = usize>) -> Result<usize> {
    let first = lens
        .next()
        .ok_or_else(|| Error::Dimension("at least one normal is required".into()))?;
    if first == 0 || lens.any(|l| l != first) {
        return Err(Error::Dimension("normals must share a positive length".into()));
    }
    Ok(first)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Modified Gram–Schmidt with one reorthogonalization pass; drops numerically
/// dependent vectors.
pub fn orthonormal(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for e in &out {
                let c = dot(e, &w);
                for (wi, ei) in w.iter_mut().zip(e) {
                    *wi -= c * ei;
                }
            }
        }
        let norm = dot(&w, &w).sqrt();
        let scale = dot(v, v).sqrt();
        if norm > 1e-12 * scale.max(1e-300) {
            out.push(w.iter().map(|x| x / norm).collect());
        }
    }
    out
}

fn float_rank(vs: &[Vec<f64>]) -> usize {
    orthonormal(vs).len()
}

fn pole_free(q: &RationalVector, alpha: f64) -> Result<Vec<f64>> {
    q.to_f64()
        .iter()
        .enumerate()
        .map(|(j, &qj)| {
            let den = qj + alpha * qj * qj;
            if den == 0.0 || (qj * alpha + 1.0).abs() < 1e-15 {
                Err(Error::Pole(j))
            } else {
                Ok(1.0 / den)
            }
        })
        .collect()
}

fn check_family_inputs(q: &RationalVector, d: usize, n: usize) -> Result<()> {
    if q.len() != n {
        return Err(Error::Dimension(format!("q has {} entries, n = {n}", q.len())));
    }
    if d == 0 || d >= n {
        return Err(Error::Dimension(format!("need 1 ≤ d < n, got d = {d}, n = {n}")));
    }
    for (i, x) in q.0.iter().enumerate() {
        if x.is_zero() || q.0[..i].contains(x) {
            return Err(Error::BadNodes(i));
        }
    }
    Ok(())
}

/// Normals a, a·q², …, a·q^d with a_j = 1/(q_j + αq_j²), floating point.
pub fn build_gamma_family(q: &RationalVector, alpha: f64, d: usize, n: usize) -> Result<Subspace> {
    check_family_inputs(q, d, n)?;
    let a = pole_free(q, alpha)?;
    let qf = q.to_f64();
    let mut normals = vec![a.clone()];
    for m in 2..=d as i32 {
        normals.push(a.iter().zip(&qf).map(|(aj, qj)| aj * qj.powi(m)).collect());
    }
    let mut s = Subspace::from_normals(normals)?;
    s.generator = Some(GammaParams {
        alpha,
        q: q.clone(),
        d,
    });
    Ok(s)
}

/// Same family with a rational parameter; normals and minors stay exact.
pub fn build_gamma_family_exact(
    q: &RationalVector,
    alpha: &BigRational,
    d: usize,
    n: usize,
) -> Result<Subspace> {
    check_family_inputs(q, d, n)?;
    let mut a = Vec::with_capacity(n);
    for (j, qj) in q.0.iter().enumerate() {
        let den = qj + alpha * qj * qj;
        if den.is_zero() {
            return Err(Error::Pole(j));
        }
        a.push(den.recip());
    }
    let a = RationalVector(a);
    let mut normals = vec![a.clone()];
    for m in 2..=d as i64 {
        normals.push(a.wedge(&q.powi(m)));
    }
    let mut s = Subspace::from_rational_normals(normals)?;
    s.generator = Some(GammaParams {
        alpha: rational_to_f64(alpha),
        q: q.clone(),
        d,
    });
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyCertificate {
    pub pass: bool,
    /// 1-based chain (i₁ < … < i_𝔡 ≤ n+1) whose complementary minor vanishes.
    pub failing_chain: Option<Vec<usize>>,
    pub chains_checked: usize,
    pub exact: bool,
}

/// Lexicographic k-subsets of 0..n.
pub fn chains(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            break;
        };
        cur[i] += 1;
        for j in (i + 1)..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// Rows of the augmented (d+1) × (n+1) matrix: ones, then each normal padded with 0.
pub fn augmented_rows_exact(normals: &[RationalVector]) -> Vec<Vec<BigRational>> {
    let n = normals[0].len();
    let mut rows = vec![vec![BigRational::one(); n + 1]];
    for v in normals {
        let mut r = v.0.clone();
        r.push(BigRational::zero());
        rows.push(r);
    }
    rows
}

pub fn augmented_rows(normals: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = normals[0].len();
    let mut rows = vec![vec![1.0; n + 1]];
    for v in normals {
        let mut r = v.clone();
        r.push(0.0);
        rows.push(r);
    }
    rows
}

/// |det| divided by the product of row norms, by partially pivoted elimination.
fn relative_minor(rows: &[Vec<f64>]) -> f64 {
    let norms: f64 = rows.iter().map(|r| dot(r, r).sqrt()).product();
    if norms == 0.0 {
        return 0.0;
    }
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        a.swap(p, c);
        det *= a[c][c];
        for i in (c + 1)..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
        }
    }
    det.abs() / norms
}

fn complement(chain: &[usize], total: usize) -> Vec<usize> {
    (0..total).filter(|c| !chain.contains(c)).collect()
}

/// Γ̃ is a graph over a chain exactly when the square submatrix on the complementary
/// columns of the augmented matrix is invertible.
pub fn check_nondegenerate(gamma: &Subspace) -> NondegeneracyCertificate {
    let n = gamma.ambient;
    let all = chains(n + 1, gamma.dim());
    let mut checked = 0;
    let mut failing = None;
    match &gamma.exact {
        Some(exact) => {
            let rows = augmented_rows_exact(exact);
            for chain in &all {
                checked += 1;
                let cols = complement(chain, n + 1);
                let sub: Vec<Vec<BigRational>> = rows
                    .iter()
                    .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                    .collect();
                if determinant(&sub).is_zero() {
                    failing = Some(chain.clone());
                    break;
                }
            }
        }
        None => {
            let rows = augmented_rows(&gamma.normals);
            for chain in &all {
                checked += 1;
                let cols = complement(chain, n + 1);
                let sub: Vec<Vec<f64>> = rows
                    .iter()
                    .map(|r| cols.iter().map(|&c| r[c]).collect())
                    .collect();
                if relative_minor(&sub) <= MINOR_THRESHOLD {
                    failing = Some(chain.clone());
                    break;
                }
            }
        }
    }
    NondegeneracyCertificate {
        pass: failing.is_none(),
        failing_chain: failing.map(|c| c.iter().map(|i| i + 1).collect()),
        chains_checked: checked,
        exact: gamma.exact.is_some(),
    }
}

/// Distance from `probe` to Γ_⊥ = span of the normals.
pub fn perp_distance(gamma: &Subspace, probe: &[f64]) -> Result<f64> {
    if probe.len() != gamma.ambient {
        return Err(Error::Dimension(format!(
            "probe has {} entries, ambient dimension is {}",
            probe.len(),
            gamma.ambient
        )));
    }
    let basis = orthonormal(&gamma.normals);
    let mut r = probe.to_vec();
    for _ in 0..2 {
        for e in &basis {
            let c = dot(e, &r);
            for (ri, ei) in r.iter_mut().zip(e) {
                *ri -= c * ei;
            }
        }
    }
    Ok(dot(&r, &r).sqrt())
}

/// The first normal of Γ(ε, q), used as the probe when sampling distinct members.
pub fn scale_probe(q: &RationalVector, eps: f64) -> Result<Vec<f64>> {
    pole_free(q, eps)
}

/// Halve ε from 1 until every sampled parameter in [0, ε] avoids the poles and yields
/// a non-degenerate member of the family.
pub fn select_epsilon(q: &RationalVector, d: usize, samples: usize) -> Result<f64> {
    let n = q.len();
    let mut eps = 1.0;
    for _ in 0..60 {
        let ok = (0..samples.max(2)).all(|i| {
            let alpha = eps * i as f64 / (samples.max(2) - 1) as f64;
            build_gamma_family(q, alpha, d, n)
                .map(|g| check_nondegenerate(&g).pass)
                .unwrap_or(false)
        });
        if ok {
            return Ok(eps);
        }
        eps /= 2.0;
    }
    Err(Error::Config("no admissible epsilon above 2^-60".into()))
}

/// perp_distance(Γ(α_i, q), a(ε)) for α_i evenly spaced in [0, ε].
pub fn distinctness_sample(q: &RationalVector, d: usize, eps: f64, k: usize) -> Result<Vec<f64>> {
    let probe = scale_probe(q, eps)?;
    (0..k)
        .map(|i| {
            let alpha = if k == 1 {
                0.0
            } else {
                eps * i as f64 / (k - 1) as f64
            };
            let g = build_gamma_family(q, alpha, d, q.len())?;
            perp_distance(&g, &probe)
        })
        .collect()
}
