use num_complex::Complex64;
use rayon::prelude::*;

use super::{fit_log_growth, AssertionOutcome, Environment, ExperimentConfig, ExperimentRecord, RatioRow, Tag};
use crate::error::{Error, Result};
use crate::operator_engine::carleson::{carleson_kernel_profile, gap_cuts, KernelPathOptions};
use crate::operator_engine::kernel::{apply_kernel_form, EvenKernelTable};
use crate::operator_engine::maximal::sgn_paraproduct_terms;
use crate::quadrature::composite_nodes;
use crate::rational_core::{lift_hash_exact, solve_moment_orthogonal, RationalVector};
use crate::symbol_forge::envelopes::EnvelopePair;
use crate::witness_functions::{dyadic_chirps_with_spacing, make_bump_train, Bump, BumpTrain};

/// Witness trains for one train length, with the dilations they are tested against.
#[derive(Debug, Clone)]
pub struct Witnesses {
    pub trains: Vec<BumpTrain>,
    pub alpha: Vec<f64>,
}

/// Integer frequency weights w with Σ w_j α_j = Σ w_j α_j² = … = 0 (n − 1 conditions).
fn modulation_weights(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    let alpha = RationalVector::new(cfg.alpha_rational()?);
    // w_j α_j^k = tilde_j α_j^{k−2}, so the conditions on tilde use exponents −1 ..= n − 3
    let exps: Vec<i64> = (-1..=(cfg.n as i64 - 3)).collect();
    let h = solve_moment_orthogonal(&alpha, &exps, None)?;
    let lifted = lift_hash_exact(&h, &alpha)?;
    Ok(lifted
        .integerize()
        .iter()
        .map(|v| v.to_string().parse::<f64>().expect("integer"))
        .collect())
}

pub fn build_witnesses(cfg: &ExperimentConfig, n: u64) -> Result<Witnesses> {
    match cfg.tag {
        Tag::Modulated | Tag::Control => {
            let alpha = cfg.alpha_values()?;
            let weights = modulation_weights(cfg)?;
            let base = Bump::new(cfg.bump_h.unwrap_or(0.5))?;
            let af = cfg.a as f64;
            let trains = weights
                .iter()
                .map(|w| make_bump_train(base, n, cfg.a, af * w, 1.0))
                .collect::<Result<Vec<_>>>()?;
            Ok(Witnesses { trains, alpha })
        }
        Tag::Chirp => Ok(Witnesses {
            trains: dyadic_chirps_with_spacing(n, cfg.a)?.to_vec(),
            alpha: vec![1.0; 3],
        }),
        Tag::Localized | Tag::Riesz => Err(Error::Config("experiment family not available".into())),
    }
}

/// Sample points and weights over the anchor set.
fn anchor_samples(cfg: &ExperimentConfig, n: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (lo, hi) = cfg.anchor_window.range(n);
    if hi < lo {
        return Err(Error::EmptyAnchors);
    }
    let af = cfg.a as f64;
    let width = match cfg.anchor_width {
        Some(w) => w,
        None if cfg.tag == Tag::Chirp => 1.0,
        None => cfg.anchor_constant()? / af,
    };
    if !(width > 0.0) {
        return Err(Error::Config("anchor width must be positive".into()));
    }
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for n0 in lo..=hi {
        let start = af * n0 as f64;
        let (x, w) = composite_nodes(start, start + width, 1, cfg.accuracy.samples);
        xs.extend(x);
        ws.extend(w);
    }
    Ok((xs, ws))
}

/// |T(f⃗)(x)| at every sample for the configured operator.
fn observe(cfg: &ExperimentConfig, w: &Witnesses, xs: &[f64], control: Option<&EvenKernelTable>) -> Result<Vec<f64>> {
    let acc = &cfg.accuracy;
    match cfg.tag {
        Tag::Modulated => {
            let opts = KernelPathOptions {
                panel: acc.panel,
                nodes: acc.nodes,
                tail: acc.tail,
            };
            let cuts = gap_cuts(w.trains.last().expect("trains"));
            xs.par_iter()
                .map(|&x| Ok(carleson_kernel_profile(&w.alpha, &w.trains, x, &cuts, &opts)?.sup_signed()))
                .collect()
        }
        Tag::Control => {
            let table = control.expect("control kernel");
            let t = table.t_max();
            Ok(xs
                .par_iter()
                .map(|&x| {
                    apply_kernel_form(&w.trains, &w.alpha, &|s| table.eval(s), x, (-t, t), acc.panel, acc.nodes).norm()
                })
                .collect())
        }
        Tag::Chirp => {
            let n = w.trains[0].hi as u32;
            let terms = sgn_paraproduct_terms(&w.trains, n + 1, xs)?;
            Ok(terms.into_iter().map(|row| row.into_iter().sum::<Complex64>().norm()).collect())
        }
        Tag::Localized | Tag::Riesz => Err(Error::Config("experiment family not available".into())),
    }
}

fn control_kernel() -> EvenKernelTable {
    let env = EnvelopePair;
    EvenKernelTable::inverse_transform_of_profile(|u| env.phi(u), 1.0, &[0.5], 64.0, 1.0 / 64.0)
}

fn ratio_row(cfg: &ExperimentConfig, n: u64, control: Option<&EvenKernelTable>) -> Result<RatioRow> {
    let w = build_witnesses(cfg, n)?;
    let (xs, ws) = anchor_samples(cfg, n)?;
    let vals = observe(cfg, &w, &xs, control)?;
    if let Some(v) = vals.iter().find(|v| !v.is_finite()) {
        return Err(Error::Quadrature(format!("operator value {v} at N = {n}")));
    }
    let p = cfg.target_exponent();
    let restricted_norm = vals.iter().zip(&ws).map(|(v, w)| w * v.powf(p)).sum::<f64>().powf(1.0 / p);
    let input_norms: Vec<f64> = w.trains.iter().zip(&cfg.p).map(|(f, &pj)| f.lp_norm(pj)).collect();
    let norm_product: f64 = input_norms.iter().product();
    let norm_reference = w
        .trains
        .iter()
        .zip(&cfg.p)
        .map(|(f, &pj)| (f.len() as f64 * f.base.lp_norm_pow(pj)).powf(1.0 / pj))
        .product();
    Ok(RatioRow {
        n,
        ratio: restricted_norm / norm_product,
        restricted_norm,
        input_norms,
        norm_product,
        norm_reference,
        samples: xs.len(),
    })
}

pub fn run_blowup(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let control = (cfg.tag == Tag::Control).then(control_kernel);
    let rows = cfg
        .n_schedule
        .iter()
        .map(|&n| ratio_row(cfg, n, control.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(u64, f64)> = rows.iter().map(|r| (r.n, r.ratio)).collect();
    let fit = fit_log_growth(&points).ok();
    let mut record = ExperimentRecord {
        config: cfg.clone(),
        rows,
        fit,
        assertions: Vec::new(),
        environment: Environment::current(),
        pass: true,
    };
    let a = &cfg.assertions;
    let mut out = Vec::new();
    if a.increasing {
        out.push(AssertionOutcome {
            name: "strictly_increasing".into(),
            pass: record.strictly_increasing(),
            detail: format!("{:?}", record.ratios()),
        });
    }
    let need_fit = |name: &str, f: &dyn Fn(&super::LogFit) -> (bool, String)| match &record.fit {
        Some(fit) => {
            let (pass, detail) = f(fit);
            AssertionOutcome { name: name.into(), pass, detail }
        }
        None => AssertionOutcome {
            name: name.into(),
            pass: false,
            detail: "fewer than three points".into(),
        },
    };
    if let Some(s) = a.min_slope {
        out.push(need_fit("min_slope", &|f| (f.slope > s, format!("slope {} vs {s}", f.slope))));
    }
    if let Some(r) = a.max_residual {
        out.push(need_fit("max_residual", &|f| (f.residual < r, format!("residual {} vs {r}", f.residual))));
    }
    if let Some(m) = a.max_spread {
        let s = record.spread();
        out.push(AssertionOutcome {
            name: "max_spread".into(),
            pass: s <= m,
            detail: format!("max/min {s} vs {m}"),
        });
    }
    record.pass = out.iter().all(|o| o.pass);
    record.assertions = out;
    Ok(record)
}
