use std::hint::black_box;

use blowup_bench::{modulated_trains, sample_points};
use blowup_core::bohr::enumerate_bohr;
use blowup_core::operator_engine::carleson::{carleson_kernel_profile, gap_cuts, KernelPathOptions};
use blowup_core::operator_engine::{apply_multiplier, apply_sgn_paraproduct, KernelSpec, LemmaSetup, QuadOptions};
use blowup_core::rational_core::{solve_moment_orthogonal, RationalVector};
use blowup_core::symbol_forge::Symbol;
use blowup_core::witness_functions::{dyadic_chirps_with_spacing, Bump};
use criterion::{criterion_group, criterion_main, Criterion};

fn exact(c: &mut Criterion) {
    let q = RationalVector::from_ints(&[1, 2, 3, 4, 5, 6, 7, 8]);
    c.bench_function("solve_moment_orthogonal n=8", |b| {
        b.iter(|| solve_moment_orthogonal(black_box(&q), &[0, 1, 2, 3, 4, 5], Some(6)).unwrap())
    });
    c.bench_function("enumerate_bohr N=1e5", |b| {
        b.iter(|| enumerate_bohr(black_box(&[0.5, 1.0 / 3.0, 0.2]), 0.3, 100_000).unwrap())
    });
}

fn operators(c: &mut Criterion) {
    let trains = modulated_trains(4, 32);
    let alpha = [1.0, 0.5, 1.0 / 3.0];
    let cuts = gap_cuts(&trains[2]);
    let opts = KernelPathOptions::default();
    c.bench_function("carleson_kernel_profile N=4", |b| {
        b.iter(|| carleson_kernel_profile(&alpha, &trains, black_box(96.0), &cuts, &opts).unwrap())
    });

    let chirps = dyadic_chirps_with_spacing(2, 16).unwrap();
    let xs = sample_points(16.0, 32.0, 4);
    let sign = Symbol::Sign { normal: vec![1.0, 1.0, 0.0] };
    let mut g = c.benchmark_group("multiplier");
    g.sample_size(10);
    // the frequency-side path is slow; one short train and one point keep it measurable
    let short = dyadic_chirps_with_spacing(1, 16).unwrap();
    g.bench_function("apply_multiplier sign N=1", |b| {
        b.iter(|| apply_multiplier(&sign, &short, black_box(&xs[..1]), QuadOptions::default()).unwrap())
    });
    g.bench_function("apply_sgn_paraproduct k=3", |b| {
        b.iter(|| apply_sgn_paraproduct(&chirps, 3, black_box(&xs)).unwrap())
    });
    g.finish();
}

fn lemma(c: &mut Criterion) {
    let bump = Bump::new(0.5).unwrap();
    let h = KernelSpec::hilbert();
    let qs = [1.0f64, 2.0, 3.0, 4.0, 5.0];
    let alpha: Vec<f64> = qs.iter().map(|q| 1.0 / (q * q)).collect();
    let beta: Vec<f64> = qs.iter().map(|q| 1.0 / (q * q * q)).collect();
    let setup = LemmaSetup {
        bump: &bump,
        alpha: &alpha,
        beta: &beta,
        a: 8,
        k1: &h,
        k2: &h,
    };
    c.bench_function("kernel lemma im_value k=64", |b| b.iter(|| setup.im_value(black_box(64))));
}

criterion_group!(benches, exact, operators, lemma);
criterion_main!(benches);
