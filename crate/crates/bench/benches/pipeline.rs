use std::hint::black_box;

use catamp::circuits::{amplify, generate_pssv, heralded_fidelity, heralded_success, optimize_target_size};
use catamp::iterate::{stages, success_scaling, HeraldMode};
use catamp::numerics::erf_complex;
use catamp::states::{self, wf_cat, wf_squeezed_fock1};
use catamp::{CatSpec, Parity, Projection, SqueezingSpec};
use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

fn numerics(c: &mut Criterion) {
    let zs: Vec<Complex64> = (0..64).map(|i| Complex64::from_polar(0.15 * i as f64, 0.37 * i as f64)).collect();
    c.bench_function("erf_complex/64 points", |b| {
        b.iter(|| zs.iter().map(|&z| erf_complex(black_box(z))).sum::<Complex64>())
    });
}

fn wigner(c: &mut Criterion) {
    let a = states::cat(&CatSpec::odd(1.3).unwrap());
    let b = states::cat(&CatSpec::even(1.1).unwrap());
    c.bench_function("overlap/cat x cat", |bch| bch.iter(|| black_box(&a).overlap(black_box(&b)).unwrap()));

    let window = Projection::window(1.0).unwrap();
    c.bench_function("amplify/odd cats, fidelity + success", |bch| {
        bch.iter(|| {
            let h = amplify(&a, &a, window).unwrap();
            let f = heralded_fidelity(&h, &CatSpec::even(black_box(1.84)).unwrap()).unwrap();
            f + heralded_success(&h).unwrap().value()
        })
    });

    let pssv = generate_pssv(&SqueezingSpec::pure(2.9).unwrap(), 0.95).unwrap();
    let h = amplify(&pssv.state, &pssv.state, window).unwrap();
    c.bench_function("optimize_target_size/amplified PSSV", |bch| {
        bch.iter(|| optimize_target_size(black_box(&h), Parity::Even).unwrap())
    });
    c.bench_function("generate_pssv + optimize", |bch| {
        bch.iter(|| {
            let out = generate_pssv(&SqueezingSpec::pure(black_box(3.0)).unwrap(), 0.99).unwrap();
            optimize_target_size(&out, Parity::Odd).unwrap()
        })
    });
}

fn iteration(c: &mut Criterion) {
    let photon = wf_squeezed_fock1(SqueezingSpec::pure(3.0).unwrap().scale_x()).unwrap();
    let cat = wf_cat(&CatSpec::odd(1.0).unwrap());
    let mut group = c.benchmark_group("iteration");
    group.sample_size(10);
    group.bench_function("photon seed, 6 stages + sizes", |b| {
        b.iter(|| {
            stages(black_box(&photon), 6)
                .unwrap()
                .iter()
                .map(|s| s.effective_size().unwrap().fidelity)
                .sum::<f64>()
        })
    });
    group.bench_function("cat seed, 9 stages (seed power)", |b| {
        b.iter(|| stages(black_box(&cat), 9).unwrap().last().unwrap().effective_size().unwrap())
    });
    group.bench_function("success scaling, density, k = 12", |b| {
        b.iter(|| success_scaling(black_box(&photon), 12, HeraldMode::Density).unwrap())
    });
    group.finish();
}

criterion_group!(benches, numerics, wigner, iteration);
criterion_main!(benches);
