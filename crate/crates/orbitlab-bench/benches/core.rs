use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbitlab_core::complex_roots::Weight;
use orbitlab_core::context::analyze;
use orbitlab_core::exact::rat;
use orbitlab_core::orbit::verify_dichotomy;
use orbitlab_core::realforms::{build_real_form, restricted_root_system, RealFormSpec};

fn bench_construction(c: &mut Criterion) {
    let sp4 = RealFormSpec::parse("sp", &[2]).unwrap();
    c.bench_function("build_real_form sp(4,R)", |b| {
        b.iter(|| build_real_form(&sp4).unwrap())
    });

    let form = build_real_form(&sp4).unwrap();
    c.bench_function("restricted_root_system sp(4,R)", |b| {
        b.iter(|| restricted_root_system(&form).unwrap())
    });

    let su22 = RealFormSpec::parse("su", &[2, 2]).unwrap();
    c.bench_function("analyze su(2,2) full chain", |b| {
        b.iter(|| analyze(&su22).unwrap())
    });
}

fn bench_orbit(c: &mut Criterion) {
    let ctx = analyze(&RealFormSpec::parse("sp", &[2]).unwrap()).unwrap();
    let engine = ctx.engine().unwrap();
    let dim = engine.frame.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut random_lambda = move || -> Vec<orbitlab_core::exact::Rational> {
        (0..dim)
            .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=3)))
            .collect()
    };

    c.bench_function("kks_matrix rank sp(4,R)", |b| {
        b.iter_batched(
            &mut random_lambda,
            |lam| engine.frame.is_open_orbit_point(&lam).unwrap(),
            BatchSize::SmallInput,
        )
    });

    let mut rng2 = ChaCha8Rng::seed_from_u64(8);
    let mut random_lambda2 = move || -> Vec<orbitlab_core::exact::Rational> {
        (0..dim)
            .map(|_| rat(rng2.gen_range(-9..=9), rng2.gen_range(1..=3)))
            .collect()
    };
    c.bench_function("cascade_signature sp(4,R)", |b| {
        b.iter_batched(
            &mut random_lambda2,
            |lam| engine.cascade_signature(&lam).unwrap(),
            BatchSize::SmallInput,
        )
    });

    let f = Weight(vec![rat(2, 1), rat(1, 1)]);
    c.bench_function("verify_dichotomy sp(4,R) 8 samples", |b| {
        b.iter(|| verify_dichotomy(&engine, &f, 8, 20260818).unwrap())
    });
}

criterion_group!(benches, bench_construction, bench_orbit);
criterion_main!(benches);
