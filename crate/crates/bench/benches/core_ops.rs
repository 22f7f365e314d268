use criterion::{criterion_group, criterion_main, Criterion};
use qloop_core::exact::{expand, LaurentPoly, Mono, RatFunc, SeriesDir, Var};
use qloop_core::grass::euler_vs_kr;
use qloop_core::lattice::{commutator_check_grid, quot_poincare, Lambda};
use qloop_core::qchar::fm_qcharacter;
use qloop_core::quiver::QuiverData;
use std::hint::black_box;

fn dense_poly(seed: i64) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for a in -2..=2i64 {
        for b in -2..=2i64 {
            p = &p
                + &LaurentPoly::term(
                    Mono::from_pairs([(Var::Q, a), (Var::Chi(1), b)]),
                    (seed + a * 5 + b).into(),
                );
        }
    }
    p
}

fn bench_poly_mul(c: &mut Criterion) {
    let a = dense_poly(3);
    let b = dense_poly(-7);
    c.bench_function("laurent_mul_25x25", |bench| {
        bench.iter(|| black_box(&a) * black_box(&b))
    });
}

fn bench_expand(c: &mut Criterion) {
    let u = RatFunc::var(Var::U);
    let mut den = RatFunc::one();
    for k in 0..4i64 {
        den = &den * &(&u - &(&RatFunc::q_pow(k) * &RatFunc::var(Var::Chi(1))));
    }
    let f = (&RatFunc::one() / &den).unwrap();
    c.bench_function("expand_four_poles_depth8", |bench| {
        bench.iter(|| expand(black_box(&f), SeriesDir::Uinv, -8, 0).unwrap())
    });
}

fn bench_commutator(c: &mut Criterion) {
    let lam = Lambda(vec![1, 1]);
    c.bench_function("commutator_grid_w2", |bench| {
        bench.iter(|| commutator_check_grid(black_box(&lam), 1).unwrap())
    });
}

fn bench_fm(c: &mut Criterion) {
    let q = QuiverData::type_a(2);
    c.bench_function("fm_qchar_a2_l2", |bench| {
        bench.iter(|| fm_qcharacter(black_box(&q), 1, 0, 2, 100_000).unwrap())
    });
}

fn bench_quot(c: &mut Criterion) {
    c.bench_function("quot_poincare_w4_v6", |bench| {
        bench.iter(|| quot_poincare(4, 6, true))
    });
}

fn bench_grass(c: &mut Criterion) {
    let q = QuiverData::type_a(3);
    c.bench_function("euler_vs_kr_a3_middle", |bench| {
        bench.iter(|| euler_vs_kr(black_box(&q), 2, 0, 1, 100_000).unwrap())
    });
}

criterion_group!(
    benches,
    bench_poly_mul,
    bench_expand,
    bench_commutator,
    bench_fm,
    bench_quot,
    bench_grass
);
criterion_main!(benches);
