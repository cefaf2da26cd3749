use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use kahler_core::exactla::int_rank;
use kahler_core::formulas::{conic_hf, ConicSchemeSpec, DeltaSource};
use kahler_core::{FatPointScheme, HomogPoly, KaehlerEngine};
use num_bigint::BigInt;

const CONIC: &str = "3*X0^2 - 4*X0*X1 + X1^2 - 4*X0*X2 + X2^2";
const CONIC_POINTS: [[i64; 3]; 8] = [[1, 1, 0], [1, 3, 0], [1, 0, 1], [1, 4, 1], [1, 0, 3], [1, 1, 4], [1, 4, 3], [1, 3, 4]];

fn conic_scheme(mult: u32) -> FatPointScheme {
    let pts: Vec<(&[i64], u32)> = CONIC_POINTS.iter().map(|p| (&p[..], mult)).collect();
    FatPointScheme::from_i64(2, &pts).unwrap()
}

fn fat_points_p3() -> FatPointScheme {
    FatPointScheme::from_i64(
        3,
        &[(&[1, 9, 0, 0], 1), (&[1, 6, 0, 1], 2), (&[1, 2, 3, 3], 1), (&[1, 9, 3, 5], 1), (&[1, 3, 0, 4], 2)],
    )
    .unwrap()
}

fn engine(c: &mut Criterion) {
    let w = conic_scheme(2);
    c.bench_function("hf_w 2X on a conic", |b| b.iter(|| black_box(&w).hf_table()));
    c.bench_function("omega^1 2X on a conic", |b| {
        b.iter(|| KaehlerEngine::new(black_box(&w)).omega_hf(1, false).unwrap())
    });
    c.bench_function("omega^3 2X on a conic", |b| {
        b.iter(|| KaehlerEngine::new(black_box(&w)).omega_hf(3, false).unwrap())
    });
    let p3 = fat_points_p3();
    c.bench_function("omega^2 fat points in P^3", |b| {
        b.iter(|| KaehlerEngine::new(black_box(&p3)).omega_hf(2, false).unwrap())
    });
}

fn closed_forms(c: &mut Criterion) {
    let spec = ConicSchemeSpec::new(HomogPoly::parse(CONIC, 3).unwrap(), conic_scheme(3)).unwrap();
    c.bench_function("conic closed form omega^2 3X", |b| {
        b.iter(|| conic_hf(black_box(&spec), 2, DeltaSource::Printed).unwrap())
    });
}

fn rank(c: &mut Criterion) {
    // pseudo-random dense integer matrix, full rank with overwhelming probability
    let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
    let rows: Vec<Vec<BigInt>> = (0..60)
        .map(|_| {
            (0..60)
                .map(|_| {
                    x ^= x << 13;
                    x ^= x >> 7;
                    x ^= x << 17;
                    BigInt::from((x % 2001) as i64 - 1000)
                })
                .collect()
        })
        .collect();
    c.bench_function("int_rank 60x60 full rank", |b| {
        b.iter_batched(|| rows.clone(), |r| int_rank(black_box(r), 60), BatchSize::SmallInput)
    });
    // a dependent row defeats the modular certificate and forces fraction-free elimination
    let mut deficient = rows.clone();
    deficient[59] = deficient[0].iter().zip(&deficient[1]).map(|(a, b)| a + b).collect();
    c.bench_function("int_rank 60x60 rank 59", |b| {
        b.iter_batched(|| deficient.clone(), |r| int_rank(black_box(r), 60), BatchSize::SmallInput)
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = engine, closed_forms, rank
}
criterion_main!(benches);
