//! Microbenchmarks for the hot kernels: group construction, multichain
//! enumeration, parking-space builds with their action tables, the
//! character verification scan, the equivariant-basis solve, and one full
//! homotopy solve.

use criterion::{criterion_group, criterion_main, Criterion};
use parkspace::characters;
use parkspace::group::{GroupSpec, ReflectionGroup};
use parkspace::hsop;
use parkspace::locus::{solve_homotopy, TrackConfig};
use parkspace::noncrossing::Noncrossing;
use parkspace::parkfn::ParkSet;
use std::hint::black_box;

fn build(spec: &str) -> ReflectionGroup {
    ReflectionGroup::build(GroupSpec::parse(spec).unwrap()).unwrap()
}

fn bench_group_build(c: &mut Criterion) {
    c.bench_function("group_build_D4", |b| {
        b.iter(|| black_box(build("D4")).order())
    });
}

fn bench_multichains(c: &mut Criterion) {
    let g = build("B3");
    c.bench_function("multichains_B3_k2", |b| {
        let nc = Noncrossing::new(&g);
        b.iter(|| black_box(nc.multichains(2)).len())
    });
}

fn bench_park(c: &mut Criterion) {
    let g = build("A4");
    c.bench_function("park_build_A4_k2", |b| {
        b.iter(|| black_box(ParkSet::new(&g, 2).unwrap()).len())
    });
}

fn bench_weak(c: &mut Criterion) {
    let g = build("B2");
    c.bench_function("verify_weak_B2_k2", |b| {
        b.iter(|| black_box(characters::verify_weak(&g, 2).unwrap()).pass)
    });
}

fn bench_hsop_basis(c: &mut Criterion) {
    let g = build("A4");
    c.bench_function("hom_basis_A4_k1", |b| {
        b.iter(|| black_box(hsop::hom_basis(&g, 1).unwrap()).dim)
    });
}

fn bench_homotopy(c: &mut Criterion) {
    let g = build("A3");
    let space = hsop::hom_basis(&g, 1).unwrap();
    let theta = hsop::sample_theta(&space, 1);
    let config = TrackConfig { seed: 1, ..Default::default() };
    c.bench_function("homotopy_solve_A3_k1", |b| {
        b.iter(|| {
            black_box(solve_homotopy(&g, &theta, 1, &config).unwrap())
                .certified()
                .unwrap()
                .points
                .len()
        })
    });
}

criterion_group!(
    benches,
    bench_group_build,
    bench_multichains,
    bench_park,
    bench_weak,
    bench_hsop_basis,
    bench_homotopy
);
criterion_main!(benches);
