use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use isokit::cubelim::run_trials;
use isokit::fixpoint::{lefschetz, reidemeister_trace, removal_verdict};
use isokit::group::{enumerate_subgroups, table_of_marks};
use isokit::linking::{build_linking, coarsen, decompose};
use isokit::{models, FiniteGroup, GMap};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn groups(c: &mut Criterion) {
    // fresh groups, since the lattice is cached per group
    c.bench_function("subgroups S4", |b| {
        b.iter(|| enumerate_subgroups(&FiniteGroup::symmetric(black_box(4))))
    });
    c.bench_function("table of marks D12", |b| {
        b.iter(|| table_of_marks(&FiniteGroup::dihedral(black_box(6))))
    });
}

fn complexes(c: &mut Criterion) {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let chain = s3.parse_chain("e<C2<S3").unwrap();
    c.bench_function("linking e<C2<S3", |b| {
        b.iter(|| build_linking(black_box(&s3), &chain).unwrap())
    });
    let wheel = models::square_wheel();
    c.bench_function("decompose and coarsen wheel", |b| {
        b.iter(|| {
            let cs = decompose(black_box(&wheel)).unwrap();
            coarsen(&cs, &wheel)
        })
    });
    let sphere = models::cone_wedge_sphere();
    c.bench_function("subdivide cone wedge sphere", |b| {
        b.iter(|| black_box(&sphere).barycentric_subdivision())
    });
}

fn invariants(c: &mut Criterion) {
    let sphere = models::cone_wedge_sphere();
    let id = GMap::identity(&sphere);
    c.bench_function("lefschetz sd(cone wedge sphere)", |b| {
        let f = id.subdivide();
        b.iter(|| lefschetz(black_box(&f)).unwrap())
    });
    let dims = [("e".to_string(), 5), ("C2".to_string(), 3)]
        .into_iter()
        .collect();
    c.bench_function("verdict cone wedge sphere", |b| {
        b.iter(|| removal_verdict(black_box(&id), &dims).unwrap())
    });
    let refl = models::hexagon_reflection();
    let data = models::hexagon_pi(-1);
    c.bench_function("reidemeister hexagon reflection", |b| {
        b.iter(|| reidemeister_trace(black_box(&refl), &data).unwrap())
    });
}

fn cubes(c: &mut Criterion) {
    let mut group = c.benchmark_group("cube trials");
    group.sample_size(10);
    group.bench_function("50 accepted 3-cubes", |b| {
        b.iter(|| run_trials(3, 5, 50, &mut ChaCha8Rng::seed_from_u64(1)))
    });
    group.finish();
}

criterion_group!(benches, groups, complexes, invariants, cubes);
criterion_main!(benches);
