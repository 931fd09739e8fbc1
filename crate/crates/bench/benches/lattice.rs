use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use tdlc_bench::{dihedral, mixed, prime, skew_lattice};
use tdlc_core::autoscale::{scale_newton, tidy_for_cyclic, ScaleOracle};
use tdlc_core::flatgeom::{certify_flat, orbit_counts};
use tdlc_core::lattice::{ball, local::LocalBall};
use tdlc_core::Lattice;

fn lattices(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice");
    for n in [2usize, 3, 4] {
        let p = prime(3);
        let basis = mixed(n, p).matrix().clone();
        g.bench_with_input(BenchmarkId::new("canonicalize", n), &basis, |b, m| {
            b.iter(|| Lattice::canonicalize(black_box(m), p).unwrap())
        });
        let (l, m) = (Lattice::standard(n, p), skew_lattice(n, p));
        g.bench_with_input(BenchmarkId::new("dist", n), &(l, m), |b, (l, m)| {
            b.iter(|| black_box(l).dist(black_box(m)).unwrap())
        });
    }
    g.bench_function("ball n=2 p=3 r=3", |b| {
        let o = Lattice::standard(2, prime(3));
        b.iter(|| ball(black_box(&o), 3).len())
    });
    g.finish();
}

fn scale(c: &mut Criterion) {
    let mut g = c.benchmark_group("scale");
    for n in [2usize, 3] {
        let p = prime(2);
        let a = mixed(n, p);
        g.bench_with_input(BenchmarkId::new("newton", n), &a, |b, a| b.iter(|| scale_newton(black_box(a))));
        g.bench_with_input(BenchmarkId::new("tidy", n), &a, |b, a| {
            b.iter(|| tidy_for_cyclic(black_box(a), 64).unwrap())
        });
        let local = LocalBall::new(n, p, 3).expect("fits the local engine");
        g.bench_with_input(BenchmarkId::new("local ball scan r=3", n), &a, |b, a| {
            b.iter(|| local.min_forward_index(black_box(a.matrix())))
        });
        let oracle = ScaleOracle::new(n, p, 3);
        g.bench_with_input(BenchmarkId::new("oracle r=3", n), &a, |b, a| {
            b.iter(|| oracle.scale(black_box(a)).unwrap())
        });
    }
    g.finish();
}

fn groups(c: &mut Criterion) {
    let mut g = c.benchmark_group("flatgeom");
    g.sample_size(10);
    let d = dihedral(prime(5));
    let o = Lattice::standard(2, prime(5));
    g.bench_function("dihedral orbit depth 8", |b| b.iter(|| orbit_counts(black_box(&d), &o, 8).unwrap()));
    g.bench_function("dihedral certify_flat 8/4", |b| b.iter(|| certify_flat(black_box(&d), 8, 4).unwrap()));
    g.finish();
}

criterion_group!(benches, lattices, scale, groups);
criterion_main!(benches);
