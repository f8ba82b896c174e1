use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shapestab::energy::{g_beta, seminorm_beta_direct};
use shapestab::geometry::{NearlySphericalShape, SphereGrid};
use shapestab::par::with_threads;
use shapestab::rearrange::{
    shell_transport, transport_energy_bound_check, PolarCell, SectorShells,
};
use shapestab::stability::{normalize_sup, random_band_limited};
use std::hint::black_box;

fn pools() -> Vec<(&'static str, usize)> {
    let all = std::thread::available_parallelism().map_or(1, |n| n.get());
    vec![("sequential", 1), ("parallel", all)]
}

fn seminorm(c: &mut Criterion) {
    let grid = SphereGrid::circle(1024).unwrap();
    let u = random_band_limited(&grid, 12, 1).unwrap();
    let mut g = c.benchmark_group("seminorm_direct_m1024");
    for (name, threads) in pools() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &threads, |b, &t| {
            b.iter(|| with_threads(t, || black_box(seminorm_beta_direct(&grid, &u, 1.0))))
        });
    }
    g.finish();
}

fn energy(c: &mut Criterion) {
    let grid = SphereGrid::circle(256).unwrap();
    let u = normalize_sup(&random_band_limited(&grid, 12, 2).unwrap(), 0.5);
    let shape = NearlySphericalShape::new(grid, 0.05, u).unwrap();
    let mut g = c.benchmark_group("g_beta_nearly_spherical_m256");
    g.sample_size(20);
    for (name, threads) in pools() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &threads, |b, &t| {
            b.iter(|| with_threads(t, || black_box(g_beta(&shape, 1.0).unwrap())))
        });
    }
    g.finish();
}

fn transport(c: &mut Criterion) {
    let sectors = vec![SectorShells {
        a0: 0.0,
        a1: std::f64::consts::TAU,
        source: vec![(1.0, 1.05)],
        target: vec![((1.0 - (1.05f64 * 1.05 - 1.0)).sqrt(), 1.0)],
    }];
    let map = shell_transport(&sectors, 0.15).unwrap();
    let core = [PolarCell {
        r0: 0.0,
        r1: 0.85,
        a0: 0.0,
        a1: std::f64::consts::TAU,
    }];
    let mut g = c.benchmark_group("transport_bound");
    g.sample_size(10);
    for (name, threads) in pools() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &threads, |b, &t| {
            b.iter(|| {
                with_threads(t, || {
                    black_box(transport_energy_bound_check(&map, &core, 2.0).unwrap())
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, seminorm, energy, transport);
criterion_main!(benches);
