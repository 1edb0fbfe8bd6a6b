use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use string_geodesics::atlas::{ChartId, CotangentState};
use string_geodesics::elliptic::{curve_from_invariants, du_residues};
use string_geodesics::flow::{init_null, integrate, Direction};
use string_geodesics::sweep::{par_map, seq_map};

fn trace(&(h, u): &(f64, f64)) -> f64 {
    let start = CotangentState::new(ChartId::EfAdv, [0.0, 0.0], [u, 0.0]);
    let (c, _, s) = init_null(h, &start, Direction::Increasing).expect("feasible start");
    integrate(&s, &c, (0.0, 20.0), 1e-10).map(|t| t.energy_drift()).unwrap_or(f64::NAN)
}

fn residues(&(h, u): &(f64, f64)) -> f64 {
    let c = curve_from_invariants(h, u).expect("positive energy");
    du_residues(&c, 1).map(|r| r.max_discrepancy()).unwrap_or(f64::NAN)
}

fn bench(c: &mut Criterion) {
    let params: Vec<(f64, f64)> = (0..64).map(|i| (1.0 + 0.05 * i as f64, 0.6 + 0.01 * i as f64)).collect();
    let mut g = c.benchmark_group("trace_sweep");
    g.sample_size(20);
    g.bench_with_input(BenchmarkId::new("parallel", params.len()), &params, |b, p| {
        b.iter(|| par_map(black_box(p), trace))
    });
    g.bench_with_input(BenchmarkId::new("sequential", params.len()), &params, |b, p| {
        b.iter(|| seq_map(black_box(p), trace))
    });
    g.finish();

    let mut g = c.benchmark_group("residue_sweep");
    g.bench_with_input(BenchmarkId::new("parallel", params.len()), &params, |b, p| {
        b.iter(|| par_map(black_box(p), residues))
    });
    g.bench_with_input(BenchmarkId::new("sequential", params.len()), &params, |b, p| {
        b.iter(|| seq_map(black_box(p), residues))
    });
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
