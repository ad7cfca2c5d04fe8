use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lelc_core::codec::encode_trace;
use lelc_core::exec::Execution;
use lelc_core::fnw::{FlipNWrite, FnwConfig};
use lelc_core::mapping::mapgen;
use lelc_core::metrics::{energy_report_with, LinkConfig};
use lelc_core::prefixcode::ChunkedPrefixCode;
use lelc_core::profiler::{profile_with, synthesize_trace, DatawordHistogram};
use lelc_core::throttle::{threshold_sweep_with, InjectionTrace, ThrottleConfig};
use lelc_core::BitString;

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn trace() -> Vec<BitString> {
    let mut counts = vec![4u64; 256];
    counts[0] = 2000;
    counts[255] = 400;
    synthesize_trace(&DatawordHistogram::from_counts(8, counts).unwrap(), 4000, 512, 9).unwrap()
}

fn bench_encode(c: &mut Criterion) {
    let t = trace();
    let tc1p = ChunkedPrefixCode::tc1_prime();
    let fnw = FlipNWrite(FnwConfig::two_level(4, 4).unwrap());
    let mut g = c.benchmark_group("encode_trace");
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new("tc1p", name), &exec, |b, &e| {
            b.iter(|| encode_trace(&tc1p, black_box(&t), e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("fnw2", name), &exec, |b, &e| {
            b.iter(|| encode_trace(&fnw, black_box(&t), e).unwrap())
        });
    }
    g.finish();
}

fn bench_energy(c: &mut Criterion) {
    let t = trace();
    let h = profile_with(&t, 8, Execution::Sequential).unwrap();
    let m = mapgen(&h, 9, false).unwrap();
    let link = LinkConfig::default();
    let mut g = c.benchmark_group("energy_report");
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new("map", name), &exec, |b, &e| {
            b.iter(|| energy_report_with(black_box(&t), &m, &link, e).unwrap())
        });
    }
    g.finish();
}

fn bench_profile(c: &mut Criterion) {
    let t = trace();
    let mut g = c.benchmark_group("profile");
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new("k16", name), &exec, |b, &e| {
            b.iter(|| profile_with(black_box(&t), 16, e).unwrap())
        });
    }
    g.finish();
}

fn bench_sweep(c: &mut Criterion) {
    let cycles: Vec<u64> = (0..200_000u64).map(|i| i * 7 + (i * i) % 13).collect();
    let inj = InjectionTrace::new(cycles).unwrap();
    let cfg = ThrottleConfig { window_cycles: 10_000, ..ThrottleConfig::default() };
    let thresholds: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
    let mut g = c.benchmark_group("threshold_sweep");
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new("51", name), &exec, |b, &e| {
            b.iter(|| threshold_sweep_with(black_box(&inj), &cfg, &thresholds, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_encode, bench_energy, bench_profile, bench_sweep);
criterion_main!(benches);
