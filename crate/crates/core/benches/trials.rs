//! Sequential vs parallel batches of randomized equivariance trials.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jetinv::suite::default_frame_choices;
use jetinv::trials::{run_trials, Execution};
use jetinv::{equivariance_check, frame_equivariance_check, FrameKind, RepresentationChoice};

const SEED: u64 = 7;

fn executions() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn law_trials(c: &mut Criterion) {
    let choice = RepresentationChoice::new(4, &[1, 2], false).expect("valid choice");
    let mut group = c.benchmark_group("invariant_law");
    group.sample_size(10);
    for (name, exec) in executions() {
        group.bench_with_input(BenchmarkId::new(name, 16), &exec, |b, &exec| {
            b.iter(|| {
                run_trials(exec, SEED, black_box(16), |rng, _| {
                    let u = rng.nondegenerate_surface(2, 4, 4, std::slice::from_ref(&choice))?;
                    let s = rng.reparam(2, 4);
                    let h = rng.invertible_matrix(4);
                    equivariance_check(&u, &s, &h, &choice).map(|r| r.pass)
                })
            })
        });
    }
    group.finish();
}

fn frame_trials(c: &mut Criterion) {
    let choices = default_frame_choices(3);
    let order = choices.iter().map(|c| c.k).max().unwrap_or(0) + 1;
    let mut group = c.benchmark_group("frame_equivariance");
    group.sample_size(10);
    for (name, exec) in executions() {
        group.bench_with_input(BenchmarkId::new(name, 8), &exec, |b, &exec| {
            b.iter(|| {
                run_trials(exec, SEED, black_box(8), |rng, _| {
                    let u = rng.nondegenerate_surface(2, 3, order, &choices)?;
                    let s = rng.reparam(2, order);
                    let h = rng.invertible_matrix(3);
                    frame_equivariance_check(&u, &s, &h, &choices, FrameKind::LogGradient).map(|r| r.pass)
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, law_trials, frame_trials);
criterion_main!(benches);
