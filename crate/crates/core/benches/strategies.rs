use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use geophase::phase::{self, geometric_phase_numeric_with, sample_trajectory};
use geophase::thermo::entropy_action_integral_with;
use geophase::{StateSelector, Strategy, TwoLevelParams};

const STRATEGIES: [(&str, Strategy); 2] = [
    ("sequential", Strategy::Sequential),
    ("parallel", Strategy::Parallel),
];

fn params() -> TwoLevelParams {
    TwoLevelParams::new(1.0, 2.0, std::f64::consts::FRAC_PI_6).unwrap()
}

fn bench_tilde_integral(c: &mut Criterion) {
    let q = params();
    let mut group = c.benchmark_group("geometric_phase_numeric");
    for steps in [10_000usize, 100_000, 1_000_000] {
        for (name, strategy) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, steps), &steps, |b, &steps| {
                b.iter(|| {
                    geometric_phase_numeric_with(&q, StateSelector::Phi, 3, steps, 0.0, strategy)
                        .unwrap()
                })
            });
        }
    }
    group.finish();
}

fn bench_pancharatnam(c: &mut Criterion) {
    let q = params();
    let mut group = c.benchmark_group("pancharatnam_trajectory");
    for samples in [10_000usize, 100_000] {
        for (name, strategy) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, samples), &samples, |b, &m| {
                b.iter(|| {
                    let states = sample_trajectory(&q, StateSelector::Phi, 1, m, strategy).unwrap();
                    phase::pancharatnam_phase(black_box(&states)).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn bench_entropy_action(c: &mut Criterion) {
    let q = params();
    let mut group = c.benchmark_group("entropy_action_integral");
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| entropy_action_integral_with(&q, 2, 100_000, 0.0, strategy).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_tilde_integral,
    bench_pancharatnam,
    bench_entropy_action
);
criterion_main!(benches);
