// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use coherent_path::amplitude::{
    lambda_continuation_phase_with, uniform_lambda_grid, DEFAULT_LAMBDA_NODES,
};
use coherent_path::diagnostics::{implementability_scan_with, ModeFamily, ModeGenerator};
use coherent_path::linalg::c;
use coherent_path::oracles::convergence_study;
use coherent_path::random::{random_hamiltonian, RandomSpec};
use coherent_path::{CoherentLabel, Execution};

fn modes() -> Vec<Execution> {
    #[cfg(feature = "parallel")]
    return vec![Execution::Sequential, Execution::Parallel];
    #[cfg(not(feature = "parallel"))]
    vec![Execution::Sequential]
}

fn scan(c_: &mut Criterion) {
    let fam = ModeFamily::new(
        "bench",
        ModeGenerator::power_law(1.0, 1.0, c(0.5, 0.0), -0.5),
        vec![10, 1_000, 100_000],
        1e-6,
    )
    .unwrap();
    let mut g = c_.benchmark_group("scan_1e5_modes");
    for exec in modes() {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &exec,
            |b, &e| b.iter(|| implementability_scan_with(black_box(&fam), 2.0, e).unwrap()),
        );
    }
    g.finish();
}

fn continuation(c_: &mut Criterion) {
    let h = random_hamiltonian(&RandomSpec::time_dependent(4, 1.0), 7).unwrap();
    let grid = uniform_lambda_grid(DEFAULT_LAMBDA_NODES);
    let mut g = c_.benchmark_group("lambda_continuation_4_modes");
    for exec in modes() {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &exec,
            |b, &e| {
                b.iter(|| lambda_continuation_phase_with(black_box(&h), &grid, 512, e).unwrap())
            },
        );
    }
    g.finish();
}

fn path_integral(c_: &mut Criterion) {
    let h = random_hamiltonian(&RandomSpec::time_dependent(3, 1.0), 11).unwrap();
    let zero = CoherentLabel::zeros(3);
    let mut g = c_.benchmark_group("path_integral_study_3_modes");
    for exec in modes() {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &exec,
            |b, &e| b.iter(|| convergence_study(black_box(&h), &zero, &zero, 6..=12, e).unwrap()),
        );
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = scan, continuation, path_integral
}

criterion_main!(benches);
