// Copyright 2026 The ecp-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ecp_bench::alpha_squared_grid;
use ecp_core::ecp::{ghz_state, round_statevector, sum_of_products, total_success_probability};
use ecp_core::locc::{run_protocol, ProtocolConfig};
use ecp_core::montecarlo::{estimate_success, pool_schmidt_oracle, trial_rng};
use ecp_core::{ProbeModel, SchmidtCoefficients};

fn analytics(c: &mut Criterion) {
    let grid = alpha_squared_grid();
    c.bench_function("recursion_grid_n10", |b| {
        b.iter(|| grid.iter().map(|&g| total_success_probability(g, black_box(10))).sum::<f64>())
    });
    c.bench_function("literal_grid_n10", |b| {
        b.iter(|| grid.iter().map(|&g| sum_of_products(g, black_box(10))).sum::<f64>())
    });
}

fn statevector_round(c: &mut Criterion) {
    let coeffs = SchmidtCoefficients::from_alpha_squared(0.2).unwrap();
    let model = ProbeModel::default();
    let mut group = c.benchmark_group("round_statevector");
    for n in [2usize, 4, 8, 12] {
        let state = ghz_state(n, coeffs).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &state, |b, s| {
            let mut rng = trial_rng(1, 0);
            b.iter(|| round_statevector(s, 0, coeffs, &model, &mut rng).unwrap())
        });
    }
    group.finish();
}

fn ensembles(c: &mut Criterion) {
    let coeffs = SchmidtCoefficients::from_alpha_squared(0.2).unwrap();
    let mut group = c.benchmark_group("ensembles");
    group.sample_size(10);
    group.bench_function("trajectories_1e5_n2", |b| b.iter(|| estimate_success(coeffs, 2, 100_000, 7).unwrap()));
    group.bench_function("pool_1e4_levels6", |b| b.iter(|| pool_schmidt_oracle(coeffs, 6, 10_000, 7).unwrap()));
    group.bench_function("locc_n3_100_runs", |b| {
        b.iter(|| {
            (0..100u64)
                .map(|seed| run_protocol(&ProtocolConfig::new(3, coeffs, 6, seed)).unwrap().events.len())
                .sum::<usize>()
        })
    });
    group.finish();
}

criterion_group!(benches, analytics, statevector_round, ensembles);
criterion_main!(benches);
