//! Sequential vs parallel homomorphism search on shared workloads.
//!
//! `cargo bench` runs the sequential path; with the default `parallel`
//! feature the same workloads are repeated on the rayon split with 2 and 4
//! workers for comparison.

use criterion::{criterion_group, criterion_main, Criterion};
use pcsp::conditions::{generate_condition, ConditionKind};
use pcsp::core::{clique, cycle, power};
use pcsp::homsearch::{find_hom, SearchOpts};
use pcsp::indicator::condition_to_instance;
use pcsp::SizeCap;

fn bench_search(c: &mut Criterion) {
    let cap = SizeCap::default();
    let olsak = generate_condition(ConditionKind::Olsak).unwrap();
    let (indicator, _) = condition_to_instance(&olsak, &clique(3), &cap).unwrap();
    let k4 = clique(4);
    let c5_cubed = power(&cycle(5), 3, &cap).unwrap();
    let k3 = clique(3);

    // (name, instance, template); one UNSAT and one SAT workload.
    let workloads = [
        ("olsak_indicator_to_k4", &indicator, &k4),
        ("c5_cubed_to_k3", &c5_cubed, &k3),
    ];

    let mut group = c.benchmark_group("find_hom");
    group.sample_size(20);
    for (name, inst, tmpl) in workloads {
        let seq = SearchOpts::default();
        group.bench_function(format!("{}/seq", name), |b| {
            b.iter(|| find_hom(inst, tmpl, &seq).unwrap())
        });
        #[cfg(feature = "parallel")]
        for jobs in [2, 4] {
            let par = SearchOpts { deterministic: false, jobs, ..SearchOpts::default() };
            group.bench_function(format!("{}/par{}", name, jobs), |b| {
                b.iter(|| find_hom(inst, tmpl, &par).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_search);
criterion_main!(benches);
