//! Rayon's default pool against a one-thread pool on the same exact workloads.
//! Without the `parallel` feature both arms run the sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;

use jetcert::groupoid::membership;
use jetcert::painleve::{build_model, check_conjugation, default_base, flow_jet, malgrange_spec, ParameterPairing};
use jetcert::symbols::bracket_surjectivity_check;

fn workloads() -> Vec<(&'static str, Box<dyn Fn() + Sync>)> {
    let m = build_model();
    let spec = malgrange_spec(&m);
    let flow = flow_jet(&m, &default_base(), 2, 4).unwrap();
    let model = m.clone();
    vec![
        (
            "conjugation",
            Box::new(move || assert!(check_conjugation(&model, ParameterPairing::Identity).unwrap().iter().all(|c| c.ok))),
        ),
        ("flow-membership", Box::new(move || assert!(membership(&spec, &flow).unwrap().verdict))),
        ("surjectivity m=3 q=2 k=2", Box::new(|| assert!(bracket_surjectivity_check(3, 2, 2, 1).unwrap().surjective))),
    ]
}

fn compare(c: &mut Criterion) {
    let wide = ThreadPoolBuilder::new().build().unwrap();
    let single = ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut group = c.benchmark_group("parallel-vs-sequential");
    group.sample_size(10);
    for (name, work) in workloads() {
        for (arm, pool) in [("parallel", &wide), ("sequential", &single)] {
            group.bench_function(BenchmarkId::new(arm, name), |b| b.iter(|| pool.install(&work)));
        }
    }
    group.finish();
}

criterion_group!(benches, compare);
criterion_main!(benches);
