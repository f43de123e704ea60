use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tdual_core::cohomology::twisted_cohomology_dims;
use tdual_core::{exec, fixtures, DualityScenario};

fn scenario(name: &str) -> DualityScenario {
    fixtures::load(name).expect("bundled scenario").scenario
}

/// The same scenario without its cached transform.
fn fresh(s: &DualityScenario) -> DualityScenario {
    DualityScenario::from_correspondence(s.correspondence().clone(), s.h().clone(), s.hhat().clone(), s.f().clone())
        .expect("valid scenario")
}

fn modes(c: &mut Criterion) {
    let t4 = scenario("t4_self_dual");
    let mut group = c.benchmark_group("exec_modes");
    group.sample_size(20);
    for parallel in [true, false] {
        let mode = if parallel { "parallel" } else { "sequential" };
        exec::set_parallel(parallel);
        group.bench_with_input(BenchmarkId::new("tau_matrix", mode), &t4, |b, s| {
            b.iter(|| fresh(s).tau_matrix().nnz())
        });
        group.bench_with_input(BenchmarkId::new("check", mode), &t4, |b, s| b.iter(|| s.check().expect("check")));
        group.bench_with_input(BenchmarkId::new("twisted_cohomology", mode), &t4, |b, s| {
            b.iter(|| twisted_cohomology_dims(s.e(), s.h()).expect("cohomology").total())
        });
    }
    exec::set_parallel(true);
    group.finish();
}

criterion_group!(benches, modes);
criterion_main!(benches);
