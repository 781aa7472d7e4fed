//! Parallel against single-threaded runs of the main pipeline stages.
//! Built without the `parallel` feature both variants run sequentially.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use orbit_lie::age::Param;
use orbit_lie::lie::ActionTruncation;
use orbit_lie::parallel::with_threads;
use orbit_lie::{Age, AgeSpec, FiniteStructure, Measure, Signature};

fn fibonacci_measure() -> Measure {
    let sig = Signature::new(["E"]).unwrap();
    let k2 = FiniteStructure::from_pairs(sig, 2, [(0, 0, 1), (0, 1, 0)]).unwrap();
    let age = Age::new(AgeSpec::times_q(AgeSpec::FiniteModel(k2))).unwrap();
    Measure::symbolic(Arc::new(age)).unwrap()
}

fn sets_over_q() -> Measure {
    let age = Age::new(AgeSpec::times_q(AgeSpec::sets(Param::symbolic()))).unwrap();
    Measure::symbolic(Arc::new(age)).unwrap()
}

fn threads() -> [(&'static str, usize); 2] {
    let all = std::thread::available_parallelism().map_or(1, |n| n.get());
    [("sequential", 1), ("parallel", all)]
}

fn enumerate(c: &mut Criterion) {
    let m = fibonacci_measure();
    let mut g = c.benchmark_group("enumerate_levels");
    for (name, t) in threads() {
        g.bench_with_input(BenchmarkId::new(name, 12), &t, |b, &t| {
            with_threads(t, || b.iter(|| m.age().enumerate_levels(12, None).unwrap()))
        });
    }
    g.finish();
}

fn action(c: &mut Criterion) {
    let m = sets_over_q();
    let mut g = c.benchmark_group("action_build_and_sl2");
    g.sample_size(10);
    for (name, t) in threads() {
        g.bench_with_input(BenchmarkId::new(name, 7), &t, |b, &t| {
            with_threads(t, || {
                b.iter(|| {
                    // fresh measure each time so the value memo does not carry over
                    let fresh = Measure::symbolic(m.age().clone()).unwrap();
                    ActionTruncation::build(&fresh, 7, None).unwrap().verify_sl2().passed()
                })
            })
        });
    }
    g.finish();
}

fn measure_check(c: &mut Criterion) {
    let m = fibonacci_measure();
    let mut g = c.benchmark_group("verify_r_measure");
    g.sample_size(10);
    for (name, t) in threads() {
        g.bench_with_input(BenchmarkId::new(name, 7), &t, |b, &t| {
            with_threads(t, || b.iter(|| Measure::symbolic(m.age().clone()).unwrap().verify_r_measure(7).unwrap().passed()))
        });
    }
    g.finish();
}

criterion_group!(benches, enumerate, action, measure_check);
criterion_main!(benches);
