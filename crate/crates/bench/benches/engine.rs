use criterion::{black_box, criterion_group, criterion_main, Criterion};

use fcat_bench::inputs;
use fcat_core::derived::power_structure;
use fcat_core::equiv::{check_witnesses, decide_equiv, EquivMode, WitnessBounds};
use fcat_core::weak::{check_coherence, Axiom, CoherenceBounds};

fn decide(c: &mut Criterion) {
    let mut g = c.benchmark_group("decide_equiv");
    for (name, p) in inputs() {
        g.bench_function(&name, |b| b.iter(|| decide_equiv(black_box(&p), EquivMode::Optimistic)));
    }
    g.finish();
}

fn extract(c: &mut Criterion) {
    let mut g = c.benchmark_group("extract_all");
    for (name, p) in inputs() {
        let r = decide_equiv(&p, EquivMode::Optimistic);
        g.bench_function(&name, |b| {
            b.iter(|| r.members.iter().filter_map(|(x, y)| r.extract(x, y)).count())
        });
    }
    g.finish();
}

fn coherence(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_coherence");
    g.sample_size(10);
    let bounds = CoherenceBounds {
        max_len: 3,
        ..Default::default()
    };
    for (name, p) in inputs() {
        g.bench_function(&name, |b| {
            b.iter(|| check_coherence(black_box(&p), &Axiom::ALL, bounds))
        });
    }
    g.finish();
}

fn power(c: &mut Criterion) {
    let mut g = c.benchmark_group("power_structure");
    for (name, p) in inputs() {
        g.bench_function(format!("{name}/2"), |b| {
            b.iter(|| power_structure(black_box(&p), 2, 1_000_000))
        });
    }
    g.finish();
}

fn witnesses(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_witnesses");
    g.sample_size(10);
    for (name, p) in inputs() {
        g.bench_function(&name, |b| {
            b.iter(|| check_witnesses(black_box(&p), WitnessBounds::default()))
        });
    }
    g.finish();
}

criterion_group!(benches, decide, extract, coherence, power, witnesses);
criterion_main!(benches);
