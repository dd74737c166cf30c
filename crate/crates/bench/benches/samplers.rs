use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use records_bench::{indices, lambdas, mc_config};
use records_core::mc::{
    record_indicator_counts, sample_conditional_records_exact, sample_limit_chain,
    simulate_conditional_records_bruteforce,
};
use records_core::BuiltinLaw;

const DRAWS: usize = 10_000;

fn conditional(c: &mut Criterion) {
    let mut g = c.benchmark_group("conditional_records");
    g.sample_size(20);
    g.throughput(Throughput::Elements(DRAWS as u64));
    let cfg = mc_config();
    let law = BuiltinLaw::StdExp;
    for idx in [vec![2, 5], vec![5, 20], vec![2, 5, 9]] {
        let set = indices(&idx);
        let label = format!("{idx:?}");
        g.bench_with_input(BenchmarkId::new("bruteforce", &label), &set, |b, s| {
            b.iter(|| simulate_conditional_records_bruteforce(&law, s, DRAWS, &cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("exact", &label), &set, |b, s| {
            b.iter(|| sample_conditional_records_exact(&law, s, DRAWS, &cfg).unwrap())
        });
    }
    g.finish();
}

fn chain(c: &mut Criterion) {
    let mut g = c.benchmark_group("limit_chain");
    g.throughput(Throughput::Elements(DRAWS as u64));
    let cfg = mc_config();
    for lv in [vec![1.0, 2.0], vec![1.0, 2.0, 3.0]] {
        let v = lambdas(&lv);
        g.bench_with_input(BenchmarkId::from_parameter(format!("{lv:?}")), &v, |b, v| {
            b.iter(|| sample_limit_chain(v, DRAWS, &cfg).unwrap())
        });
    }
    g.finish();
}

fn indicators(c: &mut Criterion) {
    let mut g = c.benchmark_group("record_indicators");
    g.sample_size(20);
    g.throughput(Throughput::Elements(DRAWS as u64));
    let cfg = mc_config();
    g.bench_function("length_20", |b| {
        b.iter(|| record_indicator_counts(&BuiltinLaw::NegExp, 20, DRAWS as u64, &[(3, 7)], &cfg).unwrap())
    });
    g.finish();
}

criterion_group!(benches, conditional, chain, indicators);
criterion_main!(benches);
