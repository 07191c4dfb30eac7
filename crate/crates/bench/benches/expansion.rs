use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;

use unitfrac::construction::{construct, Continuation, TargetSequence};
use unitfrac::families::{family_theta_partial, SequenceFamily};
use unitfrac::greedy::{greedy_expand, recover_a_from_b, wgaa_expand, WgaaPolicy};
use unitfrac::uniqueness::sweep_pairs;
use unitfrac::ExactRational;

fn q(s: &str) -> ExactRational {
    s.parse().unwrap()
}

fn expansion(c: &mut Criterion) {
    let theta = q("19/48");
    c.bench_function("greedy 19/48, 10 terms", |b| {
        b.iter(|| greedy_expand(black_box(&theta), 10).unwrap())
    });
    let policy = WgaaPolicy::ceil_t(q("3/2")).unwrap();
    let theta = q("5/7");
    c.bench_function("ceil(3/2 a), 200 terms", |b| {
        b.iter(|| wgaa_expand(black_box(&theta), &policy, 200).unwrap())
    });
    let denoms: Vec<BigInt> = (1..=500u64).map(|n| BigInt::from(n * (n + 2))).collect();
    let theta = q("3/4");
    c.bench_function("recover a from n(n+2), 500 terms", |b| {
        b.iter(|| recover_a_from_b(black_box(&denoms), &theta).unwrap())
    });
}

fn uniqueness(c: &mut Criterion) {
    let mut g = c.benchmark_group("uniqueness");
    g.sample_size(10);
    g.bench_function("pair sweep to 300", |b| {
        b.iter(|| sweep_pairs(black_box(300)))
    });
    g.finish();
}

fn enclosures(c: &mut Criterion) {
    let mut g = c.benchmark_group("enclosures");
    g.sample_size(10);
    let geo = SequenceFamily::geometric(2, 3).unwrap();
    g.bench_function("geometric(2,3), 40 terms", |b| {
        b.iter(|| family_theta_partial(black_box(&geo), 40).unwrap())
    });
    let arith = SequenceFamily::arithmetic(2, 1).unwrap();
    g.bench_function("arithmetic(2,1), 100000 terms", |b| {
        b.iter(|| family_theta_partial(black_box(&arith), 100_000).unwrap())
    });
    g.finish();
}

fn construction(c: &mut Criterion) {
    let mut prefix = Vec::new();
    for k in 2..=30u64 {
        prefix.extend(std::iter::repeat_n(
            BigInt::from(k * k),
            1 + (k as usize % 3),
        ));
    }
    prefix.push(BigInt::from(31 * 31));
    let seq = TargetSequence::explicit(prefix, Continuation::RepeatLastDelta).unwrap();
    let mut g = c.benchmark_group("construction");
    g.sample_size(10);
    g.bench_function("plateau target, 25 jumps", |b| {
        b.iter(|| construct(black_box(&seq), 25).unwrap())
    });
    g.finish();
}

criterion_group!(benches, expansion, uniqueness, enclosures, construction);
criterion_main!(benches);
