use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use regmap::perm::{group_order, thm43_permutations};
use regmap::{preset, run_census, todd_coxeter, CensusConfig, EnumerationLimits};

fn enumeration(c: &mut Criterion) {
    let limits = EnumerationLimits::default();
    let mut g = c.benchmark_group("todd_coxeter");
    g.sample_size(10);
    for fam in ["G1", "G6"] {
        let p = preset(fam, &[12]).unwrap();
        g.bench_function(format!("{fam}(12)"), |b| b.iter(|| todd_coxeter(black_box(&p), &[], &limits).unwrap()));
    }
    g.finish();
}

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    g.bench_function("through 2^9", |b| b.iter(|| run_census(black_box(&CensusConfig::new(9))).unwrap()));
    g.finish();
}

fn schreier_sims(c: &mut Criterion) {
    let gens = thm43_permutations(12).unwrap();
    c.bench_function("schreier_sims H6(12)", |b| b.iter(|| group_order(black_box(&gens)).unwrap()));
}

fn canonical_form(c: &mut Criterion) {
    let t = todd_coxeter(&preset("G3", &[12]).unwrap(), &[], &EnumerationLimits::default()).unwrap();
    c.bench_function("canonicalize G3(12)", |b| b.iter(|| black_box(&t).canonicalize().unwrap()));
}

criterion_group!(benches, enumeration, census, schreier_sims, canonical_form);
criterion_main!(benches);
