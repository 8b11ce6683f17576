use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use levi_core::ce::{homotopy, Cochain, HomotopyTables, Layout, ModuleKind, TablesCache};
use levi_core::jet::pushforward;
use levi_core::jet::random::{random_diffeo, random_poly, rng, JetShape};
use levi_core::levi::{model_bivector, normalize_with, LeviProblem, NormalizeConfig};
use levi_core::norms::{spectral_norm, majorant_norm};
use levi_core::rational::frac;
use levi_core::StructureData;

fn jets(c: &mut Criterion) {
    let mut g = c.benchmark_group("jet");
    for cap in [4u32, 6, 8] {
        let mut r = rng(1);
        let shape = JetShape::new(0, cap, 0.3);
        let a = random_poly(&mut r, 3, cap, shape);
        let b = random_poly(&mut r, 3, cap, shape);
        g.bench_with_input(BenchmarkId::new("mul_n3", cap), &cap, |bch, _| bch.iter(|| black_box(&a * &b)));
        let theta = random_diffeo(&mut r, 3, cap, cap, 0.3);
        g.bench_with_input(BenchmarkId::new("invert_n3", cap), &cap, |bch, _| {
            bch.iter(|| black_box(theta.inverse()))
        });
        let pi = model_bivector(&StructureData::so3(), cap);
        g.bench_with_input(BenchmarkId::new("pushforward_so3", cap), &cap, |bch, _| {
            bch.iter(|| black_box(pushforward(&pi, &theta)))
        });
        let r_half = frac(1, 2);
        g.bench_with_input(BenchmarkId::new("norms_n3", cap), &cap, |bch, _| {
            bch.iter(|| black_box((spectral_norm(&a, 6, &r_half).unwrap(), majorant_norm(&a, 6, &r_half).unwrap())))
        });
    }
    g.finish();
}

fn cohomology(c: &mut Criterion) {
    let mut g = c.benchmark_group("homotopy");
    g.sample_size(10);
    let data = StructureData::so3();
    for cap in [4u32, 6] {
        g.bench_with_input(BenchmarkId::new("tables_so3_functions", cap), &cap, |bch, &cap| {
            bch.iter(|| black_box(HomotopyTables::new(&data, ModuleKind::Functions, Layout::Poisson, cap).unwrap()))
        });
        let tables = HomotopyTables::new(&data, ModuleKind::Functions, Layout::Poisson, cap).unwrap();
        let mut r = rng(2);
        let vals = (0..3)
            .map(|_| vec![random_poly(&mut r, 3, cap, JetShape::new(2, cap, 0.4))])
            .collect();
        let c2 = Cochain::from_values(tables.spec(), tables.exterior(), 2, vals).unwrap();
        g.bench_with_input(BenchmarkId::new("solve_so3_degree2", cap), &cap, |bch, _| {
            bch.iter(|| black_box(homotopy(&tables, &c2).unwrap()))
        });
    }
    g.finish();
}

fn normalization(c: &mut Criterion) {
    let mut g = c.benchmark_group("normalize");
    g.sample_size(10).measurement_time(Duration::from_secs(20));
    let data = StructureData::so3();
    let mut cache = TablesCache::new(&data);
    for cap in [4u32, 6, 8] {
        let theta = random_diffeo(&mut rng(3), 3, cap, 3, 0.3);
        let pi = pushforward(&model_bivector(&data, cap), &theta);
        let problem = LeviProblem::new(data.clone(), pi, Layout::Poisson).unwrap();
        let mut config = NormalizeConfig::formal(cap);
        config.checks = false;
        normalize_with(&mut cache, &problem, &config).unwrap();
        g.bench_with_input(BenchmarkId::new("conn_so3_formal", cap), &cap, |bch, _| {
            bch.iter(|| black_box(normalize_with(&mut cache, &problem, &config).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, jets, cohomology, normalization);
criterion_main!(benches);
