use concc_core::hnn::HnnTower;
use concc_core::presentation::FinitePresentation;
use concc_core::tower::{build_tower, TowerConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bs12_powers(c: &mut Criterion) {
    let pres = FinitePresentation::bs12();
    let tower = HnnTower::from_presentation(&pres).unwrap();
    let mut g = c.benchmark_group("britton_bs12");
    for k in [2usize, 4, 8] {
        // t^k a t^-k a^(-2^k)
        let text = format!("{} a {} {}", "t ".repeat(k), "t^-1 ".repeat(k), "a^-1 ".repeat(1 << k));
        let w = pres.word(&text).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(k), &w, |b, w| b.iter(|| tower.is_trivial(w).unwrap()));
    }
    g.finish();
}

fn tower_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("tower_build");
    g.sample_size(10);
    for stages in [50usize, 200] {
        g.bench_with_input(BenchmarkId::from_parameter(stages), &stages, |b, &n| {
            b.iter(|| build_tower(TowerConfig::ncc(3, n)).unwrap().stages().len())
        });
    }
    g.finish();
}

criterion_group!(benches, bs12_powers, tower_build);
criterion_main!(benches);
