//! Benchmarks for the hot paths: the closed-form two-type solver, the
//! brute-force grid oracle, the continuum schedule solver, and the
//! transition kernel.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use infomenu::{
    grid_search_two_type, solve_menu, solve_two_type, ChainParams, ContinuumEconomy, Payoff,
    TwoTypeEconomy, TwoTypePrior, TypeDistribution,
};

fn two_type_economy() -> TwoTypeEconomy {
    TwoTypeEconomy::new(TwoTypePrior::new(2.0 / 3.0, 0.1).unwrap(), 0.7, 1.0, 2.0).unwrap()
}

fn continuum_economy() -> ContinuumEconomy {
    ContinuumEconomy::new(
        2.0,
        ChainParams::new(2.0 / 3.0, 1.0).unwrap(),
        Payoff::bounded_exp(1.0, 1.0).unwrap(),
        TypeDistribution::uniform(0.0, 2.0).unwrap(),
    )
    .unwrap()
}

fn bench_two_type_solve(c: &mut Criterion) {
    let econ = two_type_economy();
    c.bench_function("two_type_solve", |b| {
        b.iter(|| solve_two_type(black_box(&econ)).unwrap())
    });
}

fn bench_grid_search(c: &mut Criterion) {
    let econ = two_type_economy();
    c.bench_function("grid_search_51", |b| {
        b.iter(|| grid_search_two_type(black_box(&econ), 51).unwrap())
    });
}

fn bench_solve_menu(c: &mut Criterion) {
    let econ = continuum_economy();
    c.bench_function("solve_menu_201", |b| {
        b.iter(|| solve_menu(black_box(&econ), 201).unwrap())
    });
}

fn bench_transition(c: &mut Criterion) {
    let params = ChainParams::new(2.0 / 3.0, 1.0).unwrap();
    c.bench_function("transition_kernel", |b| {
        b.iter(|| params.transition(black_box(0.5)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_two_type_solve,
    bench_grid_search,
    bench_solve_menu,
    bench_transition
);
criterion_main!(benches);
