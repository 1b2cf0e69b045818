use criterion::{criterion_group, criterion_main, Criterion};
use semikit::action::trivial_action;
use semikit::corpus;
use semikit::crossed::{crossed_by_e, full_crossed_product, ks_gamma_check};
use semikit::cycle::green_julg_class;
use semikit::functors::{crossed_factor, kappa};
use semikit::gen::random_instance;
use semikit::groupoid::{groupoid_cstar, munn_blocks, paterson_groupoid};
use semikit::star_algebra::{CStarBlockAlgebra, Tol};

fn bench_cstar_i3(c: &mut Criterion) {
    let sg = corpus::named("i3").unwrap();
    let tol = Tol::default();
    let scalar = CStarBlockAlgebra::scalar();
    let action = trivial_action(&sg, &scalar);
    c.bench_function("cstar_i3_envelope", |b| {
        b.iter(|| full_crossed_product(&action, 0, &tol).unwrap())
    });
    c.bench_function("cstar_i3_munn", |b| b.iter(|| munn_blocks(&sg, 0, &tol).unwrap()));
    c.bench_function("cstar_i3_groupoid", |b| {
        b.iter(|| groupoid_cstar(&paterson_groupoid(&sg), 0, &tol).unwrap())
    });
}

fn bench_ks_gamma(c: &mut Criterion) {
    let sg = corpus::named("i2").unwrap();
    let tol = Tol::default();
    let action = semikit::action::spectral_action(&sg, &[1, 1, 2]).unwrap();
    c.bench_function("ks_gamma_i2_spectral", |b| {
        b.iter(|| ks_gamma_check(&action, 0, &tol).unwrap())
    });
}

fn bench_kappa(c: &mut Criterion) {
    let sg = corpus::named("i1").unwrap();
    let tol = Tol::default();
    let inst = random_instance(&sg, 1, 6).unwrap();
    let cby_b = crossed_by_e(&inst.action, 0, &tol).unwrap();
    let factor = crossed_factor(&cby_b, &tol).unwrap();
    let scalar = CStarBlockAlgebra::scalar();
    let cby_a = crossed_by_e(&trivial_action(&sg, &scalar), 0, &tol).unwrap();
    c.bench_function("kappa_i1_instance", |b| {
        b.iter(|| kappa(&inst.module, &factor, &cby_a, &tol).unwrap())
    });
}

fn bench_green_julg(c: &mut Criterion) {
    let sg = corpus::named("i1").unwrap();
    let tol = Tol::default();
    let inst = random_instance(&sg, 1, 6).unwrap();
    c.bench_function("green_julg_i1_instance", |b| {
        b.iter(|| green_julg_class(&inst.module, 0, &tol).unwrap())
    });
}

criterion_group!(benches, bench_cstar_i3, bench_ks_gamma, bench_kappa, bench_green_julg);
criterion_main!(benches);
