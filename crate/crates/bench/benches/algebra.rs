use std::hint::black_box;
use std::str::FromStr;

use criterion::{criterion_group, criterion_main, Criterion};
use superlie::casimir::{c3, omega0};
use superlie::liesuper::{build, verify_algebra, Family, SuperAlgebra};
use superlie::loop_km::verify_km_centrality;
use superlie::shapovalov::harness::{Harness, Method, Target};
use superlie::shapovalov::{bsh_gram, gram_matrix, Vacuum};
use superlie::uea::{PbwAlgebra, SigmaMap};

fn alg(s: &str) -> SuperAlgebra {
    build(&Family::from_str(s).unwrap()).unwrap()
}

fn structure(c: &mut Criterion) {
    let poi5 = alg("poi(0|5)");
    c.bench_function("verify poi(0|5)", |b| b.iter(|| verify_algebra(black_box(&poi5))));
    c.bench_function("build poi(0|6)", |b| b.iter(|| alg(black_box("poi(0|6)"))));
}

fn casimirs(c: &mut Criterion) {
    let poi4 = alg("poi(0|4)");
    let poi3 = alg("poi(0|3)");
    c.bench_function("omega0 poi(0|4)", |b| b.iter(|| omega0(black_box(&poi4)).unwrap()));
    c.bench_function("c3 poi(0|3)", |b| b.iter(|| c3(black_box(&poi3)).unwrap()));
    let sl2 = alg("sl(2)");
    c.bench_function("km centrality sl(2), |m| <= 2", |b| {
        b.iter(|| verify_km_centrality(black_box(&sl2), 1, 2).unwrap())
    });
}

fn determinants(c: &mut Criterion) {
    let g = alg("sl(2|1)");
    let u = PbwAlgebra::new(&g).unwrap();
    let s = SigmaMap::default_for(&g).unwrap();
    let chi = g.lattice().unwrap().parse_weight("2a1 + 2a2", g.torus().len()).unwrap();
    c.bench_function("gram det sl(2|1) 2a1+2a2", |b| {
        b.iter(|| gram_matrix(&u, &s, black_box(&chi)).unwrap().determinant())
    });
    let g = alg("poi(0|3)");
    let u = PbwAlgebra::new(&g).unwrap();
    let s = SigmaMap::default_for(&g).unwrap();
    let chi = g.lattice().unwrap().parse_weight("3e1", g.torus().len()).unwrap();
    c.bench_function("bsh det poi(0|3) 3e1", |b| {
        b.iter(|| bsh_gram(&u, &s, black_box(&chi), Vacuum::Full).unwrap().determinant())
    });
    let h = Harness::new(Target::Poi05).unwrap();
    let chi = h.parse_chi("e1").unwrap();
    let mut group = c.benchmark_group("harness");
    group.sample_size(10);
    group.bench_function("poi(0|5) e1 lines", |b| b.iter(|| h.run(black_box(&chi), Method::Lines, 1).unwrap()));
    group.finish();
}

criterion_group!(benches, structure, casimirs, determinants);
criterion_main!(benches);
