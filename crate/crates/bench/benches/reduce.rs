use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use polysmith::matrix::{determinant, smith_form, PolyMatrix};
use polysmith::{
    buchberger_with_lift, generate, smith_reduce, Budget, GeneratorConfig, ModulusP, Poly, PolyRing, Rationals, Ring,
    SearchConfig, TermOrder, VarSet,
};

fn ring(n: usize) -> Ring<Rationals> {
    PolyRing::new(VarSet::standard(n), Rationals, TermOrder::Grevlex)
}

fn instance(n: usize, p: &str, exps: &[u32], seed: u64) -> (PolyMatrix<Rationals>, ModulusP<Rationals>) {
    let r = ring(n);
    let m = ModulusP::new(&Poly::parse(p, &r).unwrap()).unwrap();
    let l = exps.len();
    let cfg = GeneratorConfig { rows: l, cols: l, exponents: exps.to_vec(), factors: 4, degree: 2, seed };
    (generate(&r, &m, &cfg).unwrap().f, m)
}

fn bench_gcd(c: &mut Criterion) {
    let r = ring(3);
    let h = Poly::parse("x1*x2 - x3^2 + 1", &r).unwrap();
    let a = &Poly::parse("x1^3 + x2*x3 - 2", &r).unwrap() * &h;
    let b = &Poly::parse("x2^2*x3 + x1 + 5", &r).unwrap() * &h;
    c.bench_function("gcd_3vars_common_factor", |bn| bn.iter(|| black_box(&a).gcd(black_box(&b))));
}

fn bench_groebner(c: &mut Criterion) {
    let r = ring(3);
    let gens: Vec<_> = ["x1^2 + x2*x3 - 1", "x1*x2 - x3^2", "x2^3 + x1 - x3"]
        .iter()
        .map(|s| Poly::parse(s, &r).unwrap())
        .collect();
    c.bench_function("groebner_three_cubics", |bn| {
        bn.iter(|| buchberger_with_lift(black_box(&gens), TermOrder::Grevlex, &Budget::default()).unwrap())
    });
}

fn bench_smith_data(c: &mut Criterion) {
    let (f, m) = instance(3, "x1^2 + 1", &[0, 1, 2], 4);
    c.bench_function("determinant_3x3", |bn| bn.iter(|| determinant(black_box(&f)).unwrap()));
    c.bench_function("smith_form_3x3", |bn| bn.iter(|| smith_form(black_box(&f), Some(&m)).unwrap()));
}

fn bench_reduce(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_reduce");
    group.sample_size(10);
    for (name, n, p, exps) in [
        ("2x2_t1_x1", 2, "x1", vec![0, 1]),
        ("2x2_t1_quadratic", 3, "x1^2 + 1", vec![0, 1]),
        ("2x2_exps_1_2", 3, "x1", vec![1, 2]),
        ("3x3_exps_0_0_2", 2, "x1", vec![0, 0, 2]),
    ] {
        let (f, m) = instance(n, p, &exps, 17);
        group.bench_function(name, |bn| {
            bn.iter(|| smith_reduce(black_box(&f), &m, &SearchConfig::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_gcd, bench_groebner, bench_smith_data, bench_reduce);
criterion_main!(benches);
