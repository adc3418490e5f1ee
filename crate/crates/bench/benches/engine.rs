use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use presym_bench::{cubic, r4, torus, twisted};
use presym_core::cartan::{d, lie};
use presym_core::fiberlin::random::{random_horizontal, random_instance};
use presym_core::fiberlin::{f_map, rank_kernel};
use presym_core::foliation::{cycle_integral_presym, kuranishi, sample_vvf, FoliationAlgebra};
use presym_core::koszul::{koszul2, koszul3, linf_relation_check, mc_residual, relation_samples};
use presym_core::presym::{default_points, horizontal_sample};
use presym_core::sampling::Sampler;
use presym_core::Q;

fn coefficients(c: &mut Criterion) {
    let ch = r4();
    c.bench_function("parse rational function", |b| {
        b.iter(|| ch.parse(black_box("(x^2*y - 3/4*z)/(1 + y)^2 + w")).unwrap())
    });
    let f = ch.parse("(x^2*y - 3/4*z)/(1 + y)^2").unwrap();
    let g = ch.parse("x/(1 + y) - z*w").unwrap();
    c.bench_function("multiply rational functions", |b| b.iter(|| black_box(&f) * black_box(&g)));
}

fn koszul(c: &mut Criterion) {
    let (k, beta) = cubic();
    c.bench_function("lie derivative along Z", |b| b.iter(|| lie(k.z(), black_box(&beta))));
    c.bench_function("binary Koszul bracket", |b| b.iter(|| koszul2(&k, &beta, &beta).unwrap()));
    c.bench_function("trinary Koszul bracket", |b| b.iter(|| koszul3(&k, &beta, &beta, &beta).unwrap()));
    c.bench_function("MC residual", |b| b.iter(|| mc_residual(&k, black_box(&beta)).unwrap()));
    c.bench_function("exterior derivative", |b| b.iter(|| d(black_box(&beta))));

    let mut s = Sampler::new(1);
    let tuples = relation_samples(&mut s, k.chart(), 5, 1);
    let mut g = c.benchmark_group("linf");
    g.sample_size(10);
    g.bench_function("relations up to arity 5", |b| b.iter(|| linf_relation_check(&k, &tuples)));
    g.finish();
}

fn fiber(c: &mut Criterion) {
    let mut s = Sampler::new(2);
    let inst = random_instance(&mut s, 8, 6);
    let beta = random_horizontal(&mut s, &inst.split);
    c.bench_function("fiber map n = 8", |b| b.iter(|| f_map(&beta, inst.split.z()).unwrap()));
    c.bench_function("rank and kernel n = 8", |b| b.iter(|| rank_kernel(black_box(&beta))));
}

fn models(c: &mut Criterion) {
    let m = twisted();
    let pts = default_points(&m);
    c.bench_function("main theorem check", |b| {
        b.iter_batched(
            || horizontal_sample(&mut Sampler::new(3), &m),
            |beta| {
                let at = m.admissible_points(&beta, &pts);
                m.verify_main_theorem(&beta, &at).unwrap()
            },
            BatchSize::SmallInput,
        )
    });

    let alg = FoliationAlgebra::new(&m).unwrap();
    let mut s = Sampler::new(4);
    let xs: Vec<_> = (0..3).map(|_| sample_vvf(&mut s, &alg, 1, 3)).collect();
    c.bench_function("foliation l3", |b| b.iter(|| alg.l3(&xs[0], &xs[1], &xs[2]).unwrap()));

    let t = torus();
    let ch = t.chart().clone();
    let bb = {
        let mut b = presym_bench::form(&ch, &[(&[0, 2], "cos(t3)")]);
        b = &b + &presym_bench::form(&ch, &[(&[1, 3], "cos(t4)")]);
        kuranishi(t.koszul(), &b).unwrap()
    };
    let (a, b1) = (Q::from_integer(0.into()), Q::from_integer(1.into()));
    c.bench_function("torus cycle integral", |b| {
        b.iter(|| cycle_integral_presym(&bb, &a, &b1, false).unwrap())
    });
}

criterion_group!(benches, coefficients, koszul, fiber, models);
criterion_main!(benches);
