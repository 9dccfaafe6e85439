use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use heegner_core::dirichlet::{hurwitz_zeta_with_deriv, working_bits};
use heegner_core::repnum::{local_poly, rep_count_pp, CountOptions, Kernel, RepIndex};
use heegner_core::{builtin_lattice, EisensteinOptions, EisensteinSeries};
use rug::{Float, Rational};

fn repnum_kernels(c: &mut Criterion) {
    let group = builtin_lattice("siegel").unwrap().discriminant_group();
    let idx = RepIndex::new(group.element(&[1]).unwrap(), Rational::from((45, 4))).unwrap();
    let mut g = c.benchmark_group("rep_count_pp");
    for (name, kernel) in [("naive", Kernel::Naive), ("split", Kernel::Split)] {
        let opts = CountOptions { kernel, ..Default::default() };
        for nu in [2u32, 3] {
            g.bench_with_input(BenchmarkId::new(name, format!("3^{nu}")), &nu, |b, &nu| {
                b.iter(|| rep_count_pp(&group, black_box(&idx), 3, nu, opts).unwrap())
            });
        }
    }
    g.finish();

    let hilbert = builtin_lattice("hilbert:5").unwrap().discriminant_group();
    let idx = RepIndex::new(hilbert.element(&[2]).unwrap(), Rational::from((19, 5))).unwrap();
    c.bench_function("local_poly hilbert:5 p=19", |b| {
        b.iter(|| local_poly(&hilbert, black_box(&idx), 19, CountOptions::default()).unwrap())
    });
}

fn hurwitz(c: &mut Criterion) {
    let mut g = c.benchmark_group("hurwitz_zeta_with_deriv");
    for digits in [50u32, 100] {
        let bits = working_bits(digits);
        let s = Float::with_val(bits, -3);
        let x = Float::with_val(bits, 0.2);
        g.bench_with_input(BenchmarkId::from_parameter(digits), &digits, |b, _| {
            b.iter(|| hurwitz_zeta_with_deriv(black_box(&s), black_box(&x)).unwrap())
        });
    }
    g.finish();
}

fn green(c: &mut Criterion) {
    let opts = EisensteinOptions { assume_witt: true, ..Default::default() };
    let e = EisensteinSeries::new(&builtin_lattice("siegel").unwrap(), opts).unwrap();
    let h = e.heegner_index(&[1], Rational::from((-45, 4))).unwrap();
    c.bench_function("green_integral siegel D=45", |b| b.iter(|| e.green_integral(black_box(&h)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = repnum_kernels, hurwitz, green
}
criterion_main!(benches);
