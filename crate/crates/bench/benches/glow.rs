use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use glow_bench::{group, partition};
use glow_core::binary::exact_glow;
use glow_core::fourier::{i_fourier, i_fourier_direct};
use glow_core::moments::moment_exact;
use glow_core::{fourier_matrix, sylvester_hadamard};

fn fourier_counts(c: &mut Criterion) {
    let g = group("Z12");
    let pi = partition("1,2|3,4");
    c.bench_function("i_fourier Z12 {12}{34}", |b| {
        b.iter(|| i_fourier(black_box(&g), &pi).unwrap())
    });
    c.bench_function("i_fourier_direct Z12 {12}{34}", |b| {
        b.iter(|| i_fourier_direct(black_box(&g), &pi).unwrap())
    });
    let one = partition("1,2,3,4");
    c.bench_function("i_fourier Z16 {1234}", |b| {
        b.iter(|| i_fourier(black_box(&group("Z16")), &one).unwrap())
    });
}

fn binary_glow(c: &mut Criterion) {
    let h = sylvester_hadamard(3).unwrap();
    c.bench_function("exact_glow N=8", |b| {
        b.iter(|| exact_glow(black_box(&h)).unwrap())
    });
}

fn moments(c: &mut Criterion) {
    let f = fourier_matrix(&group("Z8")).unwrap();
    c.bench_function("moment_exact Z8 p=4", |b| {
        b.iter(|| moment_exact(black_box(&f), 4).unwrap())
    });
}

criterion_group!(benches, fourier_counts, binary_glow, moments);
criterion_main!(benches);
