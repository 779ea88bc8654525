use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use humbert_bench::sample_forms;
use humbert_core::automorphs::automorphism_group;
use humbert_core::classify::refined_humbert_status;
use humbert_core::reduction::{reduce_ternary, reduced_forms_up_to_c};
use humbert_core::representations::vectors_in_range;
use humbert_core::subcovers::class_number;

fn kernels(c: &mut Criterion) {
    let forms = sample_forms();
    c.bench_function("reduce_ternary", |b| {
        b.iter(|| forms.iter().map(|q| reduce_ternary(black_box(q)).unwrap().reduced_form).count())
    });
    let reduced: Vec<_> = forms.iter().map(|q| reduce_ternary(q).unwrap().reduced_form).collect();
    c.bench_function("automorphism_group", |b| {
        b.iter(|| reduced.iter().map(|q| automorphism_group(black_box(q)).unwrap().proper_count).sum::<usize>())
    });
    c.bench_function("vectors_in_range", |b| {
        b.iter(|| reduced.iter().map(|q| vectors_in_range(black_box(q), 1, 64).unwrap().len()).sum::<usize>())
    });
    c.bench_function("refined_humbert_status", |b| {
        b.iter(|| reduced.iter().filter(|q| refined_humbert_status(black_box(q), None).unwrap().jacobian).count())
    });
    c.bench_function("reduced_forms_up_to_c_12", |b| b.iter(|| reduced_forms_up_to_c(black_box(12)).len()));
    c.bench_function("class_number_to_2000", |b| {
        b.iter(|| (3..2000).filter(|d| d % 4 == 0 || d % 4 == 3).map(|d| class_number(-d).unwrap()).sum::<i64>())
    });
}

criterion_group!(benches, kernels);
criterion_main!(benches);
