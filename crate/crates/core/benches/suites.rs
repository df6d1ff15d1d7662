use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use residue_core::homology::CubicalStructure;
use residue_core::laurent::DifferentialForm;
use residue_core::parallel::{par_map_indexed, seq_map_indexed};
use residue_core::residue::residue_form;
use residue_core::verify::{case_rng, random_laurent, run_suite, run_suite_sequential, Suite};

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for suite in [Suite::Axioms, Suite::Compare, Suite::Global] {
        group.bench_with_input(BenchmarkId::new("parallel", suite), &suite, |b, &s| {
            b.iter(|| run_suite(black_box(s), 8, 1))
        });
        group.bench_with_input(BenchmarkId::new("sequential", suite), &suite, |b, &s| {
            b.iter(|| run_suite_sequential(black_box(s), 8, 1))
        });
    }
    group.finish();
}

fn residues(c: &mut Criterion) {
    let forms: Vec<DifferentialForm> = (0..64)
        .map(|i| {
            let mut rng = case_rng(3, i);
            let f0 = random_laurent(&mut rng, 2, 3, -3, 3);
            let args = (0..2).map(|_| random_laurent(&mut rng, 2, 2, -3, 3)).collect();
            DifferentialForm::new(f0, args).expect("two-variable form")
        })
        .collect();
    let cs = CubicalStructure::new(2);
    let one = |i: usize| residue_form(&forms[i], &cs).expect("residue");
    let mut group = c.benchmark_group("residue_form_n2_x64");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| par_map_indexed(forms.len(), one)));
    group.bench_function("sequential", |b| b.iter(|| seq_map_indexed(forms.len(), one)));
    group.finish();
}

criterion_group!(benches, suites, residues);
criterion_main!(benches);
