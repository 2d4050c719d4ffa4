use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sonharm::characters::{character_with, CharPath};
use sonharm::radial::GridOperator;
use sonharm::spectral::{solve_poisson, CharacterTable};
use sonharm::{ambient, enumerate_dominant, GroupDim, QuadratureGrid, TorusAngles};

fn bench_character(c: &mut Criterion) {
    let mut group_bench = c.benchmark_group("character");
    for n in [4usize, 6, 7] {
        let g = GroupDim::new(n).unwrap();
        let lines = enumerate_dominant(g, 20.0).unwrap();
        let line = lines.last().unwrap().clone();
        let theta: Vec<f64> = (0..g.p()).map(|j| 0.4 + 0.7 * j as f64).collect();
        let a = TorusAngles::new(g, theta).unwrap();
        group_bench.bench_with_input(BenchmarkId::new("plain", n), &n, |b, _| {
            b.iter(|| character_with(black_box(&line), black_box(&a), CharPath::Plain).unwrap())
        });
        group_bench.bench_with_input(BenchmarkId::new("confluent", n), &n, |b, _| {
            b.iter(|| {
                character_with(black_box(&line), black_box(&a), CharPath::Confluent).unwrap()
            })
        });
    }
    group_bench.finish();
}

fn bench_quadrature(c: &mut Criterion) {
    let g = GroupDim::new(5).unwrap();
    let grid = QuadratureGrid::new(g, 64).unwrap();
    let f = grid.sample(|t| (t[0].cos() + t[1].cos()).exp());
    c.bench_function("integrate n=5 N=64", |b| {
        b.iter(|| sonharm::integrate_class(black_box(&f)))
    });
    c.bench_function("grid operator build n=5 N=64", |b| {
        b.iter(|| GridOperator::new(black_box(&f), true).unwrap())
    });
}

fn bench_solver(c: &mut Criterion) {
    let g = GroupDim::new(4).unwrap();
    let grid = QuadratureGrid::new(g, 64).unwrap();
    let table = CharacterTable::new(&grid, 20.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let coeffs: Vec<f64> = table
        .lines()
        .iter()
        .map(|l| {
            if l.kappa_quarters() == 0 {
                0.0
            } else {
                rng.gen_range(-1.0..1.0)
            }
        })
        .collect();
    let eta = sonharm::SpectralExpansion::new(g, 20.0, table.lines().to_vec(), coeffs)
        .unwrap()
        .reconstruct_on(&table)
        .unwrap();
    c.bench_function("poisson solve n=4 N=64 κ≤20", |b| {
        b.iter(|| solve_poisson(black_box(&eta), 20.0).unwrap())
    });
}

fn bench_ambient(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = ambient::haar_sample(&mut rng, 4);
    let f = |m: &nalgebra::DMatrix<f64>| m.trace() * m[(0, 1)];
    c.bench_function("group laplacian n=4", |b| {
        b.iter(|| ambient::group_laplacian(black_box(&f), a.matrix()))
    });
    c.bench_function("haar sample n=6", |b| {
        b.iter(|| ambient::haar_sample(&mut rng, 6))
    });
}

criterion_group!(benches, bench_character, bench_quadrature, bench_solver, bench_ambient);
criterion_main!(benches);
