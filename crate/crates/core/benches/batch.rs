use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use solvpinch::almost_abelian::Family;
use solvpinch::batch::{self, Execution};
use solvpinch::flow::FlowConfig;
use solvpinch::linalg::{self, Mat};
use solvpinch::{table1, AAData};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn family_sweep(c: &mut Criterion) {
    let ts: Vec<f64> = (1..=2000).map(|k| k as f64 / 2000.0).collect();
    let mut g = c.benchmark_group("family_sweep_e_t_2000");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| batch::map(&ts, exec, |&t| Family::E.member(t, Some(12)).unwrap().0.f_aa().unwrap()))
        });
    }
    g.finish();
}

fn conjugate_sampling(c: &mut Criterion) {
    let a = Mat::from_diagonal(&linalg::Vector::from_vec(vec![1.0, 2.0, -0.5, 0.3]));
    let mut g = c.benchmark_group("conjugates_4x4_2000");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                batch::map_seeded(2000, 1, exec, |_, rng| {
                    let h = linalg::random_conjugator(4, 100.0, rng);
                    let conj = &h * &a * h.try_inverse().unwrap();
                    AAData::new(conj).unwrap().grad_f().unwrap().norm()
                })
            })
        });
    }
    g.finish();
}

fn table1_rows(c: &mut Criterion) {
    let cfg = FlowConfig::nilsoliton();
    let mut g = c.benchmark_group("table1");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| table1::reproduce(black_box(&cfg), None, exec))
        });
    }
    g.finish();
}

criterion_group!(benches, family_sweep, conjugate_sampling, table1_rows);
criterion_main!(benches);
