//! Parallel against sequential sweeps. Every iteration starts from an empty
//! KL cache.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};

use pcanon_core::alcoves::Alcove;
use pcanon_core::hecke::{Hecke, PCanonicalTable};
use pcanon_core::par;
use pcanon_core::periodic::Periodic;
use pcanon_core::verify::{Params, Suite, Verifier};
use pcanon_core::weyl::Weyl;

const MODES: [(&str, bool); 2] = [("parallel", false), ("sequential", true)];

fn fresh(t: &str) -> Arc<Hecke> {
    Arc::new(Hecke::new(Arc::new(Weyl::from_type(t).unwrap())))
}

fn kl_columns(c: &mut Criterion) {
    let mut group = c.benchmark_group("kl_columns");
    group.sample_size(10);
    for (t, len) in [("A2", 9), ("C2", 9), ("G2", 8)] {
        let elems = fresh(t).weyl().enumerate_w(len);
        for (mode, seq) in MODES {
            par::set_sequential(seq);
            group.bench_with_input(BenchmarkId::new(mode, format!("{t}/{len}")), &elems, |b, elems| {
                b.iter_batched(
                    || fresh(t),
                    |h| par::map(elems, |w| h.kl_arc(w).unwrap()),
                    BatchSize::PerIteration,
                )
            });
        }
    }
    par::set_sequential(false);
    group.finish();
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for (t, suite) in [("A2", Suite::Main), ("C2", Suite::Periodic), ("C2", Suite::All)] {
        for (mode, seq) in MODES {
            par::set_sequential(seq);
            group.bench_function(BenchmarkId::new(mode, format!("{t}/{}", suite.name())), |b| {
                b.iter_batched(
                    || {
                        let h = fresh(t);
                        let params = Params::defaults_for(h.weyl());
                        (Verifier::new(h.clone(), PCanonicalTable::builtin(h)), params)
                    },
                    |(v, params)| v.run(suite, &params, "bench").unwrap(),
                    BatchSize::PerIteration,
                )
            });
        }
    }
    par::set_sequential(false);
    group.finish();
}

fn positivity(c: &mut Criterion) {
    let mut group = c.benchmark_group("positivity");
    group.sample_size(10);
    for (mode, seq) in MODES {
        par::set_sequential(seq);
        group.bench_function(BenchmarkId::new(mode, "C2/7"), |b| {
            b.iter_batched(
                || {
                    let h = fresh("C2");
                    let g = h.weyl();
                    let window: Vec<Alcove> = g.enumerate_w(7).iter().map(|x| g.alcove(x).unwrap()).collect();
                    (Periodic::from_hecke(h.clone()), PCanonicalTable::builtin(h), window)
                },
                |(per, table, window)| per.positivity_check(&table, &window).unwrap(),
                BatchSize::PerIteration,
            )
        });
    }
    par::set_sequential(false);
    group.finish();
}

criterion_group!(benches, kl_columns, suites, positivity);
criterion_main!(benches);
