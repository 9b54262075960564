use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use locale_lab_core::corpus::Corpus;
use locale_lab_core::frame::{all_topologies, boolean, chain};
use locale_lab_core::laws::{self, LawConfig, Suite};
use locale_lab_core::morphism::{enumerate_morphisms, preimage};
use locale_lab_core::sublocale::{enumerate_sublocales, generic};

fn frames(c: &mut Criterion) {
    c.bench_function("all topologies on 3 points", |b| b.iter(|| all_topologies(black_box(3))));
    let f = Arc::new(boolean(3));
    c.bench_function("points of 2^3", |b| b.iter(|| f.points()));
    c.bench_function("regularity of chain-6", |b| {
        let g = chain(6);
        b.iter(|| g.is_regular())
    });
}

fn sublocales(c: &mut Criterion) {
    let f = Arc::new(boolean(3));
    c.bench_function("enumerate sublocales of 2^3", |b| b.iter(|| enumerate_sublocales(&f, 10).unwrap()));
    let ch = Arc::new(chain(6));
    let all = enumerate_sublocales(&ch, 10).unwrap();
    c.bench_function("pairwise intersections on chain-6", |b| {
        b.iter(|| {
            for x in &all {
                for y in &all {
                    black_box(x.intersect(y).unwrap());
                }
            }
        })
    });
    c.bench_function("generic sublocale of chain-6", |b| b.iter(|| generic(&ch)));
}

fn morphisms(c: &mut Criterion) {
    let (s, t) = (Arc::new(boolean(3)), Arc::new(chain(4)));
    c.bench_function("enumerate maps 2^3 to chain-4", |b| b.iter(|| enumerate_morphisms(&t, &s)));
    let maps = enumerate_morphisms(&t, &s);
    let ys = enumerate_sublocales(&t, 10).unwrap();
    c.bench_function("inverse images along maps chain-4 to 2^3", |b| {
        b.iter(|| {
            for f in &maps {
                for y in &ys {
                    black_box(preimage(f, y).unwrap());
                }
            }
        })
    });
}

fn suites(c: &mut Criterion) {
    let corpus = Corpus::standard();
    let config = LawConfig::default();
    let mut g = c.benchmark_group("law suites");
    g.sample_size(10);
    for suite in [Suite::Frame, Suite::Sublocale, Suite::Measure] {
        g.bench_function(suite.to_string(), |b| b.iter(|| laws::run(suite, &corpus, &config)));
    }
    g.finish();
}

criterion_group!(benches, frames, sublocales, morphisms, suites);
criterion_main!(benches);
