use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use locale_lab_core::interval::{lazy_cover, Enumerator, PresentedSublocale, RatOpen, Q};
use locale_lab_core::measure::interval::{default_tolerance, measure_bounds, strict_additivity_check, Descriptor};

fn opens(c: &mut Criterion) {
    let u: RatOpen = "(0,1/3)|(1/2,2/3)|(3/4,1]".parse().unwrap();
    let v: RatOpen = "[0,1/4)|(1/3,5/6)".parse().unwrap();
    c.bench_function("heyting implication", |b| b.iter(|| black_box(&u).heyting(black_box(&v))));
    c.bench_function("regularize", |b| b.iter(|| black_box(&u).regularize()));
    let cover = lazy_cover(Enumerator::SternBrocot, Q::new(1.into(), 1000.into()));
    c.bench_function("rational cover, stage 256", |b| b.iter(|| cover.stage(black_box(256))));
}

fn bounds(c: &mut Criterion) {
    let tol = default_tolerance();
    let leb = Descriptor::Lebesgue;
    for (name, x) in [
        ("rationals", PresentedSublocale::rationals()),
        ("irrationals", PresentedSublocale::irrationals()),
        ("generic", PresentedSublocale::Generic),
    ] {
        c.bench_function(&format!("lebesgue bounds, {name}"), |b| b.iter(|| measure_bounds(&leb, &x, &tol).unwrap()));
    }
    let (a, x) = (PresentedSublocale::rationals(), PresentedSublocale::irrationals());
    c.bench_function("strict additivity, rationals and irrationals", |b| {
        b.iter(|| strict_additivity_check(&leb, &a, &x, &tol).unwrap())
    });
}

criterion_group!(benches, opens, bounds);
criterion_main!(benches);
