use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistconj::intlinalg::snf;
use twistconj::samples;
use twistconj::{EndoPair, IntMatrix, PcpElement};

fn collection(c: &mut Criterion) {
    let (g, _, _) = samples::derived_length_three();
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe9c0001);
    // Deep words so collection has real rewriting to do; the finite
    // generator stays in range, the infinite ones get large exponents.
    let words: Vec<(PcpElement, PcpElement)> = (0..64)
        .map(|_| {
            let mut pick = || {
                g.elem(&[
                    (0, rng.gen_range(0..=1)),
                    (1, rng.gen_range(-25..=25)),
                    (2, rng.gen_range(-25..=25)),
                    (3, rng.gen_range(-25..=25)),
                ])
            };
            (pick(), pick())
        })
        .collect();
    let mut i = 0;
    c.bench_function("collect product, derived length three", |b| {
        b.iter(|| {
            let (x, y) = &words[i % words.len()];
            i += 1;
            black_box(g.multiply(x, y))
        })
    });
}

fn smith_form(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe9c0002);
    let mats: Vec<IntMatrix> = (0..32)
        .map(|_| {
            let rows: Vec<Vec<i64>> = (0..8)
                .map(|_| (0..8).map(|_| rng.gen_range(-100..=100)).collect())
                .collect();
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            IntMatrix::from_rows(&refs)
        })
        .collect();
    let mut i = 0;
    c.bench_function("smith normal form, 8x8 entries in [-100, 100]", |b| {
        b.iter(|| {
            let m = &mats[i % mats.len()];
            i += 1;
            black_box(snf(m))
        })
    });
}

fn class_enumeration(c: &mut Criterion) {
    let (_, phi, psi) = samples::derived_length_three();
    let pair = EndoPair::new(phi, psi).unwrap();
    c.bench_function("class representatives, derived length three", |b| {
        b.iter(|| black_box(twistconj::reps_reid_classes(&pair)))
    });
}

criterion_group!(benches, collection, smith_form, class_enumeration);
criterion_main!(benches);
