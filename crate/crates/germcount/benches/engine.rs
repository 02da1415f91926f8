//! Engine benchmarks, parametrized by iteration mode.
//!
//! Group names embed `par::mode()`, so running
//!
//! ```text
//! cargo bench --bench engine
//! cargo bench --bench engine --no-default-features
//! ```
//!
//! produces side-by-side criterion reports for the rayon fan-out and the
//! sequential fallback. Both modes must produce identical values; the
//! benches assert the expected results once up front so a regression in
//! either mode fails loudly instead of timing garbage.

use criterion::{criterion_group, criterion_main, Criterion};
use germcount::afinite::{verdict, Afinity};
use germcount::counting::count_by_colength;
use germcount::germ::{parse_germ_file, GermSpec};
use germcount::par;
use germcount::partition::Partition;
use std::collections::BTreeMap;

fn fixture(name: &str) -> GermSpec {
    let path = format!("{}/fixtures/{}.json", env!("CARGO_MANIFEST_DIR"), name);
    let bytes = std::fs::read(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_germ_file(&bytes, &BTreeMap::new()).unwrap()
}

fn bench_colength(c: &mut Criterion) {
    let mixed = fixture("mixed_tails");
    let double = Partition::parse("2").unwrap();
    let triple = Partition::parse("1,1,1").unwrap();
    assert_eq!(count_by_colength(&mixed, &double, 12).unwrap().count, 6);
    assert_eq!(count_by_colength(&mixed, &triple, 12).unwrap().count, 8);

    let mut g = c.benchmark_group(format!("colength/{}", par::mode()));
    g.bench_function("mixed_tails double point", |b| {
        b.iter(|| count_by_colength(&mixed, &double, 12).unwrap().count)
    });
    g.sample_size(10);
    g.bench_function("mixed_tails triple point", |b| {
        b.iter(|| count_by_colength(&mixed, &triple, 12).unwrap().count)
    });
    g.finish();
}

fn bench_verdict(c: &mut Criterion) {
    let germ = fixture("family_m5");
    match verdict(&germ, 8).unwrap().afinite {
        Afinity::NotUpToBound(8) => {}
        other => panic!("unexpected verdict {other:?}"),
    }

    let mut g = c.benchmark_group(format!("verdict/{}", par::mode()));
    g.sample_size(10);
    g.bench_function("family_m5 jet 8", |b| b.iter(|| verdict(&germ, 8).unwrap()));
    g.finish();
}

criterion_group!(benches, bench_colength, bench_verdict);
criterion_main!(benches);
