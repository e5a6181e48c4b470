use criterion::{criterion_group, criterion_main, Criterion};

use telesum_core::corpus::builtin_record;
use telesum_core::numeric::verify::{verify_identity, verify_identity_sequential, VerifyOptions};

fn bench_verify(c: &mut Criterion) {
    let opts = VerifyOptions { digits: 40, tol: 1e-25, samples: 8, ..Default::default() };
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for name in ["gauss", "nonterminating-saalschutz"] {
        let id = builtin_record(name).unwrap().identity.to_statement().unwrap();
        group.bench_function(format!("{name}/parallel"), |b| b.iter(|| verify_identity(&id, &opts)));
        group.bench_function(format!("{name}/sequential"), |b| b.iter(|| verify_identity_sequential(&id, &opts)));
    }
    group.finish();
}

criterion_group!(benches, bench_verify);
criterion_main!(benches);
