use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use fbr_core::fiber::FiniteAbelianGroup;
use fbr_core::group::{catalog::parse_group_spec, FiniteGroup, ResourceCaps, SubgroupLattice};
use fbr_core::ring::FiberedRing;
use fbr_core::species::Species;
use fbr_core::spectrum::PrimeDescriptor;
use fbr_core::cyclo::find_prime_ideal;
use fbr_core::Exec;

const INSTANCES: [(&str, u64); 3] = [("S4", 6), ("A5", 6), ("S5", 2)];
const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn setup(spec: &str) -> (FiniteGroup, SubgroupLattice) {
    let g = parse_group_spec(spec, 10_000).unwrap();
    let l = SubgroupLattice::build(&g).unwrap();
    (g, l)
}

fn fresh_ring(g: &FiniteGroup, l: &SubgroupLattice, a: u64, exec: Exec) -> FiberedRing {
    let l = SubgroupLattice::from_data(g, l.to_data()).unwrap();
    FiberedRing::from_parts(g.clone(), l, FiniteAbelianGroup::cyclic(a), ResourceCaps::default(), exec).unwrap()
}

fn structure_constants(c: &mut Criterion) {
    let mut group = c.benchmark_group("structure_constants");
    group.sample_size(10);
    for (spec, a) in INSTANCES {
        let (g, l) = setup(spec);
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, format!("{spec}/{a}")), &exec, |b, &exec| {
                b.iter_batched(
                    || fresh_ring(&g, &l, a, exec),
                    |r| r.precompute_constants(),
                    BatchSize::LargeInput,
                )
            });
        }
    }
    group.finish();
}

fn species_and_idempotents(c: &mut Criterion) {
    let mut group = c.benchmark_group("species_idempotents");
    group.sample_size(10);
    for (spec, a) in INSTANCES {
        let (g, l) = setup(spec);
        for (name, exec) in STRATEGIES {
            let r = fresh_ring(&g, &l, a, exec);
            r.precompute_constants();
            group.bench_with_input(BenchmarkId::new(name, format!("{spec}/{a}")), &r, |b, r| {
                b.iter(|| {
                    let s = Species::new(r).unwrap();
                    s.precompute_idempotents();
                })
            });
        }
    }
    group.finish();
}

fn spectrum_and_blocks(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum_blocks");
    group.sample_size(10);
    for (spec, a) in INSTANCES {
        let (g, l) = setup(spec);
        for (name, exec) in STRATEGIES {
            let r = fresh_ring(&g, &l, a, exec);
            r.precompute_constants();
            let s = Species::new(&r).unwrap();
            s.precompute_idempotents();
            let prime = PrimeDescriptor::CharP {
                p: 2,
                ideal: find_prime_ideal(2, r.level()).unwrap(),
            };
            group.bench_with_input(BenchmarkId::new(name, format!("{spec}/{a}")), &s, |b, s| {
                b.iter(|| {
                    s.p_equivalence_partition(&prime).unwrap();
                    s.block_decomposition().unwrap();
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, structure_constants, species_and_idempotents, spectrum_and_blocks);
criterion_main!(benches);
