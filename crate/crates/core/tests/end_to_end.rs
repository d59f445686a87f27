use proptest::prelude::*;

use co_geom::cost::CostParams;
use co_geom::datagen::{generate, InstanceKind, InstanceSpec};
use co_geom::geom::Point;
use co_geom::harness::{run_algorithm, Algorithm, RunSpec};
use co_geom::hull::{convex_hull, HullConfig};
use co_geom::maxima::{maxima_det, maxima_rand, MaximaConfig, SeedPolicy};
use co_geom::oracle::{brute_force_maxima, oracle_hull, oracle_maxima};

fn params() -> CostParams {
    CostParams::new(1 << 10, 1 << 4).unwrap()
}

fn points(max_len: usize, range: i64) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((-range..=range, -range..=range).prop_map(|(x, y)| Point::new(x, y)), 1..max_len)
}

fn policy() -> impl Strategy<Value = SeedPolicy> {
    prop_oneof![
        (1u64..6).prop_map(SeedPolicy::ConstantSeed),
        (0u32..3).prop_map(SeedPolicy::LambdaOfN),
        (0u32..3).prop_map(SeedPolicy::LambdaOfM),
        Just(SeedPolicy::Randomized),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn maxima_matches_brute_force(pts in points(300, 30), pol in policy(), seed in 0u64..100) {
        let cfg = MaximaConfig { policy: pol, rng_seed: seed };
        let got = maxima_det(&pts, &cfg, params()).unwrap();
        prop_assert_eq!(&got.maxima, &brute_force_maxima(&pts));
        prop_assert_eq!(maxima_rand(&pts, seed, params()).unwrap().maxima, got.maxima);
    }

    #[test]
    fn hull_matches_monotone_chain(pts in points(300, 20), pol in policy(), seed in 0u64..100) {
        let cfg = HullConfig { policy: pol, rng_seed: seed };
        prop_assert_eq!(convex_hull(&pts, &cfg, params()).unwrap().vertices, oracle_hull(&pts));
    }

    #[test]
    fn generated_instances_hit_their_output_size(n in 3usize..2000, frac in 0.0f64..1.0, seed: u64, degenerate: bool) {
        let h = ((n as f64 * frac) as usize).max(3);
        for kind in [InstanceKind::Maxima, InstanceKind::Hull] {
            let spec = InstanceSpec { degenerate, ..InstanceSpec::new(kind, n, h, seed) };
            let pts = generate(&spec).unwrap();
            prop_assert_eq!(pts.len(), n);
            let got = match kind {
                InstanceKind::Maxima => oracle_maxima(&pts).len(),
                InstanceKind::Hull => oracle_hull(&pts).len(),
            };
            prop_assert_eq!(got, h);
        }
    }
}

#[test]
fn io_grows_with_output_size() {
    // larger outputs cost more distribution levels once the input is out of cache
    let p = CostParams::new(1 << 12, 1 << 6).unwrap();
    let io = |h: usize| {
        let pts = generate(&InstanceSpec::new(InstanceKind::Maxima, 1 << 15, h, 3)).unwrap();
        let spec = RunSpec { algorithm: Algorithm::Maxima, policy: SeedPolicy::ConstantSeed(2), params: p, rng_seed: 0, verify: true };
        run_algorithm(&pts, &spec).unwrap().0.io_count
    };
    let (small, large) = (io(2), io(4096));
    assert!(small < large, "{small} vs {large}");
    // and a single scan is a floor
    assert!(small >= 2 * (1 << 15) / 64);
}

#[test]
fn same_instance_same_counts() {
    let pts = generate(&InstanceSpec::new(InstanceKind::Hull, 5000, 70, 11)).unwrap();
    let cfg = HullConfig { policy: SeedPolicy::Randomized, rng_seed: 4 };
    let a = convex_hull(&pts, &cfg, params()).unwrap();
    let b = convex_hull(&pts, &cfg, params()).unwrap();
    assert_eq!(a, b);
}
