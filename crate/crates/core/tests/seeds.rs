//! The noisy-data orderings should not hinge on one lucky seed.

use stringforce::bem::DirectMethod;
use stringforce::benchmark;
use stringforce::inverse::{default_lambda_grid, error_norm, lcurve, RegularizationConfig, RegularizationOrder};
use stringforce::model::Grid;
use stringforce::noise::NoiseSpec;
use stringforce::pipeline::{force_grid, Inversion};

const SEEDS: [u64; 10] = [1, 2, 3, 5, 8, 13, 21, 34, 55, 89];

#[test]
fn regularisation_helps_for_every_seed() {
    let b = benchmark::sine();
    let grid = Grid::new(&b.spec, 80, 80).unwrap();
    let xs = force_grid(1.0);
    let exact = b.exact_force.as_ref().unwrap().sample(&xs);
    for seed in SEEDS {
        let inv = Inversion::prepare(
            &b.spec,
            b.control,
            &grid,
            20,
            Some(NoiseSpec::new(1.0, seed)),
            DirectMethod::Marching,
        )
        .unwrap();
        let err = |l: f64| {
            let s = inv.solve(RegularizationConfig::zeroth(l)).unwrap();
            error_norm(&inv.force(&s.b, &xs), &exact).unwrap()
        };
        let (e0, e1, e10) = (err(0.0), err(0.1), err(10.0));
        assert!(e1 < e0 && e1 < e10, "seed {seed}: {e0} {e1} {e10}");
    }
}

#[test]
fn corner_bracket_for_every_seed() {
    for (b, lo, hi) in [(benchmark::sine(), 1e-2, 1.0), (benchmark::cosine(), 1e-4, 1e-1)] {
        let grid = Grid::new(&b.spec, 80, 80).unwrap();
        for seed in SEEDS {
            let inv = Inversion::prepare(
                &b.spec,
                b.control,
                &grid,
                20,
                Some(NoiseSpec::new(1.0, seed)),
                DirectMethod::Marching,
            )
            .unwrap();
            let lc = lcurve(
                &inv.design,
                &inv.data,
                &default_lambda_grid(),
                RegularizationOrder::Zeroth,
            )
            .unwrap();
            let corner = lc.corner_lambda();
            assert!((lo..=hi).contains(&corner), "{} seed {seed}: {corner}", b.name);
        }
    }
}
