use std::f64::consts::PI;

use hcb_core::fourpoint::{
    noise_map, CacheMode, FourPointEngine, OperatorTuple, Propagators, CONJUGATION_TOL,
};
use hcb_core::spectral::SpectralData;
use hcb_core::twopoint::{two_point_matrix, CorrelationSet};
use hcb_core::{Boundary, LatticeScenario, Normalization, Potential};
use proptest::prelude::*;

fn potential() -> impl Strategy<Value = Potential> {
    prop_oneof![
        Just(Potential::Flat),
        (0.0f64..0.5).prop_map(|omega| Potential::Harmonic { omega }),
        (0.0f64..2.5, 0.0f64..(2.0 * PI)).prop_map(|(lambda, phi)| Potential::Quasiperiodic {
            lambda,
            gamma_num: 8,
            gamma_den: 13,
            phi,
        }),
    ]
}

fn scenario() -> impl Strategy<Value = LatticeScenario> {
    (
        3usize..14,
        prop_oneof![Just(Boundary::Open), Just(Boundary::Periodic)],
        potential(),
    )
        .prop_flat_map(|(l, bc, pot)| {
            (1..=l).prop_map(move |n| LatticeScenario::new(l, n, bc, pot))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sum_rules_and_symmetries(s in scenario()) {
        let Ok(sd) = SpectralData::from_scenario(&s) else { return Ok(()) };
        let corr = CorrelationSet::compute(&sd, Normalization::PerSite).unwrap();
        let l = s.sites;
        let total: f64 = corr.nq.iter().sum();
        prop_assert!((total - s.particles as f64).abs() <= 1e-10);
        let map = noise_map(&s, &sd, &corr, CacheMode::Auto).unwrap();
        for (q2, c) in map.column_sums().iter().enumerate() {
            prop_assert!(c.norm() <= 1e-8 * l as f64, "q2={} sum={}", q2, c);
        }
        prop_assert!(map.conjugation_residue() <= CONJUGATION_TOL);
    }

    #[test]
    fn cache_modes_agree_bitwise(s in scenario()) {
        let Ok(sd) = SpectralData::from_scenario(&s) else { return Ok(()) };
        let corr = CorrelationSet::compute(&sd, Normalization::PerSite).unwrap();
        let a = noise_map(&s, &sd, &corr, CacheMode::Materialized).unwrap();
        let b = noise_map(&s, &sd, &corr, CacheMode::Streaming).unwrap();
        prop_assert_eq!(a.delta, b.delta);
    }

    #[test]
    fn hermitian_pairs_are_equal(s in scenario(), idx in proptest::array::uniform4(0usize..64)) {
        let Ok(sd) = SpectralData::from_scenario(&s) else { return Ok(()) };
        let b = two_point_matrix(&sd.big_g);
        let engine = FourPointEngine::new(Propagators::new(&sd.g, &sd.big_g, &b));
        let l = s.sites;
        let [n, m, k, j] = idx.map(|x| x % l);
        let t = OperatorTuple::density_pair(n, m, k, j);
        let a = engine.evaluate(&t);
        let adj = engine.evaluate(&t.adjoint());
        prop_assert!((a - adj).abs() <= 1e-12);
        prop_assert_eq!(engine.density_pair(n, m, k, j), engine.density_pair(j, k, m, n));
    }

    #[test]
    fn raw_is_per_site_times_l_squared(s in scenario()) {
        let Ok(sd) = SpectralData::from_scenario(&s) else { return Ok(()) };
        let raw_s = s.clone().with_normalization(Normalization::Raw);
        let per = CorrelationSet::compute(&sd, Normalization::PerSite).unwrap();
        let raw = CorrelationSet::compute(&sd, Normalization::Raw).unwrap();
        let l = s.sites as f64;
        for (a, b) in per.nq.iter().zip(&raw.nq) {
            prop_assert!((a * l - b).abs() <= 1e-9 * l);
        }
        let dp = noise_map(&s, &sd, &per, CacheMode::Auto).unwrap();
        let dr = noise_map(&raw_s, &sd, &raw, CacheMode::Auto).unwrap();
        for (a, b) in dp.delta.iter().zip(&dr.delta) {
            prop_assert!((a * l * l - b).norm() <= 1e-8 * l * l);
        }
    }
}
