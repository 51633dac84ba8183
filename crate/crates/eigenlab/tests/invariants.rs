//! Property-based invariants of the laws, statistics, and distances.

use eigenlab::limit_laws::LimitLaw;
use eigenlab::spectra::{alpha, linear_stat, partial_stat_unordered, Spectrum};
use eigenlab::stats::{ks_one_sample, ks_two_sample, standard_normal_cdf};
use eigenlab::test_functions::TestFunction;
use eigenlab::variance::divided_difference;
use proptest::prelude::*;

fn law_strategy() -> impl Strategy<Value = LimitLaw> {
    prop_oneof![Just(LimitLaw::Semicircle), Just(LimitLaw::MarchenkoPastur)]
}

proptest! {
    #[test]
    fn density_is_nonnegative_and_zero_off_support(law in law_strategy(), x in -6.0f64..8.0) {
        let d: f64 = law.density(x);
        prop_assert!(d >= 0.0);
        let (lo, hi) = law.support::<f64>();
        if x < lo || x > hi {
            prop_assert_eq!(d, 0.0);
        }
    }

    #[test]
    fn cdf_lands_in_unit_interval(law in law_strategy(), x in -6.0f64..8.0) {
        let c: f64 = law.cdf(x);
        prop_assert!((0.0..=1.0).contains(&c));
    }

    #[test]
    fn quantile_inverts_cdf_on_the_interior(law in law_strategy(), p in 1e-6f64..1.0) {
        prop_assume!(p < 1.0);
        let x: f64 = law.quantile(p).unwrap();
        prop_assert!((law.cdf(x) - p).abs() <= 1e-9);
    }

    #[test]
    fn divided_difference_is_symmetric(x in -2.0f64..2.0, y in -2.0f64..2.0) {
        for f in [TestFunction::Sin, TestFunction::Runge, TestFunction::Cube] {
            let a: f64 = divided_difference(&f, x, y);
            let b: f64 = divided_difference(&f, y, x);
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn ks_distances_live_in_unit_interval(
        xs in prop::collection::vec(-50.0f64..50.0, 1..60),
        ys in prop::collection::vec(-50.0f64..50.0, 1..60),
    ) {
        let one = ks_one_sample(&xs, standard_normal_cdf);
        let two = ks_two_sample(&xs, &ys);
        prop_assert!((0.0..=1.0).contains(&one));
        prop_assert!((0.0..=1.0).contains(&two));
        prop_assert_eq!(ks_two_sample(&xs, &xs), 0.0);
    }

    #[test]
    fn partial_statistic_k0_equals_linear(values in prop::collection::vec(-3.0f64..3.0, 2..24), seed in 0u64..1000) {
        let s = Spectrum::from_values(values);
        let f = TestFunction::Sin;
        let mut rng = eigenlab::rng::seeded(seed);
        let p = partial_stat_unordered(&s, &f, 0, &mut rng).unwrap();
        let l: f64 = linear_stat(&s, &f);
        prop_assert!((p.value - l).abs() <= 1e-12 * (1.0 + l.abs()));
    }

    #[test]
    fn alpha_is_symmetric_and_positive(n in 2usize..2000, k in 1usize..1999) {
        prop_assume!(k < n);
        let a: f64 = alpha(n, k);
        let b: f64 = alpha(n, n - k);
        prop_assert!(a > 0.0);
        prop_assert!((a - b).abs() <= 1e-15);
    }
}
