use pegf_core::egf::{affine_pegf, pegf};
use pegf_core::{DistributionSpec, QuadratureConfig, SOrder};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = DistributionSpec> {
    prop_oneof![
        (-2.0..2.0f64, 0.5..4.0f64).prop_map(|(a, w)| DistributionSpec::uniform(a, a + w).unwrap()),
        (0.7..5.0f64).prop_map(|c| DistributionSpec::power(c).unwrap()),
        (0.3..3.0f64).prop_map(|mu| DistributionSpec::exponential(mu).unwrap()),
        (0.05..0.6f64, 0.0..1.0f64, 0.5..3.0f64)
            .prop_map(|(c, d, b)| DistributionSpec::generalized_power(c, d, b).unwrap()),
        (0.3..3.0f64, -2.0..2.0f64).prop_map(|(a, b)| DistributionSpec::left_exponential(a, b).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cdf_derivative_is_pdf(spec in family(), q in 0.05..0.95f64) {
        let x = spec.quantile(q).unwrap();
        let h = 1e-6 * x.abs().max(1.0);
        let slope = (spec.cdf(x + h) - spec.cdf(x - h)) / (2.0 * h);
        let f = spec.pdf(x);
        prop_assert!((slope - f).abs() <= 1e-6 * f.max(1.0), "{} x={}: {} vs {}", spec, x, slope, f);
    }

    #[test]
    fn reversed_hazard_times_cdf_is_pdf(spec in family(), q in 0.05..0.95f64) {
        let x = spec.quantile(q).unwrap();
        let lam = spec.reversed_hazard(x).unwrap();
        prop_assert!((lam * spec.cdf(x) - spec.pdf(x)).abs() <= 1e-12 * spec.pdf(x).max(1.0));
    }

    #[test]
    fn quantile_inverts_cdf(spec in family(), q in 0.001..0.999f64) {
        let x = spec.quantile(q).unwrap();
        prop_assert!((spec.cdf(x) - q).abs() <= 1e-12);
    }

    #[test]
    fn mean_inactivity_matches_its_integral(spec in family(), q in 0.1..0.95f64) {
        let t = spec.quantile(q).unwrap();
        let (low, _) = spec.support();
        let area = pegf_core::quadrature::integrate(|x| spec.cdf(x), low, t, &QuadratureConfig::default())
            .unwrap()
            .value;
        let m = spec.mean_inactivity(t).unwrap();
        prop_assert!((m - area / spec.cdf(t)).abs() <= 1e-7 * m.max(1.0), "{} t={}", spec, t);
    }

    #[test]
    fn order_one_normalises(spec in family(), q in 0.05..1.0f64) {
        let t = if q >= 1.0 { spec.support().1 } else { spec.quantile(q).unwrap() };
        prop_assume!(t.is_finite());
        let v = pegf(&spec, SOrder::new(1.0).unwrap(), t, &QuadratureConfig::default()).unwrap();
        prop_assert!((v - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn quadrature_tracks_closed_form(spec in family(), q in 0.05..0.99f64, s in 1.0..3.0f64) {
        let t = spec.quantile(q).unwrap();
        match spec.closed_form_pegf(s, t) {
            Ok(exact) => {
                let v = pegf(&spec, SOrder::new(s).unwrap(), t, &QuadratureConfig::default()).unwrap();
                prop_assert!((v - exact).abs() <= 1e-8f64.max(1e-6 * exact), "{} s={} t={}", spec, s, t);
            }
            Err(e) => {
                let not_integrable = matches!(e, pegf_core::PegfError::NotIntegrable { .. });
                prop_assert!(not_integrable, "{}", e);
            }
        }
    }

    #[test]
    fn affine_shift_and_scale(a in 0.2..5.0f64, b in 0.0..3.0f64, u in 0.02..1.0f64, s in 1.0..4.0f64) {
        let base = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let moved = DistributionSpec::uniform(b, a + b).unwrap();
        let t = a * u + b;
        let lhs = affine_pegf(&base, a, b, SOrder::new(s).unwrap(), t, &QuadratureConfig::default()).unwrap();
        let rhs = moved.closed_form_pegf(s, t).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.max(1.0));
    }

    #[test]
    fn sampling_is_seeded_and_in_support(spec in family(), seed in any::<u64>()) {
        let a = spec.sample(64, seed).unwrap();
        let b = spec.sample(64, seed).unwrap();
        prop_assert_eq!(a.values(), b.values());
        let (low, high) = spec.support();
        prop_assert!(a.values().iter().all(|&x| x > low && x <= high));
    }
}
