mod common;

use common::{catalog, close, linspace};
use pegf_core::egf::{
    affine_pegf, past_entropy, past_entropy_via_rhr, pegf, pegf_s_derivative_at_one, rhr_identity_residual,
};
use pegf_core::quadrature::integrate;
use pegf_core::{DistributionSpec, QuadratureConfig, SOrder};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn order(s: f64) -> SOrder {
    SOrder::new(s).unwrap()
}

/// `∫ (f/F(t))^s` for any real `s`, bypassing the library's order check.
fn raw_pegf(spec: &DistributionSpec, s: f64, t: f64) -> f64 {
    let ft = spec.cdf(t);
    let (low, _) = spec.support();
    let q = QuadratureConfig::new(1e-13, 1e-12, 4000, 1e-12).unwrap();
    integrate(
        |x| {
            let p = spec.pdf(x) / ft;
            if p > 0.0 {
                p.powf(s)
            } else {
                0.0
            }
        },
        low,
        t,
        &q,
    )
    .unwrap()
    .value
}

#[test]
fn quadrature_matches_closed_form() {
    for (spec, lo, hi) in catalog() {
        for s in [1.5, 2.0, 3.0] {
            for t in linspace(lo, hi, 10) {
                let exact = spec.closed_form_pegf(s, t).unwrap();
                let quad = pegf(&spec, order(s), t, &cfg()).unwrap();
                assert!(close(quad, exact, 1e-8, 1e-6), "{spec} s={s} t={t}: {quad} vs {exact}");
            }
        }
    }
}

#[test]
fn order_one_is_normalised() {
    for (spec, lo, hi) in catalog() {
        for t in linspace(lo, hi, 10) {
            let v = pegf(&spec, order(1.0), t, &cfg()).unwrap();
            assert!((v - 1.0).abs() <= 1e-9, "{spec} t={t}: {v}");
        }
    }
}

#[test]
fn derivative_in_s_is_negative_past_entropy() {
    let h = 1e-4;
    for (spec, lo, hi) in catalog() {
        for t in linspace(lo, hi, 5) {
            let central = (raw_pegf(&spec, 1.0 + h, t) - raw_pegf(&spec, 1.0 - h, t)) / (2.0 * h);
            let analytic = pegf_s_derivative_at_one(&spec, t, &cfg()).unwrap();
            let h_bar = past_entropy(&spec, t, &cfg()).unwrap();
            assert!((analytic + h_bar).abs() <= 1e-12, "{spec} t={t}");
            assert!((central + h_bar).abs() <= 1e-4, "{spec} t={t}: {central} vs {h_bar}");
        }
    }
    let u = DistributionSpec::uniform(0.0, 2.0).unwrap();
    assert!((past_entropy(&u, 2.0, &cfg()).unwrap() - std::f64::consts::LN_2).abs() <= 1e-4);
    assert!((pegf_s_derivative_at_one(&u, 2.0, &cfg()).unwrap() + std::f64::consts::LN_2).abs() <= 1e-4);
}

#[test]
fn entropy_routes_agree() {
    for (spec, lo, hi) in catalog() {
        for t in linspace(lo, hi, 5) {
            let direct = past_entropy(&spec, t, &cfg()).unwrap();
            let rhr = past_entropy_via_rhr(&spec, t, &cfg()).unwrap();
            assert!((direct - rhr).abs() <= 1e-7, "{spec} t={t}: {direct} vs {rhr}");
        }
    }
    let e = DistributionSpec::exponential(1.0).unwrap();
    let d = pegf_s_derivative_at_one(&e, 1.0, &cfg()).unwrap();
    assert!((d + past_entropy(&e, 1.0, &cfg()).unwrap()).abs() < 1e-12);
    let left = DistributionSpec::left_exponential(1.0, 0.0).unwrap();
    assert!((past_entropy_via_rhr(&left, -1.0, &cfg()).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn reversed_hazard_identity() {
    for (spec, lo, hi) in catalog() {
        // The difference quotient's own O(dt²) error blows up near a
        // singular lower endpoint, so the grid starts halfway in.
        let dt = 1e-4;
        for s in [1.5, 2.0, 3.0] {
            for t in linspace(lo + 0.5 * (hi - lo), hi - 2.0 * dt, 6) {
                let r = rhr_identity_residual(&spec, order(s), t, dt, &cfg()).unwrap();
                assert!(r <= 1e-5, "{spec} s={s} t={t}: {r}");
            }
        }
    }
    let u = DistributionSpec::uniform(0.0, 2.0).unwrap();
    assert!(rhr_identity_residual(&u, order(2.0), 1.0, 1e-4, &cfg()).unwrap() <= 1e-6);
}

#[test]
fn affine_identity_against_catalog() {
    for (a, b) in [(2.0, 0.0), (1.0, 1.0), (0.5, 0.3), (0.5, 0.0), (2.0, 1.0), (0.5, 1.0)] {
        let base = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let moved = DistributionSpec::uniform(b, a + b).unwrap();
        for s in [1.5, 2.0, 3.0] {
            for u in linspace(0.05, 1.0, 7) {
                let t = a * u + b;
                let lhs = affine_pegf(&base, a, b, order(s), t, &cfg()).unwrap();
                let rhs = pegf(&moved, order(s), t, &cfg()).unwrap();
                assert!(close(lhs, rhs, 1e-8, 1e-8), "a={a} b={b} s={s} t={t}");
            }
        }
    }
    // Exponential: aX is Exponential{a}; X + b is no catalog member, so compare with the shift rule.
    let e = DistributionSpec::exponential(1.0).unwrap();
    for (a, b) in [(2.0, 0.0), (1.0, 1.0), (0.5, 0.3)] {
        let scaled = DistributionSpec::exponential(a).unwrap();
        for s in [1.5, 2.0, 3.0] {
            for t in [1.5, 2.5, 4.0] {
                let lhs = affine_pegf(&e, a, b, order(s), t, &cfg()).unwrap();
                let rhs = scaled.closed_form_pegf(s, t - b).unwrap();
                assert!(close(lhs, rhs, 1e-8, 1e-8), "a={a} b={b} s={s} t={t}");
            }
        }
    }
    let u = DistributionSpec::uniform(0.0, 1.0).unwrap();
    assert!((affine_pegf(&u, 2.0, 0.0, order(2.0), 1.0, &cfg()).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn generalized_power_with_quarter_is_power_three() {
    let g = DistributionSpec::generalized_power(0.25, 0.0, 1.0).unwrap();
    let p = DistributionSpec::power(3.0).unwrap();
    for s in [1.5, 2.0, 3.0] {
        for t in linspace(0.05, 1.0, 10) {
            let a = g.closed_form_pegf(s, t).unwrap();
            let b = p.closed_form_pegf(s, t).unwrap();
            assert!((a - b).abs() <= 1e-12 * b.max(1.0), "s={s} t={t}");
            let qa = pegf(&g, order(s), t, &cfg()).unwrap();
            let qb = pegf(&p, order(s), t, &cfg()).unwrap();
            assert!((qa - qb).abs() <= 1e-12 * qb.max(1.0), "s={s} t={t}: {qa} vs {qb}");
        }
    }
}

#[test]
fn mean_inactivity_is_linear_for_generalized_power() {
    for (c, d, b) in [(0.25, 0.0, 1.0), (0.4, 0.2, 2.0), (0.7, 1.0, 3.0)] {
        let g = DistributionSpec::generalized_power(c, d, b).unwrap();
        let low = -d / c;
        for t in linspace(low + 0.1 * (b - low), b, 6) {
            assert!((g.mean_inactivity(t).unwrap() - (c * t + d)).abs() < 1e-12);
        }
    }
}

#[test]
fn left_exponential_pegf_is_constant() {
    for a in [0.5, 1.0, 2.0] {
        let spec = DistributionSpec::left_exponential(a, 0.0).unwrap();
        for s in [1.5, 2.0, 3.0] {
            let expected = a.powf(s) / (a * s);
            let vals: Vec<f64> =
                linspace(-5.0, 0.0, 20).iter().map(|&t| spec.closed_form_pegf(s, t).unwrap()).collect();
            for v in &vals {
                assert!((v - expected).abs() <= 1e-10 * expected);
            }
            let q = pegf(&spec, order(s), -1.0, &cfg()).unwrap();
            assert!((q - expected).abs() <= 1e-8 * expected);
        }
    }
    let one = DistributionSpec::left_exponential(1.0, 0.0).unwrap();
    assert_eq!(one.closed_form_pegf(2.0, -3.0).unwrap(), 0.5);
}
