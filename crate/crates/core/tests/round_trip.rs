mod common;

use common::linspace;
use pegf_core::egf::pegf_curve;
use pegf_core::reconstruct::{detect_constant_pegf, reconstruct_cdf, solve_lambda, RootChoice};
use pegf_core::{DistributionSpec, EgfCurve, InitBranch, QuadratureConfig, RootSolveConfig, SOrder};

fn round_trip(spec: &DistributionSpec, s: f64, grid: &[f64], high: f64, branch: InitBranch) -> f64 {
    let curve = pegf_curve(spec, SOrder::new(s).unwrap(), grid, &QuadratureConfig::default())
        .unwrap()
        .with_support_high(high)
        .unwrap();
    let cfg = RootSolveConfig { init_branch: branch, ..RootSolveConfig::default() };
    let rec = reconstruct_cdf(&curve, &cfg).unwrap();
    assert!(rec.cdf.windows(2).all(|w| w[0] <= w[1]), "{spec}: cdf not monotone");
    for (l, bp) in rec.lambda.iter().zip(&rec.bs_prime) {
        assert!(*l > 0.0);
        let _ = bp;
    }
    assert!(rec.max_eq8_residual <= 1e-6 * rec.bs_prime.iter().fold(1.0f64, |m, b| m.max(b.abs())));
    rec.t_grid.iter().zip(&rec.cdf).map(|(&t, &f)| (f - spec.cdf(t)).abs()).fold(0.0, f64::max)
}

#[test]
fn uniform_round_trip() {
    let u = DistributionSpec::uniform(0.0, 2.0).unwrap();
    let err = round_trip(&u, 2.0, &linspace(0.05, 1.95, 200), 2.0, InitBranch::Larger);
    assert!(err <= 2e-3, "{err}");
}

#[test]
fn exponential_round_trip_on_the_smaller_branch() {
    let e = DistributionSpec::exponential(1.0).unwrap();
    let grid = linspace(0.05, 8.0, 400);
    let err = round_trip(&e, 2.0, &grid, 8.0, InitBranch::Smaller);
    assert!(err <= 5e-3, "{err}");

    // Starting on the larger branch walks off the true solution.
    let curve = pegf_curve(&e, SOrder::new(2.0).unwrap(), &grid, &QuadratureConfig::default())
        .unwrap()
        .with_support_high(8.0)
        .unwrap();
    let wrong = reconstruct_cdf(&curve, &RootSolveConfig::default()).unwrap();
    let worst = grid.iter().zip(&wrong.cdf).map(|(&t, &f)| (f - e.cdf(t)).abs()).fold(0.0, f64::max);
    assert!(worst > 0.05, "{worst}");
}

#[test]
fn parametric_round_trips() {
    let cases = [
        (DistributionSpec::power(2.0).unwrap(), 0.05, 1.0, InitBranch::Larger),
        (DistributionSpec::power(3.0).unwrap(), 0.05, 1.0, InitBranch::Larger),
        (DistributionSpec::generalized_power(0.25, 0.0, 1.0).unwrap(), 0.05, 1.0, InitBranch::Larger),
        (DistributionSpec::generalized_power(0.4, 0.2, 2.0).unwrap(), -0.3, 2.0, InitBranch::Larger),
        (DistributionSpec::generalized_power(0.6, 0.0, 1.0).unwrap(), 0.05, 1.0, InitBranch::Smaller),
        (DistributionSpec::left_exponential(1.5, 0.0).unwrap(), -4.0, 0.0, InitBranch::Larger),
    ];
    for (spec, lo, hi, branch) in cases {
        let err = round_trip(&spec, 2.0, &linspace(lo, hi, 300), hi, branch);
        assert!(err <= 5e-3, "{spec}: {err}");
    }
}

#[test]
fn general_order_round_trip() {
    let p = DistributionSpec::power(2.0).unwrap();
    for s in [1.5, 3.0] {
        let err = round_trip(&p, s, &linspace(0.05, 1.0, 300), 1.0, InitBranch::Larger);
        assert!(err <= 5e-3, "s={s}: {err}");
    }
}

#[test]
fn hint_selects_the_branch() {
    let e = DistributionSpec::exponential(1.0).unwrap();
    let err = round_trip(&e, 2.0, &linspace(0.05, 8.0, 400), 8.0, InitBranch::Hint(e.reversed_hazard(0.05).unwrap()));
    assert!(err <= 5e-3, "{err}");
}

#[test]
fn two_root_case_follows_continuity() {
    let cfg = RootSolveConfig::default();
    let near_small = solve_lambda(1.081976, -0.920676, 2.0, Some(0.6), &cfg).unwrap();
    assert!((near_small.lambda - 0.581976).abs() < 1e-5);
    assert_eq!(near_small.choice, RootChoice::Smaller);
    let near_large = solve_lambda(1.081976, -0.920676, 2.0, Some(1.5), &cfg).unwrap();
    assert!((near_large.lambda - 1.581976).abs() < 1e-5);

    // Within a reconstruction, the exponential at t = 1 lands on the same root.
    let e = DistributionSpec::exponential(1.0).unwrap();
    let grid = linspace(0.05, 8.0, 400);
    let curve = pegf_curve(&e, SOrder::new(2.0).unwrap(), &grid, &QuadratureConfig::default())
        .unwrap()
        .with_support_high(8.0)
        .unwrap();
    let cfg = RootSolveConfig { init_branch: InitBranch::Smaller, ..RootSolveConfig::default() };
    let rec = reconstruct_cdf(&curve, &cfg).unwrap();
    let i = grid.iter().position(|&t| t >= 1.0).unwrap();
    assert!((rec.lambda[i] - e.reversed_hazard(grid[i]).unwrap()).abs() < 5e-3);
    assert!(matches!(rec.root_branch_log[i], RootChoice::Smaller));
}

#[test]
fn constant_curves_and_detection() {
    for a in [0.5, 1.0, 2.0] {
        let spec = DistributionSpec::left_exponential(a, 0.0).unwrap();
        for s in [1.5, 2.0, 3.0] {
            let curve =
                pegf_curve(&spec, SOrder::new(s).unwrap(), &linspace(-5.0, 0.0, 50), &QuadratureConfig::default())
                    .unwrap();
            let fit = detect_constant_pegf(&curve, 1e-6).unwrap();
            assert!((fit.a / a - 1.0).abs() <= 1e-6, "a={a} s={s}: {}", fit.a);
            assert_eq!(fit.b, 0.0);
        }
    }
    let flat =
        EgfCurve::new(SOrder::new(2.0).unwrap(), linspace(0.0, 3.0, 31), vec![0.5; 31], 3.0, "flat".into()).unwrap();
    let rec = reconstruct_cdf(&flat, &RootSolveConfig::default()).unwrap();
    for (t, (l, f)) in rec.t_grid.iter().zip(rec.lambda.iter().zip(&rec.cdf)) {
        assert!((l - 1.0).abs() < 1e-12);
        assert!((f - (t - 3.0).exp()).abs() < 1e-12);
    }
}

#[test]
fn unbounded_support_anchors_at_last_point() {
    let e = DistributionSpec::exponential(1.0).unwrap();
    let curve =
        pegf_curve(&e, SOrder::new(2.0).unwrap(), &linspace(0.05, 12.0, 400), &QuadratureConfig::default()).unwrap();
    assert!(curve.support_high().is_infinite());
    let cfg = RootSolveConfig { init_branch: InitBranch::Smaller, ..RootSolveConfig::default() };
    let rec = reconstruct_cdf(&curve, &cfg).unwrap();
    assert_eq!(rec.anchor, 12.0);
    assert!(rec.warnings.iter().any(|w| w.contains("truncation")));
    assert_eq!(*rec.cdf.last().unwrap(), 1.0);
}
