#![allow(dead_code)]

use pegf_core::DistributionSpec;

/// Families exercised by the grid tests, each with an interior `t` range.
pub fn catalog() -> Vec<(DistributionSpec, f64, f64)> {
    vec![
        (DistributionSpec::uniform(0.0, 2.0).unwrap(), 0.1, 2.0),
        (DistributionSpec::uniform(-1.0, 3.0).unwrap(), -0.8, 3.0),
        (DistributionSpec::power(2.0).unwrap(), 0.05, 1.0),
        (DistributionSpec::power(0.8).unwrap(), 0.05, 1.0),
        (DistributionSpec::exponential(1.0).unwrap(), 0.05, 6.0),
        (DistributionSpec::exponential(2.5).unwrap(), 0.1, 10.0),
        (DistributionSpec::generalized_power(0.25, 0.0, 1.0).unwrap(), 0.05, 1.0),
        (DistributionSpec::generalized_power(0.4, 0.2, 2.0).unwrap(), -0.4, 2.0),
        (DistributionSpec::generalized_power(0.55, 0.0, 1.0).unwrap(), 0.05, 1.0),
        (DistributionSpec::left_exponential(1.5, 0.0).unwrap(), -4.0, 0.0),
        (DistributionSpec::left_exponential(0.5, 2.0).unwrap(), -6.0, 2.0),
    ]
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

pub fn close(a: f64, b: f64, abs: f64, rel: f64) -> bool {
    (a - b).abs() <= abs.max(rel * b.abs())
}
