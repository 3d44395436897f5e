#![allow(dead_code)]

use pangle_core::norm::NormSpec;
use pangle_core::sampling::{random_gram, random_spec, rng_for};
use pangle_core::Vector;
use proptest::prelude::*;

/// A norm from the catalog, chosen by seed.
pub fn spec_for(seed: u64, dim: usize) -> NormSpec {
    random_spec(&mut rng_for(seed, 0), dim)
}

pub fn gram_for(seed: u64, dim: usize) -> NormSpec {
    NormSpec::Gram(random_gram(&mut rng_for(seed, 0), dim))
}

pub fn coords(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, dim)
}

/// `(dim, x, y)` with both vectors away from the origin.
pub fn pair() -> impl Strategy<Value = (usize, Vector, Vector)> {
    (2usize..=4)
        .prop_flat_map(|d| (Just(d), coords(d), coords(d)))
        .prop_filter("away from 0", |(_, x, y)| {
            max_abs(x) > 1e-3 && max_abs(y) > 1e-3
        })
        .prop_map(|(d, x, y)| (d, Vector::new(x).unwrap(), Vector::new(y).unwrap()))
}

pub fn triple() -> impl Strategy<Value = (usize, Vector, Vector, Vector)> {
    (2usize..=4)
        .prop_flat_map(|d| (Just(d), coords(d), coords(d), coords(d)))
        .prop_filter("away from 0", |(_, x, y, z)| {
            max_abs(x) > 1e-3 && max_abs(y) > 1e-3 && max_abs(z) > 1e-3
        })
        .prop_map(|(d, x, y, z)| {
            (
                d,
                Vector::new(x).unwrap(),
                Vector::new(y).unwrap(),
                Vector::new(z).unwrap(),
            )
        })
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, c| m.max(c.abs()))
}

pub fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c)
}

pub fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}
