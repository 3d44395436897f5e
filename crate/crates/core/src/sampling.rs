//! Seeded random inputs.
//!
//! Every sample index gets its own ChaCha stream derived from `(seed, index)`,
//! so a sample can be regenerated without replaying the ones before it and
//! parallel runs see exactly the same inputs as sequential ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::norm::{GramMatrix, NormSpec};
use crate::tol;
use crate::vector::Vector;

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Coordinates drawn i.i.d. from the standard normal law.
pub fn normal_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector {
    let coords = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
    Vector::new(coords).expect("normal samples are finite")
}

/// A standard-normal vector with norm at least the sampling floor.
pub fn nonzero_vector<R: Rng + ?Sized>(rng: &mut R, spec: &NormSpec, dim: usize) -> Vector {
    loop {
        let v = normal_vector(rng, dim);
        if spec.norm_unchecked(v.coords()) >= tol::SAMPLE_MIN_NORM {
            return v;
        }
    }
}

/// A random direction scaled to unit length under `spec`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, spec: &NormSpec, dim: usize) -> Vector {
    let v = nonzero_vector(rng, spec, dim);
    let n = spec.norm_unchecked(v.coords());
    v.scaled(1.0 / n)
}

/// `10^u` with `u` uniform, i.e. log-uniform on `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.random_range(lo.log10()..=hi.log10());
    10f64.powf(u)
}

/// A well-conditioned random Gram matrix `A^T A / n + I / 2`.
pub fn random_gram<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> GramMatrix {
    let a: Vec<Vec<f64>> = (0..dim)
        .map(|_| (0..dim).map(|_| StandardNormal.sample(rng)).collect())
        .collect();
    let mut rows = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in 0..=i {
            let s: f64 = (0..dim).map(|k| a[k][i] * a[k][j]).sum::<f64>() / dim as f64;
            let s = if i == j { s + 0.5 } else { s };
            rows[i][j] = s;
            rows[j][i] = s;
        }
    }
    GramMatrix::new(rows).expect("A^T A + I/2 is positive definite")
}

/// One norm from the catalog: l1, l2, l3, l_inf, weighted l^1.5, or a random Gram norm.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> NormSpec {
    match rng.random_range(0..6) {
        0 => NormSpec::l1(),
        1 => NormSpec::l2(),
        2 => NormSpec::lp(3.0).expect("valid exponent"),
        3 => NormSpec::linf(),
        4 => {
            let w = (0..dim).map(|_| rng.random_range(0.25..4.0)).collect();
            NormSpec::weighted(w, 1.5).expect("positive weights")
        }
        _ => NormSpec::Gram(random_gram(rng, dim)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = normal_vector(&mut rng_for(7, 3), 4);
        let b = normal_vector(&mut rng_for(7, 3), 4);
        let c = normal_vector(&mut rng_for(7, 4), 4);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unit_vectors_have_unit_norm() {
        let mut rng = rng_for(1, 0);
        for _ in 0..100 {
            let spec = random_spec(&mut rng, 3);
            let u = unit_vector(&mut rng, &spec, 3);
            assert!((spec.norm(&u).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn log_uniform_stays_in_range() {
        let mut rng = rng_for(2, 0);
        for _ in 0..1000 {
            let r = log_uniform(&mut rng, 1e-2, 1e2);
            assert!((1e-2 * (1.0 - 1e-12)..=1e2 * (1.0 + 1e-12)).contains(&r));
        }
    }
}
