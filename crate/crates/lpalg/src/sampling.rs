//! Seeded random generators for test sweeps: random exact scalars,
//! convolution elements, algebra elements, Lamperti isometries, bisections,
//! and strictly positive weight functions. Deterministic given the seed.

use crate::groupoid::{Arrow, Bisection, FiniteGroupoid};
use crate::groupoid_algebra::ConvElement;
use crate::linalg::Mat;
use crate::lp_norms::RepresentedAlgebra;
use crate::scalar::Scalar;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random Gaussian rational with numerators in `[-3, 3]` and denominators
/// in `[1, 3]`; nonzero entries stay comfortably away from zero so that
/// float-side tolerances are never in doubt.
pub fn random_scalar(rng: &mut ChaCha8Rng, complex: bool) -> Scalar {
    let re_num = rng.gen_range(-3i64..=3);
    let re_den = rng.gen_range(1i64..=3);
    let im = if complex {
        (rng.gen_range(-3i64..=3), rng.gen_range(1i64..=3))
    } else {
        (0, 1)
    };
    Scalar::from_parts(re_num, re_den, im.0, im.1)
}

pub fn random_nonzero_scalar(rng: &mut ChaCha8Rng, complex: bool) -> Scalar {
    loop {
        let s = random_scalar(rng, complex);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A random element of `C_c(G)` with roughly `support` nonzero coefficients.
pub fn random_conv_element(
    rng: &mut ChaCha8Rng,
    gpd: &Arc<FiniteGroupoid>,
    support: usize,
) -> ConvElement {
    let mut arrows: Vec<Arrow> = gpd.arrows().collect();
    arrows.shuffle(rng);
    arrows.truncate(support.min(gpd.n_arrows()));
    ConvElement::from_coeffs(
        gpd.clone(),
        arrows.into_iter().map(|a| (a, random_scalar(rng, true))),
    )
}

/// A random element of a represented algebra (random exact coordinates).
pub fn random_algebra_element(rng: &mut ChaCha8Rng, algebra: &RepresentedAlgebra) -> Mat {
    let coords: Vec<Scalar> =
        (0..algebra.dim()).map(|_| random_scalar(rng, true)).collect();
    algebra.element(&coords)
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Exact unimodular scalars, including non-trivial Pythagorean phases.
pub fn random_unimodular(rng: &mut ChaCha8Rng) -> Scalar {
    let choices = [
        Scalar::from_int(1),
        Scalar::from_int(-1),
        Scalar::i(),
        -&Scalar::i(),
        Scalar::from_parts(3, 5, 4, 5),
        Scalar::from_parts(3, 5, -4, 5),
        Scalar::from_parts(-4, 5, 3, 5),
        Scalar::from_parts(5, 13, 12, 13),
        Scalar::from_parts(-5, 13, -12, 13),
    ];
    choices[rng.gen_range(0..choices.len())].clone()
}

/// A random `D·P` matrix together with its factorization data.
pub fn random_lamperti(rng: &mut ChaCha8Rng, n: usize) -> (Mat, Vec<Scalar>, Vec<usize>) {
    let perm = random_permutation(rng, n);
    let diag: Vec<Scalar> = (0..n).map(|_| random_unimodular(rng)).collect();
    let mut m = Mat::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = diag[i].clone();
    }
    (m, diag, perm)
}

/// A random matrix that is certainly not of Lamperti form: some column
/// gets two nonzero entries.
pub fn random_non_lamperti(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    assert!(n >= 2);
    let (mut m, _, _) = random_lamperti(rng, n);
    let col = rng.gen_range(0..n);
    let rows: Vec<usize> = random_permutation(rng, n).into_iter().take(2).collect();
    m[(rows[0], col)] = random_nonzero_scalar(rng, true);
    m[(rows[1], col)] = random_nonzero_scalar(rng, true);
    m
}

/// A uniformly chosen bisection: sweep dom units, optionally picking an
/// unused-range arrow.
pub fn random_bisection(rng: &mut ChaCha8Rng, gpd: &FiniteGroupoid) -> Bisection {
    let mut arrows = BTreeSet::new();
    let mut used_ran = BTreeSet::new();
    for &x in gpd.units() {
        let mut candidates: Vec<Arrow> = gpd
            .arrows_from(x)
            .into_iter()
            .filter(|&g| !used_ran.contains(&gpd.ran(g)))
            .collect();
        candidates.shuffle(rng);
        if !candidates.is_empty() && rng.gen_bool(0.7) {
            let g = candidates[0];
            used_ran.insert(gpd.ran(g));
            arrows.insert(g);
        }
    }
    Bisection::new(gpd, arrows).expect("construction respects injectivity")
}

/// Strictly positive rational weights on all unit positions.
pub fn random_positive_weights(
    rng: &mut ChaCha8Rng,
    units: usize,
) -> BTreeMap<usize, Scalar> {
    (0..units)
        .map(|u| {
            let num = rng.gen_range(1i64..=4);
            let den = rng.gen_range(1i64..=3);
            (u, Scalar::from_ratio(num, den))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::pair_groupoid;
    use num::One;

    #[test]
    fn determinism_given_seed() {
        let g = Arc::new(pair_groupoid(3));
        let a = random_conv_element(&mut rng(7), &g, 4);
        let b = random_conv_element(&mut rng(7), &g, 4);
        assert_eq!(a, b);
    }

    #[test]
    fn unimodular_really_is() {
        let mut r = rng(1);
        for _ in 0..50 {
            assert!(random_unimodular(&mut r).abs_sq().is_one());
        }
    }
}
