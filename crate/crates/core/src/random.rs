//! Seeded test-function generators.
//!
//! Every generator draws from [`ChaCha8Rng`] seeded through
//! `SeedableRng::seed_from_u64`, so a `(seed, n)` pair determines the function
//! on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::CubeFunction;
use crate::error::Result;
use crate::info::BoundaryData;

pub type TestRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// I.i.d. uniform(0,1) values.
pub fn random_nonneg(n: usize, rng: &mut impl Rng) -> Result<CubeFunction> {
    CubeFunction::from_fn(n, |_| rng.random::<f64>())
}

/// I.i.d. uniform(0,1) values rescaled to mean 1.
pub fn random_density(n: usize, rng: &mut impl Rng) -> Result<CubeFunction> {
    let f = random_nonneg(n, rng)?;
    f.normalized()
}

/// I.i.d. fair bits.
pub fn random_boolean(n: usize, rng: &mut impl Rng) -> Result<CubeFunction> {
    CubeFunction::from_fn(n, |_| if rng.random::<bool>() { 1.0 } else { 0.0 })
}

/// `prod_i h_i(x_i)` with `h_i(0), h_i(1)` uniform in `(0.1, 1.1)`; coordinates
/// are independent under the induced distribution.
pub fn random_product(n: usize, rng: &mut impl Rng) -> Result<CubeFunction> {
    let factors: Vec<[f64; 2]> = (0..n)
        .map(|_| [0.1 + rng.random::<f64>(), 0.1 + rng.random::<f64>()])
        .collect();
    CubeFunction::from_fn(n, |x| {
        factors
            .iter()
            .enumerate()
            .map(|(i, h)| h[x >> i & 1])
            .product()
    })
}

/// `I(∅) = 0` and `I(S) = max_{j∈S} I(S - j) + U(0,1)`: a nonnegative,
/// strictly increasing set function on `[k]`, indexed by mask.
pub fn random_set_function(k: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut v = vec![0.0; 1 << k];
    for s in 1..1usize << k {
        let below = (0..k)
            .filter(|j| s >> j & 1 == 1)
            .map(|j| v[s & !(1 << j)])
            .fold(0.0, f64::max);
        v[s] = below + rng.random::<f64>();
    }
    v
}

/// Boundary data given by the discrete gradient of [`random_set_function`].
pub fn random_consistent_boundary(k: usize, rng: &mut impl Rng) -> Result<BoundaryData> {
    BoundaryData::from_set_function(k, &random_set_function(k, rng))
}

/// Boundary data with every `y_{S,i}` i.i.d. uniform(0,1).
pub fn random_iid_boundary(k: usize, rng: &mut impl Rng) -> Result<BoundaryData> {
    let mut b = BoundaryData::zeros(k)?;
    let pairs: Vec<_> = b.pairs().collect();
    for (s, i) in pairs {
        b.set(s, i, rng.random::<f64>())?;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = random_density(5, &mut seeded_rng(11)).unwrap();
        let b = random_density(5, &mut seeded_rng(11)).unwrap();
        assert_eq!(a, b);
        assert!((a.mean() - 1.0).abs() < 1e-14);
        assert!(random_boolean(4, &mut seeded_rng(1)).unwrap().is_boolean());
    }
}
