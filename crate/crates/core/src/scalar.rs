//! Scalar entropy primitives: the binary entropy function, its inverse on
//! `[0, 1/2]`, Mrs. Gerber's function and binomial helpers.
//!
//! All logarithms are base 2 and `0 log 0 = 0` throughout.

use crate::cube::NoiseParam;
use crate::error::{domain, Result};

/// `x log2 x` with the convention `0 log 0 = 0`.
#[inline]
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(domain(format!("{name} = {v} is outside [0, 1]")));
    }
    Ok(())
}

/// Binary entropy `H2(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_unit("p", p)?;
    Ok(h2(p))
}

/// Unchecked binary entropy for callers that already hold a value in `[0, 1]`.
#[inline]
pub(crate) fn h2(p: f64) -> f64 {
    -xlog2x(p) - xlog2x(1.0 - p)
}

/// The unique `p` in `[0, 1/2]` with `H2(p) = y`.
///
/// Bisection on `[0, 1/2]`, where `H2` is increasing; stops after 100 halvings
/// or once the bracket is narrower than `1e-15`.
pub fn binary_entropy_inv(y: f64) -> Result<f64> {
    check_unit("y", y)?;
    Ok(h2_inv(y))
}

pub(crate) fn h2_inv(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    if y >= 1.0 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..100 {
        if hi - lo < 1e-15 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if h2(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Mrs. Gerber's function `phi(x, eps) = 1 - H2((1 - 2 eps) H2^{-1}(1 - x) + eps)`.
///
/// This is the entropy of the noisy image of a two-point density whose own
/// entropy is `x`. It is increasing and concave in `x`, with
/// `phi(0) = 0` and `phi(1) = 1 - H2(eps)`.
pub fn gerber_phi(x: f64, noise: NoiseParam) -> Result<f64> {
    check_unit("x", x)?;
    Ok(phi(x, noise))
}

#[inline]
pub(crate) fn phi(x: f64, noise: NoiseParam) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let p = h2_inv(1.0 - x);
    1.0 - h2(noise.rho() * p + noise.eps())
}

/// Binomial coefficient as a real number.
///
/// Exact in 64-bit integers for `n <= 60`, log-space above that.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= 60 {
        binomial_u64(n, k) as f64
    } else {
        let k = k.min(n - k);
        let ln: f64 = (1..=k)
            .map(|i| ((n - k + i) as f64).ln() - (i as f64).ln())
            .sum();
        ln.exp()
    }
}

/// Exact binomial coefficient; caller guarantees no overflow (`n <= 60` suffices).
pub(crate) fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(n, j) p^j (1-p)^(n-j)`, with `0^0 = 1`.
#[inline]
pub fn binomial_pmf(n: u64, j: u64, p: f64) -> f64 {
    if j > n {
        return 0.0;
    }
    binomial(n, j) * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32)
}
