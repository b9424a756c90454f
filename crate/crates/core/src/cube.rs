//! Real-valued functions on the boolean cube `{0,1}^n` with the uniform
//! measure, together with the entropy functional, noise operators and
//! conditional expectations.
//!
//! Point `x` is stored at index `j` where bit `i` of `j` is the coordinate
//! `x_{i+1}`. Expectations are uniform averages, so a probability density is a
//! function with mean 1.

use serde::{Deserialize, Serialize};

use crate::error::{argument, domain, Result};
use crate::scalar::xlog2x;
use crate::subsets::{compress, SubsetMask};

/// Largest supported dimension for dense storage.
pub const MAX_DIM: usize = 24;

/// Crossover probability `eps` of the binary symmetric channel, with the
/// derived correlation `rho = 1 - 2 eps` and contraction `lambda = rho^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParam {
    eps: f64,
}

impl NoiseParam {
    pub fn new(eps: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&eps) {
            return Err(domain(format!("noise eps = {eps} is outside [0, 1/2]")));
        }
        Ok(NoiseParam { eps })
    }

    /// The noise with `(1 - 2 eps)^2 = lambda`, taking `eps <= 1/2`.
    pub fn from_lambda(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(domain(format!("lambda = {lambda} is outside [0, 1]")));
        }
        NoiseParam::new(((1.0 - lambda.sqrt()) / 2.0).clamp(0.0, 0.5))
    }

    #[inline]
    pub fn eps(self) -> f64 {
        self.eps
    }

    #[inline]
    pub fn rho(self) -> f64 {
        1.0 - 2.0 * self.eps
    }

    #[inline]
    pub fn lambda(self) -> f64 {
        let r = self.rho();
        r * r
    }
}

/// A function `{0,1}^n -> R` stored densely.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeFunction {
    n: usize,
    values: Vec<f64>,
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(argument(format!("dimension n = {n} must be in 1..={MAX_DIM}")));
    }
    Ok(())
}

impl CubeFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if values.len() != 1 << n {
            return Err(argument(format!(
                "expected {} values for n = {n}, got {}",
                1usize << n,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(domain(format!("non-finite value {bad}")));
        }
        Ok(CubeFunction { n, values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> f64) -> Result<Self> {
        check_dim(n)?;
        CubeFunction::new(n, (0..1usize << n).map(f).collect())
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        CubeFunction::from_fn(n, |_| c)
    }

    /// The dictator `g_k`: indicator of the half-cube where coordinate
    /// `coord` (zero-based) is 0.
    pub fn dictator(n: usize, coord: usize) -> Result<Self> {
        if coord >= n {
            return Err(argument(format!("coordinate {coord} out of range for n = {n}")));
        }
        CubeFunction::from_fn(n, |x| if x >> coord & 1 == 0 { 1.0 } else { 0.0 })
    }

    /// The Walsh character `W_S(x) = (-1)^{sum_{i in S} x_i}`.
    pub fn character(n: usize, s: SubsetMask) -> Result<Self> {
        if !s.fits(n) {
            return Err(argument(format!("mask {s:?} does not fit n = {n}")));
        }
        CubeFunction::from_fn(n, |x| {
            if (x as u32 & s.0).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            }
        })
    }

    /// A boolean function from the low `2^n` bits of a truth table.
    pub fn from_truth_table(n: usize, table: u64) -> Result<Self> {
        if n > 6 {
            return Err(argument("truth tables are limited to n <= 6"));
        }
        CubeFunction::from_fn(n, |x| (table >> x & 1) as f64)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, x: usize) -> f64 {
        self.values[x]
    }

    /// Uniform expectation `E f`.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn mean_square(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() / self.len() as f64
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn is_boolean(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> CubeFunction {
        CubeFunction {
            n: self.n,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> CubeFunction {
        self.map(|v| c * v)
    }

    /// `1 - f`.
    pub fn one_minus(&self) -> CubeFunction {
        self.map(|v| 1.0 - v)
    }

    /// `f / E f`. Fails when the mean is not positive.
    pub fn normalized(&self) -> Result<CubeFunction> {
        let m = self.mean();
        if m <= 0.0 {
            return Err(domain(format!("cannot normalize a function with mean {m}")));
        }
        Ok(self.scaled(1.0 / m))
    }

    pub(crate) fn ensure_nonnegative(&self) -> Result<()> {
        if let Some((x, v)) = self.values.iter().enumerate().find(|(_, &v)| v < 0.0) {
            return Err(domain(format!("negative value {v} at point {x}")));
        }
        Ok(())
    }

    pub(crate) fn ensure_boolean(&self) -> Result<()> {
        if let Some((x, v)) = self
            .values
            .iter()
            .enumerate()
            .find(|(_, &v)| v != 0.0 && v != 1.0)
        {
            return Err(domain(format!("non-boolean value {v} at point {x}")));
        }
        Ok(())
    }

    pub(crate) fn ensure_mask(&self, a: SubsetMask) -> Result<()> {
        if !a.fits(self.n) {
            return Err(argument(format!("mask {a:?} does not fit n = {}", self.n)));
        }
        Ok(())
    }

    pub(crate) fn ensure_coord(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(argument(format!("coordinate {i} out of range for n = {}", self.n)));
        }
        Ok(())
    }

    /// `Ent(f) = E f log2 f - E f log2 E f` for nonnegative, not identically
    /// zero `f`.
    pub fn entropy(&self) -> Result<f64> {
        self.ensure_nonnegative()?;
        let mean = self.mean();
        if mean == 0.0 {
            return Err(domain("entropy of the zero function is undefined"));
        }
        Ok(self.entropy_unchecked())
    }

    /// Entropy with the convention that the zero function has entropy 0.
    pub(crate) fn entropy_or_zero(&self) -> Result<f64> {
        self.ensure_nonnegative()?;
        Ok(self.entropy_unchecked())
    }

    fn entropy_unchecked(&self) -> f64 {
        let mean = self.mean();
        let e = self.values.iter().map(|&v| xlog2x(v)).sum::<f64>() / self.len() as f64
            - xlog2x(mean);
        e.max(0.0)
    }

    /// Directional noise: applies `(T_i g)(x) = eps g(x + e_i) + (1 - eps) g(x)`
    /// for every `i` in `dirs`. The directional operators commute.
    pub fn noise_directions(&self, noise: NoiseParam, dirs: SubsetMask) -> CubeFunction {
        debug_assert!(dirs.fits(self.n));
        let eps = noise.eps();
        let keep = 1.0 - eps;
        let mut v = self.values.clone();
        for i in dirs.iter() {
            let step = 1usize << i;
            // Each pair (x, x + e_i) with bit i clear is mixed exactly once.
            for block in (0..v.len()).step_by(step << 1) {
                for x in block..block + step {
                    let a = v[x];
                    let b = v[x + step];
                    v[x] = keep * a + eps * b;
                    v[x + step] = keep * b + eps * a;
                }
            }
        }
        CubeFunction {
            n: self.n,
            values: v,
        }
    }

    /// `T_eps f`, the full noise operator (noise in every direction).
    pub fn noise(&self, noise: NoiseParam) -> CubeFunction {
        self.noise_directions(noise, SubsetMask::full(self.n))
    }

    /// Values of `E(f | A)` indexed by the packed coordinates of `A`; this is
    /// the average of `f` over each fiber of the coordinates outside `A`.
    pub fn marginal(&self, a: SubsetMask) -> Vec<f64> {
        let r = a.len();
        let mut out = vec![0.0; 1 << r];
        for (x, &v) in self.values.iter().enumerate() {
            out[compress(x, a)] += v;
        }
        let fiber = (1usize << (self.n - r)) as f64;
        for o in &mut out {
            *o /= fiber;
        }
        out
    }

    /// `E(f | A)` viewed as a function on the whole cube.
    pub fn conditional_expectation(&self, a: SubsetMask) -> Result<CubeFunction> {
        self.ensure_mask(a)?;
        let m = self.marginal(a);
        CubeFunction::from_fn(self.n, |x| m[compress(x, a)])
    }

    /// `Ent(f | A) = Ent(E(f | A))`. Fibers of zero mass contribute 0.
    pub fn conditional_entropy(&self, a: SubsetMask) -> Result<f64> {
        self.ensure_mask(a)?;
        self.ensure_nonnegative()?;
        let m = self.marginal(a);
        let mean = self.mean();
        let e = m.iter().map(|&v| xlog2x(v)).sum::<f64>() / m.len() as f64 - xlog2x(mean);
        Ok(e.max(0.0))
    }

    /// Pointwise `max(|f - g|)`.
    pub fn max_abs_diff(&self, other: &CubeFunction) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
