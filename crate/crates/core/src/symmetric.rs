//! Closed forms of the symmetric program.
//!
//! Symmetric boundary data `y_1..y_k` drives the recursion
//! `x^0_s = y_s`, `x^r_s = λ x^{r-1}_s + (1-λ) x^{r-1}_{s-1}` on `0 <= r < s <= k`.
//! The symmetric assignment built from it is feasible for the program and its
//! value is `λ sum_t x^t_{t+1} = sum_s Λ(k,s,λ) y_s`.
//!
//! Operations that have two independent evaluation routes compute both and
//! return a consistency error when they disagree.

use serde::{Deserialize, Serialize};

use crate::cube::{CubeFunction, NoiseParam};
use crate::error::{argument, domain, ensure_agree, Result};
use crate::info::{mutual_info_sets, y_avg_profile, y_boundary, BoundaryData};
use crate::scalar::binomial;
use crate::subsets::SubsetMask;

/// Symmetric data `y_s` is accepted down to this negative value so that data
/// averaged from function-derived boundaries passes through.
pub const NEGATIVE_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricData {
    pub k: usize,
    pub lambda: f64,
    /// `y[s-1] = y_s`.
    pub y: Vec<f64>,
}

impl SymmetricData {
    pub fn new(lambda: f64, y: Vec<f64>) -> Result<Self> {
        if y.is_empty() {
            return Err(argument("symmetric data needs k >= 1"));
        }
        check_lambda(lambda)?;
        if let Some(bad) = y.iter().find(|v| !v.is_finite() || **v < -NEGATIVE_SLACK) {
            return Err(domain(format!("symmetric data value {bad} is not a nonnegative real")));
        }
        Ok(SymmetricData {
            k: y.len(),
            lambda,
            y,
        })
    }

    /// Averages `y_{S,i}` over each layer `|S| = s`.
    pub fn from_boundary(b: &BoundaryData, lambda: f64) -> Result<Self> {
        SymmetricData::new(lambda, y_avg_profile(b))
    }

    /// The unit vector `e_s`.
    pub fn unit(k: usize, s: usize, lambda: f64) -> Result<Self> {
        check_unit_index(k, s)?;
        let mut y = vec![0.0; k];
        y[s - 1] = 1.0;
        SymmetricData::new(lambda, y)
    }

    #[inline]
    pub fn y(&self, s: usize) -> f64 {
        self.y[s - 1]
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(domain(format!("lambda = {lambda} is outside [0, 1]")));
    }
    Ok(())
}

fn check_unit_index(k: usize, s: usize) -> Result<()> {
    if s == 0 || s > k {
        return Err(argument(format!("need 1 <= s <= k, got s = {s}, k = {k}")));
    }
    Ok(())
}

/// `x^r_s` for `0 <= r < s <= k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XTable {
    k: usize,
    /// `rows[r][s - r - 1] = x^r_s`.
    rows: Vec<Vec<f64>>,
}

impl XTable {
    pub fn k(&self) -> usize {
        self.k
    }

    /// `x^r_s`; reading outside `0 <= r < s <= k` is a logic error and panics.
    #[inline]
    pub fn get(&self, r: usize, s: usize) -> f64 {
        assert!(r < s && s <= self.k, "x^{r}_{s} is outside the table (k = {})", self.k);
        self.rows[r][s - r - 1]
    }
}

pub fn x_table(data: &SymmetricData) -> XTable {
    let k = data.k;
    let lambda = data.lambda;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(k);
    rows.push(data.y.clone());
    for r in 1..k {
        let prev = &rows[r - 1];
        // prev[j] = x^{r-1}_{r+j}; the new row holds x^r_s for s = r+1..=k.
        let row = (r + 1..=k)
            .map(|s| lambda * prev[s - r] + (1.0 - lambda) * prev[s - r - 1])
            .collect();
        rows.push(row);
    }
    XTable { k, rows }
}

/// `x^r_t` for data `e_s`: `C(r, t-s) λ^{r-(t-s)} (1-λ)^{t-s}` when
/// `s <= t <= s + r`, else 0.
pub fn x_closed_form_unit(k: usize, lambda: f64, s: usize, r: usize, t: usize) -> Result<f64> {
    check_unit_index(k, s)?;
    if r >= t || t > k {
        return Err(argument(format!("need 0 <= r < t <= k, got r = {r}, t = {t}, k = {k}")));
    }
    if t < s || t > s + r {
        return Ok(0.0);
    }
    let d = t - s;
    Ok(binomial(r as u64, d as u64) * lambda.powi((r - d) as i32) * (1.0 - lambda).powi(d as i32))
}

/// `Λ(k,s,λ) = 1 - sum_{j<s} C(k,j) λ^j (1-λ)^{k-j}`, the probability that a
/// Binomial(k, λ) variable is at least `s`.
pub fn lambda_coeff(k: usize, s: usize, lambda: f64) -> f64 {
    1.0 - (0..s)
        .map(|j| binomial(k as u64, j as u64) * lambda.powi(j as i32) * (1.0 - lambda).powi((k - j) as i32))
        .sum::<f64>()
}

/// `V(e_s)` by the series `λ^s sum_{m<=k-s} C(s+m-1, m) (1-λ)^m`, checked
/// against [`lambda_coeff`].
pub fn unit_value(k: usize, s: usize, lambda: f64) -> Result<f64> {
    check_unit_index(k, s)?;
    check_lambda(lambda)?;
    let series = lambda.powi(s as i32)
        * (0..=k - s)
            .map(|m| binomial((s + m - 1) as u64, m as u64) * (1.0 - lambda).powi(m as i32))
            .sum::<f64>();
    ensure_agree("unit value", series, lambda_coeff(k, s, lambda), 1e-12)?;
    Ok(series)
}

/// The symmetric solution together with its recursion table.
#[derive(Clone, Debug)]
pub struct SymmetricSolution {
    data: SymmetricData,
    x: XTable,
}

impl SymmetricSolution {
    pub fn new(data: SymmetricData) -> Self {
        let x = x_table(&data);
        SymmetricSolution { data, x }
    }

    pub fn data(&self) -> &SymmetricData {
        &self.data
    }

    pub fn table(&self) -> &XTable {
        &self.x
    }

    /// `λ sum_{t<k} x^t_{t+1}`.
    pub fn value(&self) -> f64 {
        self.data.lambda * (0..self.data.k).map(|t| self.x.get(t, t + 1)).sum::<f64>()
    }

    /// `x̄^R_{S,i}`: `λ x^{r-1}_s` if `i ∈ R`, else `x^r_s`, with `r = |R ∩ S|`.
    pub fn assignment(&self, r_set: SubsetMask, s_set: SubsetMask, i: usize) -> Result<f64> {
        let k = self.data.k;
        if !r_set.fits(k) || !s_set.fits(k) || !s_set.contains(i) {
            return Err(argument(format!("invalid index R = {r_set:?}, S = {s_set:?}, i = {i}")));
        }
        let r = (r_set & s_set).len();
        let s = s_set.len();
        Ok(if r_set.contains(i) {
            self.data.lambda * self.x.get(r - 1, s)
        } else {
            self.x.get(r, s)
        })
    }

    /// `sum_{j<=m-r} y_j + λ sum_{t<r} x^t_{m-r+t+1}`, for `0 <= r <= m <= k`.
    pub fn mu(&self, m: usize, r: usize) -> Result<f64> {
        if r > m || m > self.data.k {
            return Err(argument(format!("need 0 <= r <= m <= k, got r = {r}, m = {m}")));
        }
        let head: f64 = self.data.y[..m - r].iter().sum();
        let tail: f64 = (0..r).map(|t| self.x.get(t, m - r + t + 1)).sum();
        Ok(head + self.data.lambda * tail)
    }

    /// Path sum `sum_i x̄^R_{τ(1..i), τ(i)}` computed directly and checked
    /// against [`SymmetricSolution::mu`] at `m = k`.
    pub fn path_value(&self, r_set: SubsetMask, tau: &[usize]) -> Result<f64> {
        let k = self.data.k;
        let mut seen = SubsetMask::EMPTY;
        for &t in tau {
            if t >= k || seen.contains(t) {
                return Err(argument(format!("{tau:?} is not a permutation of 0..{k}")));
            }
            seen = seen.with(t);
        }
        if tau.len() != k {
            return Err(argument(format!("{tau:?} is not a permutation of 0..{k}")));
        }
        let mut prefix = SubsetMask::EMPTY;
        let mut direct = 0.0;
        for &i in tau {
            prefix = prefix.with(i);
            direct += self.assignment(r_set, prefix, i)?;
        }
        let closed = self.mu(k, (r_set & SubsetMask::full(k)).len())?;
        ensure_agree("symmetric path value", direct, closed, 1e-12)?;
        Ok(direct)
    }
}

/// Value of the symmetric solution, checked against `sum_s y_s V(e_s)`.
pub fn symmetric_value(data: &SymmetricData) -> Result<f64> {
    let via_table = SymmetricSolution::new(data.clone()).value();
    let mut via_units = 0.0;
    for s in 1..=data.k {
        via_units += data.y(s) * unit_value(data.k, s, data.lambda)?;
    }
    ensure_agree("symmetric value", via_table, via_units, 1e-10)?;
    Ok(via_table)
}

pub fn sym_assignment(data: &SymmetricData, r: SubsetMask, s: SubsetMask, i: usize) -> Result<f64> {
    SymmetricSolution::new(data.clone()).assignment(r, s, i)
}

pub fn sym_path_value(data: &SymmetricData, r: SubsetMask, tau: &[usize]) -> Result<f64> {
    SymmetricSolution::new(data.clone()).path_value(r, tau)
}

pub fn sym_mu(data: &SymmetricData, m: usize, r: usize) -> Result<f64> {
    SymmetricSolution::new(data.clone()).mu(m, r)
}

/// Both sides of `S^r = λ S^{r-1} + (1-λ) S^{r-1}(k-1)` with `S^r = mu(k, r)`,
/// for `r = 1..=k`.
pub fn layer_recursion_sides(data: &SymmetricData) -> Result<Vec<(f64, f64)>> {
    let sol = SymmetricSolution::new(data.clone());
    let k = data.k;
    let l = data.lambda;
    (1..=k)
        .map(|r| Ok((sol.mu(k, r)?, l * sol.mu(k, r - 1)? + (1.0 - l) * sol.mu(k - 1, r - 1)?)))
        .collect()
}

/// Both sides of `E_i S^{r-1}_{[k]-i} = S^{r-1}_{[k]}(k-1)` for `r = 1..=k`.
///
/// The left side solves, for every `i`, the symmetric problem of size `k-1`
/// built from `b` restricted to `[k] - i` and re-averaged; the right side uses
/// the symmetric data of `b` itself.
pub fn restriction_average_sides(b: &BoundaryData, lambda: f64) -> Result<Vec<(f64, f64)>> {
    let k = b.k();
    if k < 2 {
        return Err(argument("restricted problems need k >= 2"));
    }
    let full = SymmetricSolution::new(SymmetricData::from_boundary(b, lambda)?);
    let restricted: Vec<SymmetricSolution> = (0..k)
        .map(|i| {
            let sub = b.restrict(SubsetMask::full(k).without(i))?;
            Ok(SymmetricSolution::new(SymmetricData::from_boundary(&sub, lambda)?))
        })
        .collect::<Result<_>>()?;
    (1..=k)
        .map(|r| {
            let mut lhs = 0.0;
            for sol in &restricted {
                lhs += sol.mu(k - 1, r - 1)?;
            }
            Ok((lhs / k as f64, full.mu(k - 1, r - 1)?))
        })
        .collect()
}

/// The three evaluations of `w_1..w_{n-1}`:
/// `(λn - s) + sum_{j<s} sum_{t<=j} C(n,t) λ^t (1-λ)^{n-t}`,
/// `λ sum_{k=s}^{n-1} Λ(k,s,λ)` and `sum_{k>s} (k-s) C(n,k) λ^k (1-λ)^{n-k}`.
pub fn w_weight_routes(n: usize, lambda: f64) -> Result<[Vec<f64>; 3]> {
    if n < 2 {
        return Err(argument("w weights need n >= 2"));
    }
    check_lambda(lambda)?;
    let p: Vec<f64> = (0..=n)
        .map(|t| binomial(n as u64, t as u64) * lambda.powi(t as i32) * (1.0 - lambda).powi((n - t) as i32))
        .collect();
    let cdf: Vec<f64> = p
        .iter()
        .scan(0.0, |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    let direct = (1..n)
        .map(|s| (lambda * n as f64 - s as f64) + cdf[..s].iter().sum::<f64>())
        .collect();
    let tails = (1..n)
        .map(|s| lambda * (s..n).map(|k| lambda_coeff(k, s, lambda)).sum::<f64>())
        .collect();
    let moments = (1..n)
        .map(|s| (s + 1..=n).map(|k| (k - s) as f64 * p[k]).sum())
        .collect();
    Ok([direct, tails, moments])
}

/// `w_1..w_{n-1}`, with all three routes checked to agree within 1e-10.
pub fn w_weights(n: usize, lambda: f64) -> Result<Vec<f64>> {
    let [direct, tails, moments] = w_weight_routes(n, lambda)?;
    for ((a, b), c) in direct.iter().zip(&tails).zip(&moments) {
        ensure_agree("w weights (tail form)", *a, *b, 1e-10)?;
        ensure_agree("w weights (moment form)", *a, *c, 1e-10)?;
    }
    Ok(direct)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyMiBound {
    /// `sum_s Λ(k,s,λ) Y(A,m,s)`.
    pub bound: f64,
    /// `I_{T_{ε_A} f}(A, m)`.
    pub actual: f64,
    /// `Y(A,m,1..k)`.
    pub profile: Vec<f64>,
}

/// Upper bound on the mutual information after noise in the directions `A`,
/// together with the directly computed value.
pub fn noisy_mi_upper_bound(f: &CubeFunction, a: SubsetMask, m: usize, noise: NoiseParam) -> Result<NoisyMiBound> {
    let b = y_boundary(f, a, m)?;
    let profile = y_avg_profile(&b);
    let k = b.k();
    let bound = (1..=k)
        .map(|s| lambda_coeff(k, s, noise.lambda()) * profile[s - 1])
        .sum();
    let actual = mutual_info_sets(&f.noise_directions(noise, a), a, m)?;
    Ok(NoisyMiBound {
        bound,
        actual,
        profile,
    })
}
