//! Information measures built from conditional entropies.
//!
//! A nonnegative `f` with `E f > 0` induces the distribution `p(x) = f(x) /
//! sum f` on the cube; with `E f = 1` the bridge between the two languages is
//! `Ent(f | A) = |A| - H(X_A)`. Most quantities here are signed sums of
//! conditional entropies `Ent(f | A)` over many subsets, so they are served
//! from an [`EntropyOracle`] which either tabulates all `2^n` of them exactly
//! or evaluates them on demand for sampled averages.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cube::{CubeFunction, NoiseParam};
use crate::error::{argument, domain, Error, Result};
use crate::random::seeded_rng;
use crate::scalar::{binomial, h2, xlog2x};
use crate::subsets::{expand, fixed_size, SubsetMask};

/// Largest `n` for which subset averages are enumerated exactly by default.
pub const EXACT_LIMIT: usize = 12;
/// Largest `n` accepted by [`EntropyTable`].
pub const TABLE_LIMIT: usize = 16;
pub const DEFAULT_SAMPLES: usize = 20_000;

/// How averages over subsets are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum AveragingMode {
    Exact,
    Sampled { samples: usize, seed: u64 },
}

impl AveragingMode {
    /// Exact enumeration for `n <= EXACT_LIMIT`, otherwise the default sample
    /// count with the given seed.
    pub fn auto(n: usize, seed: u64) -> Self {
        if n <= EXACT_LIMIT {
            AveragingMode::Exact
        } else {
            AveragingMode::Sampled {
                samples: DEFAULT_SAMPLES,
                seed,
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            AveragingMode::Exact => "exact-enumeration",
            AveragingMode::Sampled { .. } => "sampled",
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AveragingMode::Exact)
    }
}

/// `Ent(f | A)` and `H(X_A)` for every `A ⊆ [n]`.
///
/// Built by a depth-first walk in which each subset is reached from
/// `A ∪ {c}`, `c` the lowest coordinate missing from `A`, by averaging out one
/// coordinate of the parent marginal; the total work is `3^n`.
#[derive(Clone, Debug)]
pub struct EntropyTable {
    n: usize,
    mean: f64,
    ent: Vec<f64>,
    shannon: Vec<f64>,
}

impl EntropyTable {
    pub fn new(f: &CubeFunction) -> Result<Self> {
        f.ensure_nonnegative()?;
        let n = f.n();
        if n > TABLE_LIMIT {
            return Err(Error::Size(format!(
                "entropy table for n = {n} exceeds the limit {TABLE_LIMIT}"
            )));
        }
        let mut table = EntropyTable {
            n,
            mean: f.mean(),
            ent: vec![0.0; 1 << n],
            shannon: vec![0.0; 1 << n],
        };
        table.visit(SubsetMask::full(n).0, f.values());
        Ok(table)
    }

    fn visit(&mut self, mask: u32, marg: &[f64]) {
        self.record(mask, marg);
        let free = (mask.trailing_ones() as usize).min(self.n);
        for j in 0..free {
            // Bits below j are all present, so coordinate j sits at packed position j.
            let low = (1usize << j) - 1;
            let child: Vec<f64> = (0..marg.len() / 2)
                .map(|idx| {
                    let a = (idx & low) | ((idx & !low) << 1);
                    0.5 * (marg[a] + marg[a | 1 << j])
                })
                .collect();
            self.visit(mask & !(1 << j), &child);
        }
    }

    fn record(&mut self, mask: u32, marg: &[f64]) {
        let len = marg.len() as f64;
        let e = marg.iter().map(|&v| xlog2x(v)).sum::<f64>() / len - xlog2x(self.mean);
        self.ent[mask as usize] = e.max(0.0);
        if self.mean > 0.0 {
            let scale = 1.0 / (len * self.mean);
            self.shannon[mask as usize] = -marg.iter().map(|&v| xlog2x(v * scale)).sum::<f64>();
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    #[inline]
    pub fn ent(&self, a: SubsetMask) -> f64 {
        self.ent[a.0 as usize]
    }

    /// `H(X_A)` of the induced distribution; 0 for the zero function.
    #[inline]
    pub fn shannon(&self, a: SubsetMask) -> f64 {
        self.shannon[a.0 as usize]
    }
}

fn cond_ent_direct(f: &CubeFunction, a: SubsetMask) -> f64 {
    let m = f.marginal(a);
    let e = m.iter().map(|&v| xlog2x(v)).sum::<f64>() / m.len() as f64 - xlog2x(f.mean());
    e.max(0.0)
}

fn shannon_direct(f: &CubeFunction, a: SubsetMask) -> f64 {
    let m = f.marginal(a);
    let scale = 1.0 / (m.len() as f64 * f.mean());
    -m.iter().map(|&v| xlog2x(v * scale)).sum::<f64>()
}

/// Source of conditional entropies for a fixed nonnegative function.
#[derive(Clone, Debug)]
pub struct EntropyOracle<'a> {
    f: &'a CubeFunction,
    mode: AveragingMode,
    table: Option<EntropyTable>,
}

impl<'a> EntropyOracle<'a> {
    /// Tabulates when `mode` is exact, otherwise evaluates lazily.
    pub fn new(f: &'a CubeFunction, mode: AveragingMode) -> Result<Self> {
        f.ensure_nonnegative()?;
        let table = match mode {
            AveragingMode::Exact => Some(EntropyTable::new(f)?),
            AveragingMode::Sampled { samples, .. } => {
                if samples == 0 {
                    return Err(argument("sampled mode needs at least one sample"));
                }
                None
            }
        };
        Ok(EntropyOracle { f, mode, table })
    }

    pub fn auto(f: &'a CubeFunction, seed: u64) -> Result<Self> {
        EntropyOracle::new(f, AveragingMode::auto(f.n(), seed))
    }

    pub fn function(&self) -> &CubeFunction {
        self.f
    }

    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn mode(&self) -> AveragingMode {
        self.mode
    }

    #[inline]
    pub fn ent(&self, a: SubsetMask) -> f64 {
        match &self.table {
            Some(t) => t.ent(a),
            None => cond_ent_direct(self.f, a),
        }
    }

    /// `H(X_A)` of the distribution `f / sum f`.
    pub fn shannon(&self, a: SubsetMask) -> Result<f64> {
        if self.f.mean() <= 0.0 {
            return Err(domain("the zero function induces no distribution"));
        }
        Ok(match &self.table {
            Some(t) => t.shannon(a),
            None => shannon_direct(self.f, a),
        })
    }

    /// `I_f(A, m) = Ent(f | A ∪ m) - Ent(f | A) - Ent(f | m)`.
    #[inline]
    pub fn mutual_info(&self, a: SubsetMask, m: usize) -> f64 {
        self.ent(a.with(m)) - self.ent(a) - self.ent(SubsetMask::singleton(m))
    }

    /// `Z_{S;i,j}`, the second difference of `Ent(f | ·)` at `S` in directions `i, j`.
    #[inline]
    pub fn z(&self, s: SubsetMask, i: usize, j: usize) -> f64 {
        (self.ent(s.with(i).with(j)) + self.ent(s)) - (self.ent(s.with(i)) + self.ent(s.with(j)))
    }

    /// Average of `g(B)` over subsets `|B| = u` of `[n]`.
    pub fn size_average(&self, u: usize, g: impl Fn(SubsetMask) -> f64) -> f64 {
        size_average(self.n(), u, self.mode, g)
    }

    /// `E_T g(T)` with each coordinate in `T` independently with probability `p`.
    pub fn bernoulli_average(&self, p: f64, g: impl Fn(SubsetMask) -> f64) -> f64 {
        bernoulli_average(self.n(), p, self.mode, g)
    }

    /// `t_1..t_{n-1}`.
    pub fn t_profile(&self) -> Result<TProfile> {
        let n = self.n();
        if n < 2 {
            return Err(argument("the t profile needs n >= 2"));
        }
        let t = (1..n)
            .map(|s| match self.mode {
                AveragingMode::Exact => {
                    let mut acc = 0.0;
                    let mut count = 0usize;
                    for set in fixed_size(n, s - 1) {
                        let rest: Vec<usize> = (!set & SubsetMask::full(n)).iter().collect();
                        for (a, &i) in rest.iter().enumerate() {
                            for &j in &rest[a + 1..] {
                                acc += self.z(set, i, j);
                                count += 1;
                            }
                        }
                    }
                    acc / count as f64
                }
                AveragingMode::Sampled { samples, seed } => {
                    let mut rng = seeded_rng(seed ^ (s as u64).wrapping_mul(0x9E37_79B9));
                    let mut coords: Vec<usize> = (0..n).collect();
                    let mut acc = 0.0;
                    for _ in 0..samples {
                        let (pick, _) = coords.partial_shuffle(&mut rng, s + 1);
                        let set = SubsetMask::from_coords(pick[2..].iter().copied());
                        acc += self.z(set, pick[0], pick[1]);
                    }
                    acc / samples as f64
                }
            })
            .collect();
        Ok(TProfile {
            t,
            mode: self.mode,
        })
    }

    /// Both sides of `E_{|B|=u+1} Ent(f|B) - (u+1) E_i Ent(f|i) =
    /// sum_{s<=u} (u-s+1) t_s` for `u = 1..n-1`.
    pub fn t_profile_identity(&self) -> Result<Vec<(f64, f64)>> {
        let n = self.n();
        let profile = self.t_profile()?;
        let single = self.size_average(1, |b| self.ent(b));
        Ok((1..n)
            .map(|u| {
                let lhs = self.size_average(u + 1, |b| self.ent(b)) - (u + 1) as f64 * single;
                let rhs = (1..=u)
                    .map(|s| (u - s + 1) as f64 * profile.t[s - 1])
                    .sum();
                (lhs, rhs)
            })
            .collect())
    }

    /// `a_t = E_{|T|=t} H(X_T) / t` for `t = 1..n`.
    pub fn han_profile(&self) -> Result<Vec<f64>> {
        self.shannon(SubsetMask::EMPTY)?;
        let n = self.n();
        Ok((1..=n)
            .map(|t| self.size_average(t, |b| self.shannon(b).unwrap_or(0.0)) / t as f64)
            .collect())
    }

    /// Boundary data of `(A, m)`; see [`y_boundary`].
    pub fn boundary(&self, a: SubsetMask, m: usize) -> Result<BoundaryData> {
        check_set_and_coord(self.f, a, m)?;
        Ok(boundary_from(|s| self.ent(s), a, m))
    }
}

/// Average of `g(B)` over `|B| = u`, `B ⊆ [n]`.
pub fn size_average(n: usize, u: usize, mode: AveragingMode, g: impl Fn(SubsetMask) -> f64) -> f64 {
    match mode {
        AveragingMode::Exact => {
            let total: f64 = fixed_size(n, u).map(&g).sum();
            total / binomial(n as u64, u as u64)
        }
        AveragingMode::Sampled { samples, seed } => {
            let mut rng = seeded_rng(seed ^ (u as u64).wrapping_mul(0x2545_F491));
            let mut coords: Vec<usize> = (0..n).collect();
            let mut acc = 0.0;
            for _ in 0..samples {
                let (pick, _) = coords.partial_shuffle(&mut rng, u);
                acc += g(SubsetMask::from_coords(pick.iter().copied()));
            }
            acc / samples as f64
        }
    }
}

/// `E_T g(T)` where `T ⊆ [n]` contains each coordinate independently with
/// probability `p`.
pub fn bernoulli_average(n: usize, p: f64, mode: AveragingMode, g: impl Fn(SubsetMask) -> f64) -> f64 {
    match mode {
        AveragingMode::Exact => {
            let weights: Vec<f64> = (0..=n)
                .map(|j| p.powi(j as i32) * (1.0 - p).powi((n - j) as i32))
                .collect();
            (0..1u32 << n)
                .map(|t| {
                    let w = weights[t.count_ones() as usize];
                    if w == 0.0 {
                        0.0
                    } else {
                        w * g(SubsetMask(t))
                    }
                })
                .sum()
        }
        AveragingMode::Sampled { samples, seed } => {
            let mut rng = seeded_rng(seed ^ 0x5DEE_CE66);
            let mut acc = 0.0;
            for _ in 0..samples {
                let t = (0..n).filter(|_| rng.random::<f64>() < p);
                acc += g(SubsetMask::from_coords(t));
            }
            acc / samples as f64
        }
    }
}

/// `H(X)` for the distribution `p(x) = f(x) 2^{-n}`; requires `E f = 1`.
pub fn shannon_entropy(f: &CubeFunction) -> Result<f64> {
    f.ensure_nonnegative()?;
    let mean = f.mean();
    if (mean - 1.0).abs() > 1e-12 {
        return Err(domain(format!("expected E f = 1, got {mean}")));
    }
    let scale = 1.0 / f.len() as f64;
    Ok(-f.values().iter().map(|&v| xlog2x(v * scale)).sum::<f64>())
}

/// `H(X_A)` for the distribution `f / sum f`; `f` is normalized internally.
pub fn marginal_shannon_entropy(f: &CubeFunction, a: SubsetMask) -> Result<f64> {
    f.ensure_nonnegative()?;
    f.ensure_mask(a)?;
    if f.mean() <= 0.0 {
        return Err(domain("the zero function induces no distribution"));
    }
    Ok(shannon_direct(f, a))
}

fn check_set_and_coord(f: &CubeFunction, a: SubsetMask, m: usize) -> Result<()> {
    f.ensure_mask(a)?;
    f.ensure_coord(m)?;
    if a.contains(m) {
        return Err(argument(format!("coordinate {m} lies in {a:?}")));
    }
    Ok(())
}

/// `I_f(A, m) = Ent(f | A ∪ m) - Ent(f | A) - Ent(f | m)`, for `m ∉ A`.
pub fn mutual_info_sets(f: &CubeFunction, a: SubsetMask, m: usize) -> Result<f64> {
    f.ensure_nonnegative()?;
    check_set_and_coord(f, a, m)?;
    let e = |s| cond_ent_direct(f, s);
    Ok(e(a.with(m)) - e(a) - e(SubsetMask::singleton(m)))
}

/// `Z_{S;i,j} = Ent(f|S+i+j) - Ent(f|S+i) - Ent(f|S+j) + Ent(f|S)`.
pub fn z_quantity(f: &CubeFunction, s: SubsetMask, i: usize, j: usize) -> Result<f64> {
    f.ensure_nonnegative()?;
    check_set_and_coord(f, s, i)?;
    check_set_and_coord(f, s, j)?;
    if i == j {
        return Err(argument("Z needs two distinct directions"));
    }
    let e = |a| cond_ent_direct(f, a);
    Ok((e(s.with(i).with(j)) + e(s)) - (e(s.with(i)) + e(s.with(j))))
}

/// Averaged second differences `t_s = E Z_{S;i,j}` over `|S| = s-1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TProfile {
    /// `t[s-1] = t_s` for `s = 1..n-1`.
    pub t: Vec<f64>,
    pub mode: AveragingMode,
}

pub fn t_profile(f: &CubeFunction, mode: AveragingMode) -> Result<TProfile> {
    EntropyOracle::new(f, mode)?.t_profile()
}

/// Boundary data `y_{S,i}` for `i ∈ S ⊆ [k]`, stored densely.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "BoundaryJson", try_from = "BoundaryJson")]
pub struct BoundaryData {
    k: usize,
    y: Vec<f64>,
}

/// Largest `k` accepted for boundary data.
pub const MAX_BOUNDARY_K: usize = 12;

#[derive(Serialize, Deserialize)]
struct BoundaryJson {
    k: usize,
    entries: Vec<BoundaryEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEntry {
    #[serde(rename = "S")]
    pub s: SubsetMask,
    pub i: usize,
    pub y: f64,
}

impl From<BoundaryData> for BoundaryJson {
    fn from(b: BoundaryData) -> Self {
        BoundaryJson {
            k: b.k,
            entries: b.entries().collect(),
        }
    }
}

impl TryFrom<BoundaryJson> for BoundaryData {
    type Error = Error;

    fn try_from(j: BoundaryJson) -> Result<Self> {
        let mut b = BoundaryData::zeros(j.k)?;
        let mut seen = vec![false; b.y.len()];
        for e in j.entries {
            b.set(e.s, e.i, e.y)?;
            seen[b.slot(e.s, e.i)] = true;
        }
        let missing = b.pairs().find(|&(s, i)| !seen[b.slot(s, i)]);
        if let Some((s, i)) = missing {
            return Err(Error::Format(format!("boundary entry for S = {s:?}, i = {i} is missing")));
        }
        Ok(b)
    }
}

impl BoundaryData {
    pub fn zeros(k: usize) -> Result<Self> {
        if k == 0 || k > MAX_BOUNDARY_K {
            return Err(argument(format!("boundary size k = {k} must be in 1..={MAX_BOUNDARY_K}")));
        }
        Ok(BoundaryData {
            k,
            y: vec![0.0; k << k],
        })
    }

    /// `y_{S,i} = I(S) - I(S - i)` for a set function given by `values[S]`.
    /// Such data is path-consistent: every ordering of `[k]` telescopes to
    /// `I([k]) - I(∅)`.
    pub fn from_set_function(k: usize, values: &[f64]) -> Result<Self> {
        let mut b = BoundaryData::zeros(k)?;
        if values.len() != 1 << k {
            return Err(argument("set function needs 2^k values"));
        }
        for (s, i) in b.pairs().collect::<Vec<_>>() {
            let v = values[s.0 as usize] - values[s.without(i).0 as usize];
            b.set(s, i, v)?;
        }
        Ok(b)
    }

    /// Symmetric data `y_{S,i} = y_{|S|}`; `profile[s-1] = y_s`.
    pub fn symmetric(profile: &[f64]) -> Result<Self> {
        let mut b = BoundaryData::zeros(profile.len())?;
        for (s, i) in b.pairs().collect::<Vec<_>>() {
            b.set(s, i, profile[s.len() - 1])?;
        }
        Ok(b)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    fn slot(&self, s: SubsetMask, i: usize) -> usize {
        (s.0 as usize) * self.k + i
    }

    fn check(&self, s: SubsetMask, i: usize) -> Result<()> {
        if !s.fits(self.k) || !s.contains(i) {
            return Err(argument(format!("({s:?}, {i}) is not a boundary index for k = {}", self.k)));
        }
        Ok(())
    }

    /// `y_{S,i}`; panics unless `i ∈ S ⊆ [k]`.
    #[inline]
    pub fn get(&self, s: SubsetMask, i: usize) -> f64 {
        assert!(s.fits(self.k) && s.contains(i), "bad boundary index");
        self.y[self.slot(s, i)]
    }

    pub fn try_get(&self, s: SubsetMask, i: usize) -> Result<f64> {
        self.check(s, i)?;
        Ok(self.y[self.slot(s, i)])
    }

    pub fn set(&mut self, s: SubsetMask, i: usize, v: f64) -> Result<()> {
        self.check(s, i)?;
        if !v.is_finite() {
            return Err(domain("boundary values must be finite"));
        }
        let slot = self.slot(s, i);
        self.y[slot] = v;
        Ok(())
    }

    /// All index pairs `(S, i)`, `S` increasing, then `i` increasing.
    pub fn pairs(&self) -> impl Iterator<Item = (SubsetMask, usize)> {
        (1u32..1 << self.k).flat_map(|s| SubsetMask(s).iter().map(move |i| (SubsetMask(s), i)))
    }

    pub fn entries(&self) -> impl Iterator<Item = BoundaryEntry> + '_ {
        self.pairs().map(|(s, i)| BoundaryEntry {
            s,
            i,
            y: self.get(s, i),
        })
    }

    /// The data restricted to subsets of `m`, with the coordinates of `m`
    /// relabelled `0..|m|` in increasing order.
    pub fn restrict(&self, m: SubsetMask) -> Result<BoundaryData> {
        if !m.fits(self.k) {
            return Err(argument(format!("{m:?} is not a subset of [{}]", self.k)));
        }
        let mut out = BoundaryData::zeros(m.len())?;
        let coords: Vec<usize> = m.iter().collect();
        for (s, i) in out.pairs().collect::<Vec<_>>() {
            let v = self.get(SubsetMask(expand(s.0 as usize, m) as u32), coords[i]);
            let slot = out.slot(s, i);
            out.y[slot] = v;
        }
        Ok(out)
    }

    pub fn min_value(&self) -> f64 {
        self.entries().map(|e| e.y).fold(f64::INFINITY, f64::min)
    }

    /// `sum_i y_{σ(1..i), σ(i)}` along the ordering `order` of `[k]`.
    pub fn path_sum(&self, order: &[usize]) -> f64 {
        let mut prefix = SubsetMask::EMPTY;
        order
            .iter()
            .map(|&i| {
                prefix = prefix.with(i);
                self.get(prefix, i)
            })
            .sum()
    }
}

fn boundary_from(ent: impl Fn(SubsetMask) -> f64, a: SubsetMask, m: usize) -> BoundaryData {
    let k = a.len();
    let mut b = BoundaryData::zeros(k).expect("caller bounds k");
    let ms = SubsetMask::singleton(m);
    let pairs: Vec<_> = b.pairs().collect();
    for (s, i) in pairs {
        let big = SubsetMask(expand(s.0 as usize, a) as u32);
        let small = SubsetMask(expand(s.without(i).0 as usize, a) as u32);
        let v = ent(big | ms) - ent(small | ms) - ent(big) + ent(small);
        let slot = b.slot(s, i);
        b.y[slot] = v;
    }
    b
}

/// `y_{S,i} = Ent(f|S+m) - Ent(f|S-i+m) - Ent(f|S) + Ent(f|S-i)` for
/// `i ∈ S ⊆ A`, with the coordinates of `A` relabelled `0..k` in increasing
/// order. Each `y_{S,i}` equals `Z_{S-i; i, m}`.
pub fn y_boundary(f: &CubeFunction, a: SubsetMask, m: usize) -> Result<BoundaryData> {
    f.ensure_nonnegative()?;
    check_set_and_coord(f, a, m)?;
    if a.is_empty() || a.len() > MAX_BOUNDARY_K {
        return Err(argument(format!("|A| = {} must be in 1..={MAX_BOUNDARY_K}", a.len())));
    }
    Ok(boundary_from(|s| cond_ent_direct(f, s), a, m))
}

/// `y_s = E_{|S|=s, i∈S} y_{S,i}` for `s = 1..k`.
pub fn y_avg_profile(b: &BoundaryData) -> Vec<f64> {
    (1..=b.k())
        .map(|s| {
            // Offsetting by one member keeps constant layers exact.
            let mut layer = b.entries().filter(|e| e.s.len() == s).map(|e| e.y);
            let base = layer.next().expect("every layer is nonempty");
            let (dev, count) = layer.fold((0.0, 1usize), |(d, c), y| (d + (y - base), c + 1));
            base + dev / count as f64
        })
        .collect()
}

/// `I(f(X); Y) = Ent(T f) + Ent(T (1 - f))` for boolean `f`, `X` uniform and
/// `Y` its image through the binary symmetric channel.
pub fn bool_mutual_information(f: &CubeFunction, noise: NoiseParam) -> Result<f64> {
    f.ensure_boolean()?;
    Ok(f.noise(noise).entropy_or_zero()? + f.one_minus().noise(noise).entropy_or_zero()?)
}

/// `H2(E f) - E_y H2((T f)(y))`, the same quantity as
/// [`bool_mutual_information`] by a second route.
pub fn bool_mutual_information_h2(f: &CubeFunction, noise: NoiseParam) -> Result<f64> {
    f.ensure_boolean()?;
    let tf = f.noise(noise);
    let avg = tf.values().iter().map(|&v| h2(v.clamp(0.0, 1.0))).sum::<f64>() / tf.len() as f64;
    Ok(h2(f.mean()) - avg)
}

/// `I(f(X); X_T) = H2(E f) - E H2(E(f | T))` for boolean `f`.
pub fn subset_information(f: &CubeFunction, t: SubsetMask) -> Result<f64> {
    f.ensure_boolean()?;
    f.ensure_mask(t)?;
    let m = f.marginal(t);
    let avg = m.iter().map(|&v| h2(v.clamp(0.0, 1.0))).sum::<f64>() / m.len() as f64;
    Ok((h2(f.mean()) - avg).max(0.0))
}

/// `1 - H2(eps)`, the conjectured maximum of `I(f(X); Y)`.
pub fn ck_bound(noise: NoiseParam) -> f64 {
    1.0 - h2(noise.eps())
}
