//! Exhaustive maximization of `I(f(X); Y)` over boolean `f` on small cubes.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cube::{CubeFunction, NoiseParam};
use crate::error::{argument, Result};
use crate::info::{bool_mutual_information, ck_bound};
use crate::verify::report::CheckReport;
use crate::verify::{elapsed_ms, Ctx, Tamper};

pub const CK_MAX_N: usize = 4;
/// Values within this distance of the maximum count as maximizers.
pub const MAXIMIZER_TOL: f64 = 1e-12;
/// Required agreement between the maximum and `1 - H2(eps)`.
pub const CK_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CkSearch {
    pub n: usize,
    pub eps: f64,
    pub max: f64,
    pub bound: f64,
    /// `bound - max`.
    pub margin: f64,
    /// Truth tables (bit `x` is `f(x)`) of every maximizer, ascending.
    pub maximizers: Vec<u64>,
    /// Whether the maximizers are exactly the dictators and their complements.
    pub dictator_type: bool,
    /// Whether the maximizers are the expected set: dictator-type for
    /// `0 < eps < 1/2`, balanced functions at `eps = 0`, everything at `1/2`.
    pub as_expected: bool,
    pub functions: u64,
    pub runtime_ms: u64,
}

/// Truth tables of `g_k` and `1 - g_k` for every `k`, ascending.
pub fn dictator_tables(n: usize) -> Vec<u64> {
    let full = (1u64 << (1 << n)) - 1;
    let mut out: Vec<u64> = (0..n)
        .flat_map(|k| {
            let g = (0..1usize << n)
                .filter(|x| x >> k & 1 == 0)
                .fold(0u64, |t, x| t | 1 << x);
            [g, full ^ g]
        })
        .collect();
    out.sort_unstable();
    out
}

/// Truth tables attaining the maximum when the channel is degenerate or not.
pub fn expected_maximizers(n: usize, eps: f64) -> Vec<u64> {
    let points = 1u32 << n;
    let all = 0..1u64 << points;
    if eps == 0.0 {
        all.filter(|t| t.count_ones() * 2 == points).collect()
    } else if eps == 0.5 {
        all.collect()
    } else {
        dictator_tables(n)
    }
}

/// Enumerates every boolean function with `f(0) = 0` and adds complements,
/// which share the same value.
pub fn ck_exhaustive_search(n: usize, noise: NoiseParam) -> Result<CkSearch> {
    ck_search_with(&Ctx::default(), n, noise)
}

pub fn ck_search_with(ctx: &Ctx, n: usize, noise: NoiseParam) -> Result<CkSearch> {
    if n == 0 || n > CK_MAX_N {
        return Err(argument(format!("exhaustive search needs 1 <= n <= {CK_MAX_N}, got {n}")));
    }
    let start = Instant::now();
    let points = 1usize << n;
    let full = (1u64 << points) - 1;
    let half = 1u64 << (points - 1);
    let mut values = Vec::with_capacity(half as usize);
    for j in 0..half {
        let f = CubeFunction::from_truth_table(n, j << 1)?;
        values.push(ctx.bump(Tamper::MutualInfo, bool_mutual_information(&f, noise)?));
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut maximizers: Vec<u64> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= max - MAXIMIZER_TOL)
        .flat_map(|(j, _)| {
            let t = (j as u64) << 1;
            [t, full ^ t]
        })
        .collect();
    maximizers.sort_unstable();
    let bound = ctx.bump(Tamper::CkBound, ck_bound(noise));
    let dictator_type = maximizers == dictator_tables(n);
    let as_expected = maximizers == expected_maximizers(n, noise.eps());
    Ok(CkSearch {
        n,
        eps: noise.eps(),
        max,
        bound,
        margin: bound - max,
        maximizers,
        dictator_type,
        as_expected,
        functions: 2 * half,
        runtime_ms: elapsed_ms(start),
    })
}

impl CkSearch {
    /// `ck-max` (maximum equals the bound) and `ck-maximizers` (the expected
    /// maximizer set).
    pub fn reports(&self) -> Vec<CheckReport> {
        let details = json!({
            "maximizers": self.maximizers,
            "functions": self.functions,
        });
        [
            CheckReport::identity("ck-max", self.max, self.bound, CK_TOL),
            CheckReport::flag("ck-maximizers", self.as_expected).with_details(details),
        ]
        .into_iter()
        .map(|r| r.with_n(self.n).with_eps(self.eps).with_runtime(self.runtime_ms))
        .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dictator_tables_small() {
        assert_eq!(dictator_tables(1), vec![0b01, 0b10]);
        assert_eq!(dictator_tables(2), vec![0b0011, 0b0101, 0b1010, 0b1100]);
    }

    #[test]
    fn small_cubes() {
        for n in 1..=3 {
            for eps in [0.1, 0.4] {
                let s = ck_exhaustive_search(n, NoiseParam::new(eps).unwrap()).unwrap();
                assert!(s.dictator_type, "{s:?}");
                assert!(s.margin.abs() < 1e-10);
                assert_eq!(s.maximizers.len(), 2 * n);
                assert_eq!(s.functions, 1 << (1 << n));
            }
        }
    }

    #[test]
    fn degenerate_channels() {
        let clean = ck_exhaustive_search(2, NoiseParam::new(0.0).unwrap()).unwrap();
        assert!(clean.as_expected && !clean.dictator_type);
        assert_eq!(clean.maximizers.len(), 6);
        assert!((clean.max - 1.0).abs() < 1e-15);
        let dead = ck_exhaustive_search(2, NoiseParam::new(0.5).unwrap()).unwrap();
        assert!(dead.as_expected && dead.max.abs() < 1e-15);
    }

    #[test]
    fn rejects_large_n() {
        assert!(ck_exhaustive_search(5, NoiseParam::new(0.3).unwrap()).is_err());
        assert!(ck_exhaustive_search(0, NoiseParam::new(0.3).unwrap()).is_err());
    }

    #[test]
    fn tamper_breaks_the_bound_report() {
        let s = ck_search_with(&Ctx::tampered(Tamper::CkBound), 2, NoiseParam::new(0.3).unwrap()).unwrap();
        assert!(!s.reports()[0].pass);
    }
}
