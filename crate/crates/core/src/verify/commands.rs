//! Seeded sweeps behind the `verify` subcommands.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cube::{CubeFunction, NoiseParam};
use crate::error::{argument, Error, Result};
use crate::info::{AveragingMode, BoundaryData};
use crate::lp::program::MAX_SOLVE_K;
use crate::lp::{build_lp, feasible_from_function, LpProblem};
use crate::random::{random_boolean, random_consistent_boundary, random_density, random_iid_boundary, random_nonneg, seeded_rng};
use crate::subsets::SubsetMask;
use crate::verify::chain::{chain_from_boundary, chain_from_function, layer_chain, BoundaryClass};
use crate::verify::checks::{
    check_corollary_info_app, check_corollary_streamline, check_entropy_bridge, check_equality_case, check_lemma_h_entr,
    check_lemma_noisy_ts, check_mgl, check_smgl, check_theorem_main, JOINT_LIMIT,
};
use crate::verify::report::CheckReport;
use crate::verify::suite::{aggregate_cells, instance_seed};
use crate::verify::Ctx;

/// A single checker that `verify theorem` can sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Mgl,
    Main,
    Streamline,
    Smgl,
    NoisyTs,
    InfoApp,
    LemmaHEntr,
    EntropyBridge,
    Equality,
}

impl Theorem {
    pub const ALL: [Theorem; 9] = [
        Theorem::Mgl,
        Theorem::Main,
        Theorem::Streamline,
        Theorem::Smgl,
        Theorem::NoisyTs,
        Theorem::InfoApp,
        Theorem::LemmaHEntr,
        Theorem::EntropyBridge,
        Theorem::Equality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Mgl => "mgl",
            Theorem::Main => "main",
            Theorem::Streamline => "streamline",
            Theorem::Smgl => "smgl",
            Theorem::NoisyTs => "noisy-ts",
            Theorem::InfoApp => "info-app",
            Theorem::LemmaHEntr => "lemma-h-entr",
            Theorem::EntropyBridge => "entropy-bridge",
            Theorem::Equality => "equality",
        }
    }

    /// Reports for one seeded instance.
    fn instance(self, ctx: &Ctx, n: usize, noise: NoiseParam, seed: u64) -> Result<Vec<CheckReport>> {
        let mut rng = seeded_rng(seed);
        let mode = AveragingMode::auto(n, seed);
        let out = match self {
            Theorem::Mgl => vec![check_mgl(ctx, &random_nonneg(n, &mut rng)?, noise)?],
            Theorem::Main => check_theorem_main(ctx, &random_density(n, &mut rng)?, noise, mode)?,
            Theorem::Streamline => vec![check_corollary_streamline(ctx, &random_density(n, &mut rng)?, noise, mode)?],
            Theorem::Smgl => check_smgl(ctx, &random_density(n, &mut rng)?, noise, mode)?,
            Theorem::NoisyTs => check_lemma_noisy_ts(ctx, &random_density(n, &mut rng)?, noise, mode)?,
            Theorem::InfoApp => check_corollary_info_app(ctx, &random_boolean(n, &mut rng)?, noise)?,
            Theorem::LemmaHEntr => vec![check_lemma_h_entr(ctx, &random_boolean(n, &mut rng)?, noise)?],
            Theorem::EntropyBridge => vec![check_entropy_bridge(ctx, &random_density(n, &mut rng)?)?],
            Theorem::Equality => {
                let mut out = Vec::new();
                for k in 0..n {
                    out.extend(check_equality_case(ctx, n, k, noise)?);
                }
                return Ok(out);
            }
        };
        Ok(out.into_iter().map(|r| r.with_seed(seed)).collect())
    }

    fn validate(self, n: usize) -> Result<()> {
        let joint = matches!(self, Theorem::LemmaHEntr);
        if n == 0 || (joint && n > JOINT_LIMIT) || (matches!(self, Theorem::NoisyTs) && n < 2) {
            return Err(argument(format!("{} does not accept n = {n}", self.name())));
        }
        Ok(())
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Theorem::ALL.iter().map(|t| t.name()).collect();
                argument(format!("unknown theorem {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Every instance report of `trials` seeded functions at `(n, eps)`.
pub fn theorem_sweep(ctx: &Ctx, theorem: Theorem, n: usize, eps: f64, trials: usize, seed: u64) -> Result<Vec<CheckReport>> {
    theorem.validate(n)?;
    let noise = NoiseParam::new(eps)?;
    let trials = if theorem == Theorem::Equality { 1 } else { trials };
    let mut out = Vec::new();
    for index in 0..trials as u64 {
        out.extend(theorem.instance(ctx, n, noise, instance_seed(seed, theorem.name(), index))?);
    }
    Ok(out)
}

/// `mgl`, `smgl` or `main` over an `n` range and `eps` grid, one aggregated
/// report per `(check, n, eps)` unless `per_instance`.
pub fn bound_sweep(
    ctx: &Ctx,
    bound: Theorem,
    n_range: RangeInclusive<usize>,
    eps_grid: &[f64],
    trials: usize,
    seed: u64,
    per_instance: bool,
) -> Result<Vec<CheckReport>> {
    if !matches!(bound, Theorem::Mgl | Theorem::Smgl | Theorem::Main) {
        return Err(argument(format!("sweep bound must be mgl, smgl or main, got {bound}")));
    }
    let mut out = Vec::new();
    for n in n_range {
        for &eps in eps_grid {
            let cell_seed = instance_seed(seed, "sweep-cell", (n as u64) << 32 | eps.to_bits() >> 32);
            out.extend(theorem_sweep(ctx, bound, n, eps, trials, cell_seed)?);
        }
    }
    Ok(if per_instance { out } else { aggregate_cells(out) })
}

/// Parses `a..b` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>> {
    let bad = || argument(format!("expected a range like 3..8, got {s:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

/// Where the boundary data of `verify lp` comes from.
#[derive(Clone, Debug)]
pub enum LpSource {
    /// All-zero boundary.
    Zero,
    /// Gradient of a seeded random set function.
    Random { seed: u64 },
    /// Independent uniform entries.
    RandomIid { seed: u64 },
    /// Data of `f` with `A = {1..k}` and `m = k + 1`.
    Function(CubeFunction),
}

/// The chain reports for one program instance, plus the program itself.
pub fn lp_instance(ctx: &Ctx, k: usize, lambda: f64, source: &LpSource) -> Result<(LpProblem, Vec<CheckReport>)> {
    if k == 0 || k > MAX_SOLVE_K {
        return Err(argument(format!("k must be in 1..={MAX_SOLVE_K}, got {k}")));
    }
    let boundary = |b: BoundaryData, class: BoundaryClass, seed: Option<u64>| -> Result<(LpProblem, Vec<CheckReport>)> {
        let mut reports = chain_from_boundary(ctx, &b, lambda, class)?;
        if class == BoundaryClass::Consistent {
            reports.extend(layer_chain(ctx, &b, lambda)?);
        }
        let reports = match seed {
            Some(s) => reports.into_iter().map(|r| r.with_seed(s)).collect(),
            None => reports,
        };
        Ok((build_lp(&b, lambda)?, reports))
    };
    match source {
        LpSource::Zero => boundary(BoundaryData::zeros(k)?, BoundaryClass::Consistent, None),
        LpSource::Random { seed } => {
            boundary(random_consistent_boundary(k, &mut seeded_rng(*seed))?, BoundaryClass::Consistent, Some(*seed))
        }
        LpSource::RandomIid { seed } => {
            boundary(random_iid_boundary(k, &mut seeded_rng(*seed))?, BoundaryClass::Iid, Some(*seed))
        }
        LpSource::Function(f) => {
            if f.n() <= k {
                return Err(argument(format!("a function on n = {} coordinates needs n > k = {k}", f.n())));
            }
            let noise = NoiseParam::from_lambda(lambda)?;
            let a = SubsetMask::from_coords(0..k);
            let reports = chain_from_function(ctx, f, a, k, noise)?;
            let data = feasible_from_function(f, a, k, noise)?;
            Ok((data.problem, reports))
        }
    }
}
