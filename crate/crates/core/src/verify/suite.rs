//! The configurable suite: every checker and battery over a seeded sweep,
//! aggregated into one report per `(check, n, eps)` cell.

use std::collections::HashMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::NoiseParam;
use crate::error::{Error, Result};
use crate::info::AveragingMode;
use crate::random::{
    random_boolean, random_consistent_boundary, random_density, random_iid_boundary, random_nonneg, seeded_rng,
};
use crate::subsets::SubsetMask;
use crate::verify::battery;
use crate::verify::chain::{chain_from_boundary, chain_from_function, layer_chain, BoundaryClass};
use crate::verify::checks::{
    check_corollary_info_app, check_equality_case, check_lemma_h_entr, check_lemma_noisy_ts, check_mgl,
    check_smgl, check_theorem_main, JOINT_LIMIT,
};
use crate::verify::ck::{ck_search_with, CK_MAX_N};
use crate::verify::report::{aggregate, sort_reports, CheckReport};
use crate::verify::{Ctx, Tamper, Tolerances};

/// Largest `n` a suite may sweep.
pub const SUITE_MAX_N: usize = 14;
/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "VERIFY_THREADS";
pub const LP_LAMBDAS: [f64; 3] = [0.1, 0.5, 0.9];
/// Dimension of the function instances of the program chain.
pub const CHAIN_N: usize = 5;

pub const SUBSTITUTION_NOTE: &str = "The high-noise theorems depend on an unspecified absolute constant and \
are not checked as stated. The exhaustive search over all boolean functions at small n (ck-max, \
ck-maximizers) is the substituted empirical evidence.";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub eps_grid: Vec<f64>,
    /// Random functions per `(n, eps)` cell for the classical lemma.
    pub mgl_trials: usize,
    /// Random functions per theorem, spread over the cells.
    pub trials: usize,
    /// Instances per program-chain family.
    pub lp_trials: usize,
    /// Instances per property sweep.
    pub property_trials: usize,
    /// Dimension of the exhaustive search; 0 disables it.
    pub ck_n: usize,
    pub ck_eps: Vec<f64>,
    pub tolerances: Tolerances,
    pub tamper: Option<Tamper>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 20_240_601,
            n_min: 3,
            n_max: 8,
            eps_grid: vec![0.1, 0.25, 0.4, 0.45, 0.49],
            mgl_trials: 1000,
            trials: 500,
            lp_trials: 200,
            property_trials: 1000,
            ck_n: 4,
            ck_eps: vec![0.3, 0.4, 0.45, 0.49],
            tolerances: Tolerances::default(),
            tamper: None,
        }
    }
}

fn line_of(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key)
            .is_some_and(|rest| rest.trim_start().starts_with('='))
    })
}

impl SuiteConfig {
    /// Parses TOML; both syntax and validation errors name the offending line.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SuiteConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate().map_err(|(key, msg)| {
            let at = line_of(text, key).map_or_else(String::new, |l| format!("line {}: ", l + 1));
            Error::Config(format!("{at}{key}: {msg}"))
        })?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        SuiteConfig::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(("n_min", format!("need 1 <= n_min <= n_max, got {}..{}", self.n_min, self.n_max)));
        }
        if self.n_max > SUITE_MAX_N {
            return Err(("n_max", format!("must be at most {SUITE_MAX_N}")));
        }
        if self.eps_grid.is_empty() {
            return Err(("eps_grid", "must not be empty".into()));
        }
        for (key, grid) in [("eps_grid", &self.eps_grid), ("ck_eps", &self.ck_eps)] {
            if let Some(e) = grid.iter().find(|e| !(0.0..=0.5).contains(*e)) {
                return Err((key, format!("{e} is outside [0, 1/2]")));
            }
        }
        if self.ck_n > CK_MAX_N {
            return Err(("ck_n", format!("must be at most {CK_MAX_N}")));
        }
        let t = self.tolerances;
        if [t.identity, t.inequality, t.lp].iter().any(|v| !(*v >= 0.0)) {
            return Err(("tolerances", "must be nonnegative".into()));
        }
        Ok(())
    }

    fn ctx(&self) -> Ctx {
        Ctx {
            tol: self.tolerances,
            tamper: self.tamper,
        }
    }

    fn cells(&self) -> Vec<(usize, f64)> {
        (self.n_min..=self.n_max)
            .flat_map(|n| self.eps_grid.iter().map(move |&e| (n, e)))
            .collect()
    }
}

/// Seed of instance `index` of the family `tag`.
pub fn instance_seed(base: u64, tag: &str, index: u64) -> u64 {
    let mut h = tag.bytes().fold(0xcbf2_9ce4_8422_2325_u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    h ^= base.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index;
    // splitmix64 finalizer
    h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    h ^ (h >> 31)
}

#[derive(Clone, Copy, Debug)]
enum Job {
    Equality { n: usize, k: usize, eps: f64 },
    Mgl { n: usize, eps: f64, index: u64 },
    Theorem { n: usize, eps: f64, index: u64 },
    InfoApp { n: usize, eps: f64, index: u64 },
    Ck { eps: f64 },
    ChainFunction { index: u64 },
    ChainBoundary { index: u64, class: BoundaryClass },
    Layer { index: u64 },
    Identities,
    Properties,
    PhiAnalytics,
    Invariants,
}

fn jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut out = Vec::new();
    for n in 1..=cfg.n_max {
        for k in 0..n {
            for &eps in &cfg.eps_grid {
                out.push(Job::Equality { n, k, eps });
            }
        }
    }
    let cells = cfg.cells();
    let mut index = 0u64;
    for &(n, eps) in &cells {
        for _ in 0..cfg.mgl_trials {
            out.push(Job::Mgl { n, eps, index });
            index += 1;
        }
    }
    index = 0;
    for (c, &(n, eps)) in cells.iter().enumerate() {
        let count = cfg.trials / cells.len() + usize::from(c < cfg.trials % cells.len());
        for _ in 0..count {
            out.push(Job::Theorem { n, eps, index });
            if n <= JOINT_LIMIT {
                out.push(Job::InfoApp { n, eps, index });
            }
            index += 1;
        }
    }
    if cfg.ck_n > 0 {
        out.extend(cfg.ck_eps.iter().map(|&eps| Job::Ck { eps }));
    }
    for i in 0..cfg.lp_trials as u64 {
        out.push(Job::ChainFunction { index: i });
        out.push(Job::ChainBoundary { index: i, class: BoundaryClass::Consistent });
    }
    for i in 0..(cfg.lp_trials / 4) as u64 {
        out.push(Job::ChainBoundary { index: i, class: BoundaryClass::Iid });
    }
    for i in 0..(cfg.lp_trials / 10).max(1) as u64 {
        out.push(Job::Layer { index: i });
    }
    out.extend([Job::Identities, Job::Properties, Job::PhiAnalytics, Job::Invariants]);
    out
}

fn noise(eps: f64) -> Result<NoiseParam> {
    NoiseParam::new(eps)
}

fn run_job(cfg: &SuiteConfig, ctx: &Ctx, job: Job) -> Result<Vec<CheckReport>> {
    let seed = |tag: &str, i: u64| instance_seed(cfg.seed, tag, i);
    let seeded = |reports: Vec<CheckReport>, s: u64| reports.into_iter().map(|r| r.with_seed(s)).collect();
    Ok(match job {
        Job::Equality { n, k, eps } => check_equality_case(ctx, n, k, noise(eps)?)?,
        Job::Mgl { n, eps, index } => {
            let s = seed("mgl", index);
            let f = random_nonneg(n, &mut seeded_rng(s))?;
            seeded(vec![check_mgl(ctx, &f, noise(eps)?)?], s)
        }
        Job::Theorem { n, eps, index } => {
            let s = seed("theorem", index);
            let f = random_density(n, &mut seeded_rng(s))?;
            let mode = AveragingMode::auto(n, s);
            let e = noise(eps)?;
            let mut out = check_theorem_main(ctx, &f, e, mode)?;
            out.extend(check_smgl(ctx, &f, e, mode)?);
            if n >= 2 {
                out.extend(check_lemma_noisy_ts(ctx, &f, e, mode)?);
            }
            seeded(out, s)
        }
        Job::InfoApp { n, eps, index } => {
            let s = seed("boolean", index);
            let f = random_boolean(n, &mut seeded_rng(s))?;
            let mut out = check_corollary_info_app(ctx, &f, noise(eps)?)?;
            out.push(check_lemma_h_entr(ctx, &f, noise(eps)?)?);
            seeded(out, s)
        }
        Job::Ck { eps } => ck_search_with(ctx, cfg.ck_n, noise(eps)?)?.reports(),
        Job::ChainFunction { index } => {
            let s = seed("chain-function", index);
            let mut rng = seeded_rng(s);
            let k = 2 + (index % 2) as usize;
            let mut coords: Vec<usize> = (0..CHAIN_N).collect();
            coords.shuffle(&mut rng);
            let a = SubsetMask::from_coords(coords[..k].iter().copied());
            let eps = cfg.eps_grid[index as usize % cfg.eps_grid.len()];
            let f = random_nonneg(CHAIN_N, &mut rng)?;
            seeded(chain_from_function(ctx, &f, a, coords[k], noise(eps)?)?, s)
        }
        Job::ChainBoundary { index, class } => {
            let tag = match class {
                BoundaryClass::Consistent => "boundary",
                BoundaryClass::Iid => "iid-boundary",
            };
            let s = seed(tag, index);
            let mut rng = seeded_rng(s);
            let k = 2 + (index % 3) as usize;
            let lambda = LP_LAMBDAS[(index / 3) as usize % 3];
            let b = match class {
                BoundaryClass::Consistent => random_consistent_boundary(k, &mut rng)?,
                BoundaryClass::Iid => random_iid_boundary(k, &mut rng)?,
            };
            seeded(chain_from_boundary(ctx, &b, lambda, class)?, s)
        }
        Job::Layer { index } => {
            let s = seed("layer", index);
            let mut rng = seeded_rng(s);
            let k = 2 + (index % 2) as usize;
            let lambda = LP_LAMBDAS[rng.random_range(0..3)];
            let b = random_consistent_boundary(k, &mut rng)?;
            seeded(layer_chain(ctx, &b, lambda)?, s)
        }
        Job::Identities => battery::identities(ctx, seed("identities", 0))?,
        Job::Properties => battery::properties(ctx, seed("properties", 0), cfg.property_trials)?,
        Job::PhiAnalytics => battery::phi_analytics(ctx),
        Job::Invariants => battery::invariants(ctx, seed("invariants", 0))?,
    })
}

/// Side-by-side comparison of the classical and the sharpened lemma.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundComparison {
    pub instances: usize,
    /// Instances where the sharpened bound is strictly smaller.
    pub smgl_tighter: usize,
    pub fraction: f64,
}

/// Solver outcomes on boundary vectors with i.i.d. entries.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IidSummary {
    pub instances: usize,
    pub optimal: usize,
    pub infeasible: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteHeader {
    pub version: String,
    pub substitution: String,
    pub averaging: String,
    pub smgl_vs_mgl: BoundComparison,
    pub lp_iid: IidSummary,
    pub threads: usize,
    pub instances: usize,
    pub reports: usize,
    pub failed: usize,
    pub pass: bool,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutput {
    pub header: SuiteHeader,
    pub config: SuiteConfig,
    pub reports: Vec<CheckReport>,
}

impl SuiteOutput {
    pub fn pass(&self) -> bool {
        self.header.pass
    }

    /// A `suite-header` report carrying the header and config as details;
    /// it passes iff every other report does.
    pub fn header_report(&self) -> CheckReport {
        CheckReport::flag("suite-header", self.header.pass)
            .with_note(self.header.substitution.clone())
            .with_runtime(self.header.runtime_ms)
            .with_details(serde_json::json!({ "header": self.header, "config": self.config }))
    }

    /// The header report followed by every aggregated report.
    pub fn report_array(&self) -> Vec<CheckReport> {
        std::iter::once(self.header_report()).chain(self.reports.iter().cloned()).collect()
    }

    /// JSON array of [`Self::report_array`].
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.report_array()).expect("suite output serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.reports.iter().filter(|r| !r.pass)
    }
}

/// Worker count from [`THREADS_VAR`], if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs the configured sweep on a pool capped by [`THREADS_VAR`].
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteOutput> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| run_suite_here(cfg))
}

/// Folds instance reports into one per `(name, n, eps)`, sorted by name.
pub fn aggregate_cells(reports: Vec<CheckReport>) -> Vec<CheckReport> {
    let mut keys: Vec<(String, Option<usize>, Option<u64>)> = Vec::new();
    let mut groups: HashMap<(String, Option<usize>, Option<u64>), Vec<CheckReport>> = HashMap::new();
    for r in reports {
        let key = (r.name.clone(), r.n, r.eps.map(f64::to_bits));
        groups
            .entry(key.clone())
            .or_insert_with(|| {
                keys.push(key);
                Vec::new()
            })
            .push(r);
    }
    let mut out: Vec<CheckReport> = keys
        .into_iter()
        .filter_map(|k| aggregate(groups.remove(&k).expect("key recorded")))
        .collect();
    sort_reports(&mut out);
    out
}

fn run_suite_here(cfg: &SuiteConfig) -> Result<SuiteOutput> {
    cfg.validate().map_err(|(k, m)| Error::Config(format!("{k}: {m}")))?;
    let start = Instant::now();
    let ctx = cfg.ctx();
    let jobs = jobs(cfg);
    let results: Vec<Result<Vec<CheckReport>>> = jobs.par_iter().map(|&j| run_job(cfg, &ctx, j)).collect();
    let mut all = Vec::new();
    for r in results {
        all.extend(r?);
    }

    let mut cmp = BoundComparison::default();
    let mut iid = IidSummary::default();
    for r in &all {
        match (r.name.as_str(), &r.details) {
            ("smgl", Some(d)) => {
                cmp.instances += 1;
                cmp.smgl_tighter += usize::from(d["smgl_tighter"].as_bool() == Some(true));
            }
            ("lp-iid-status", Some(d)) => {
                iid.instances += 1;
                match d["status"].as_str() {
                    Some("optimal") => iid.optimal += 1,
                    Some("infeasible") => iid.infeasible += 1,
                    _ => {}
                }
            }
            _ => {}
        }
    }
    if cmp.instances > 0 {
        cmp.fraction = cmp.smgl_tighter as f64 / cmp.instances as f64;
    }
    let instances = all.len();
    let reports = aggregate_cells(all);
    let failed = reports.iter().filter(|r| !r.pass).count();
    let header = SuiteHeader {
        version: env!("CARGO_PKG_VERSION").into(),
        substitution: SUBSTITUTION_NOTE.into(),
        averaging: format!(
            "subset averages by exact enumeration for n <= {}, otherwise sampled",
            crate::info::EXACT_LIMIT
        ),
        smgl_vs_mgl: cmp,
        lp_iid: iid,
        threads: rayon::current_num_threads(),
        instances,
        reports: reports.len(),
        failed,
        pass: failed == 0,
        runtime_ms: start.elapsed().as_millis() as u64,
    };
    Ok(SuiteOutput {
        header,
        config: cfg.clone(),
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            n_min: 3,
            n_max: 4,
            eps_grid: vec![0.2, 0.45],
            mgl_trials: 3,
            trials: 6,
            lp_trials: 6,
            property_trials: 20,
            ck_n: 2,
            ck_eps: vec![0.3],
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn parses_and_reports_lines() {
        let cfg = SuiteConfig::from_toml("seed = 5\nn_max = 6\n[tolerances]\nlp = 1e-6\n").unwrap();
        assert_eq!(cfg.seed, 5);
        assert_eq!(cfg.tolerances.lp, 1e-6);
        assert_eq!(cfg.tolerances.identity, 1e-9);
        let err = SuiteConfig::from_toml("seed = 1\nn_max = \"x\"\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = SuiteConfig::from_toml("seed = 1\n\neps_grid = [0.7]\n").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        let err = SuiteConfig::from_toml("sede = 1\n").unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
        let cfg = SuiteConfig::from_toml("tamper = \"w-weights\"\n").unwrap();
        assert_eq!(cfg.tamper, Some(Tamper::WWeights));
        assert_eq!(SuiteConfig::from_toml(&SuiteConfig::default().to_toml()).unwrap(), SuiteConfig::default());
    }

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let a = run_suite(&small()).unwrap();
        assert!(a.pass(), "{:?}", a.failures().collect::<Vec<_>>());
        let b = run_suite(&small()).unwrap();
        let strip = |o: &SuiteOutput| {
            o.reports
                .iter()
                .map(|r| CheckReport { runtime_ms: 0, ..r.clone() })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b));
        let names: Vec<&str> = a.reports.iter().map(|r| r.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        let array: Vec<CheckReport> = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(array.len(), a.reports.len() + 1);
        assert_eq!(array[0].name, "suite-header");
        assert!(array[0].pass);
        assert_eq!(array[0].details.as_ref().unwrap()["header"]["substitution"], SUBSTITUTION_NOTE);
    }

    #[test]
    fn tampered_weights_fail_in_the_identity() {
        let cfg = SuiteConfig {
            tamper: Some(Tamper::WWeights),
            ..small()
        };
        let out = run_suite(&cfg).unwrap();
        assert!(!out.pass());
        assert!(out.failures().any(|r| r.name == "w-identity"));
    }

    #[test]
    fn seeds_differ_by_family_and_index() {
        assert_ne!(instance_seed(1, "mgl", 0), instance_seed(1, "mgl", 1));
        assert_ne!(instance_seed(1, "mgl", 0), instance_seed(1, "theorem", 0));
        assert_ne!(instance_seed(1, "mgl", 0), instance_seed(2, "mgl", 0));
    }
}
