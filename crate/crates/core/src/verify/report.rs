use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a report certifies `lhs <= rhs` or `lhs = rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    /// `margin = rhs - lhs`, passing when `margin >= -tol`.
    Inequality,
    /// `margin = |lhs - rhs|`, passing when `margin <= tol`.
    Identity,
}

/// Outcome of one check, or the worst instance of an aggregated sweep cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub kind: ClaimKind,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tol: f64,
    pub pass: bool,
    pub mode: String,
    pub runtime_ms: u64,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub eps: Option<f64>,
    /// Number of instances folded into this report.
    pub instances: usize,
    /// Number of failing instances.
    pub violations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

pub const EXACT: &str = "exact-enumeration";
pub const SAMPLED: &str = "sampled";

impl CheckReport {
    fn new(name: impl Into<String>, kind: ClaimKind, lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = match kind {
            ClaimKind::Inequality => rhs - lhs,
            ClaimKind::Identity => (lhs - rhs).abs(),
        };
        // NaN margins fail either way.
        let pass = match kind {
            ClaimKind::Inequality => margin >= -tol,
            ClaimKind::Identity => margin <= tol,
        };
        CheckReport {
            name: name.into(),
            kind,
            lhs,
            rhs,
            margin,
            tol,
            pass,
            mode: EXACT.into(),
            runtime_ms: 0,
            seed: None,
            n: None,
            eps: None,
            instances: 1,
            violations: usize::from(!pass),
            note: None,
            details: None,
        }
    }

    /// Claim `lhs <= rhs` up to `tol`.
    pub fn inequality(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        CheckReport::new(name, ClaimKind::Inequality, lhs, rhs, tol)
    }

    /// Claim `lhs = rhs` up to `tol`.
    pub fn identity(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        CheckReport::new(name, ClaimKind::Identity, lhs, rhs, tol)
    }

    /// A claim that holds or fails without a numeric margin.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        CheckReport::identity(name, if ok { 0.0 } else { 1.0 }, 0.0, 0.0)
    }

    pub fn with_mode(mut self, mode: &str) -> Self {
        self.mode = mode.into();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = Some(eps);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_details(mut self, details: serde_json::Value) -> Self {
        self.details = Some(details);
        self
    }

    pub fn with_runtime(mut self, ms: u64) -> Self {
        self.runtime_ms = ms;
        self
    }

    /// How far the report is from failing; smaller is worse.
    pub fn slack(&self) -> f64 {
        let s = match self.kind {
            ClaimKind::Inequality => self.margin + self.tol,
            ClaimKind::Identity => self.tol - self.margin,
        };
        if s.is_nan() {
            f64::NEG_INFINITY
        } else {
            s
        }
    }
}

/// Folds instance reports of one check into the worst instance, keeping
/// instance and violation counts. Ties keep the earliest report.
pub fn aggregate(reports: Vec<CheckReport>) -> Option<CheckReport> {
    let instances: usize = reports.iter().map(|r| r.instances).sum();
    let violations: usize = reports.iter().map(|r| r.violations).sum();
    let runtime: u64 = reports.iter().map(|r| r.runtime_ms).sum();
    let sampled = reports.iter().any(|r| r.mode == SAMPLED);
    let mut worst: Option<CheckReport> = None;
    for r in reports {
        worst = match worst {
            Some(w) if w.slack() <= r.slack() => Some(w),
            _ => Some(r),
        };
    }
    worst.map(|mut w| {
        w.instances = instances;
        w.violations = violations;
        w.pass = violations == 0;
        w.runtime_ms = runtime;
        if sampled {
            w.mode = SAMPLED.into();
        }
        w
    })
}

/// Aggregates per name, keeping first-appearance order.
pub fn aggregate_by_name(reports: Vec<CheckReport>) -> Vec<CheckReport> {
    let mut names: Vec<String> = Vec::new();
    let mut groups: Vec<Vec<CheckReport>> = Vec::new();
    for r in reports {
        match names.iter().position(|n| *n == r.name) {
            Some(j) => groups[j].push(r),
            None => {
                names.push(r.name.clone());
                groups.push(vec![r]);
            }
        }
    }
    groups.into_iter().filter_map(aggregate).collect()
}

/// Sorts by name, then `n`, then `eps`.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| {
        a.name
            .cmp(&b.name)
            .then(a.n.cmp(&b.n))
            .then(a.eps.unwrap_or(-1.0).total_cmp(&b.eps.unwrap_or(-1.0)))
    });
}

pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

pub fn to_json(reports: &[CheckReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

/// CSV with columns `name,n,eps,lhs,rhs,margin,mode,pass,seed,runtime_ms`.
pub fn write_csv(reports: &[CheckReport], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Format(e.to_string());
    w.write_record(["name", "n", "eps", "lhs", "rhs", "margin", "mode", "pass", "seed", "runtime_ms"])
        .map_err(csv_err)?;
    for r in reports {
        let opt = |v: Option<String>| v.unwrap_or_default();
        w.write_record([
            r.name.clone(),
            opt(r.n.map(|v| v.to_string())),
            opt(r.eps.map(|v| v.to_string())),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.margin.to_string(),
            r.mode.clone(),
            r.pass.to_string(),
            opt(r.seed.map(|v| v.to_string())),
            r.runtime_ms.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv(reports: &[CheckReport]) -> String {
    let mut buf = Vec::new();
    write_csv(reports, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rules() {
        assert!(CheckReport::inequality("a", 1.0, 1.0 - 1e-10, 1e-9).pass);
        assert!(!CheckReport::inequality("a", 1.0, 1.0 - 1e-8, 1e-9).pass);
        assert!(CheckReport::identity("b", 1.0, 1.0 + 1e-10, 1e-9).pass);
        assert!(!CheckReport::identity("b", 1.0, 1.1, 1e-9).pass);
        assert!(!CheckReport::identity("b", f64::NAN, 1.0, 1e-9).pass);
        assert!(!CheckReport::flag("c", false).pass);
    }

    #[test]
    fn aggregation_keeps_worst() {
        let a = CheckReport::inequality("x", 0.0, 1.0, 1e-9).with_seed(1);
        let b = CheckReport::inequality("x", 0.0, 0.5, 1e-9).with_seed(2);
        let c = CheckReport::inequality("x", 0.0, -1.0, 1e-9).with_seed(3);
        let ok = aggregate(vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(ok.seed, Some(2));
        assert!(ok.pass && ok.instances == 2);
        let bad = aggregate(vec![a, c, b]).unwrap();
        assert_eq!(bad.seed, Some(3));
        assert!(!bad.pass && bad.violations == 1);
    }

    #[test]
    fn csv_columns() {
        let r = CheckReport::identity("w", 1.0, 1.0, 1e-9).with_n(4).with_eps(0.25);
        let text = to_csv(&[r]);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "name,n,eps,lhs,rhs,margin,mode,pass,seed,runtime_ms");
        assert_eq!(lines.next().unwrap(), "w,4,0.25,1,1,0,exact-enumeration,true,,0");
    }
}
