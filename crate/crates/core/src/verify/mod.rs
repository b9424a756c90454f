//! Bound checkers, identity batteries, the exhaustive search over boolean
//! functions, and the configurable suite that drives them.
//!
//! Every checker produces [`CheckReport`]s. A [`Ctx`] carries tolerances and
//! an optional [`Tamper`], which perturbs one transcribed formula by
//! [`TAMPER_DELTA`] so negative controls can confirm that the reports notice.

pub mod battery;
pub mod chain;
pub mod checks;
pub mod commands;
pub mod ck;
pub mod report;
pub mod suite;

use serde::{Deserialize, Serialize};

pub use report::{aggregate, all_pass, sort_reports, CheckReport, ClaimKind};

pub const TAMPER_DELTA: f64 = 1e-3;

/// Acceptance tolerances; every field can be overridden per run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub identity: f64,
    pub inequality: f64,
    pub lp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-9,
            inequality: 1e-9,
            lp: 1e-7,
        }
    }
}

/// A transcribed formula that a negative control can perturb.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tamper {
    /// The weights `w_s`.
    WWeights,
    /// Mrs. Gerber's function.
    GerberPhi,
    /// The binomial tail `Λ(k, s, λ)`.
    LambdaCoeff,
    /// Entries of the symmetric recursion table.
    XRecursion,
    /// The series form of `V(e_s)`.
    UnitValue,
    /// The neighbour-sum Dirichlet form.
    DirichletForm,
    /// `Ent(f | A)` in the entropy/distribution bridge.
    EntropyBridge,
    /// `I(f(X); Y)` from the noisy entropies.
    MutualInfo,
    /// The conjectured maximum `1 - H2(eps)`.
    CkBound,
    /// The second differences `t_s`.
    TProfile,
}

impl Tamper {
    pub const ALL: [Tamper; 10] = [
        Tamper::WWeights,
        Tamper::GerberPhi,
        Tamper::LambdaCoeff,
        Tamper::XRecursion,
        Tamper::UnitValue,
        Tamper::DirichletForm,
        Tamper::EntropyBridge,
        Tamper::MutualInfo,
        Tamper::CkBound,
        Tamper::TProfile,
    ];
}

/// Tolerances plus the active negative control, if any.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Ctx {
    pub tol: Tolerances,
    pub tamper: Option<Tamper>,
}

impl Ctx {
    pub fn new(tol: Tolerances) -> Self {
        Ctx { tol, tamper: None }
    }

    pub fn tampered(tamper: Tamper) -> Self {
        Ctx {
            tol: Tolerances::default(),
            tamper: Some(tamper),
        }
    }

    /// `v`, shifted by [`TAMPER_DELTA`] when `which` is the active tamper.
    #[inline]
    pub fn bump(&self, which: Tamper, v: f64) -> f64 {
        if self.tamper == Some(which) {
            v + TAMPER_DELTA
        } else {
            v
        }
    }
}

/// Milliseconds elapsed since `start`.
pub(crate) fn elapsed_ms(start: std::time::Instant) -> u64 {
    start.elapsed().as_millis() as u64
}
