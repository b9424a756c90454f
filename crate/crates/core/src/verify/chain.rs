//! The chain `noisy MI <= LP optimum <= symmetric value <= binomial-tail bound`.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cube::{CubeFunction, NoiseParam};
use crate::error::Result;
use crate::info::{y_avg_profile, BoundaryData};
use crate::lp::program::layer_dominance;
use crate::lp::{build_lp, feasible_from_function, solve_lp, Status};
use crate::subsets::SubsetMask;
use crate::symmetric::{lambda_coeff, noisy_mi_upper_bound, symmetric_value, SymmetricData};
use crate::verify::report::CheckReport;
use crate::verify::{elapsed_ms, Ctx};

/// How a boundary vector was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryClass {
    /// The gradient of a nonnegative set function; always feasible.
    Consistent,
    /// Every entry drawn independently; often infeasible.
    Iid,
}

impl BoundaryClass {
    fn prefix(self) -> &'static str {
        match self {
            BoundaryClass::Consistent => "lp-consistent",
            BoundaryClass::Iid => "lp-iid",
        }
    }
}

fn tail_bound(b: &BoundaryData, lambda: f64) -> f64 {
    let k = b.k();
    y_avg_profile(b)
        .iter()
        .enumerate()
        .map(|(j, y)| lambda_coeff(k, j + 1, lambda) * y)
        .sum()
}

/// Reports for the instance `(f, A, m)`: the three chain links, the solver
/// status, and the residual and objective of the function-induced solution.
pub fn chain_from_function(ctx: &Ctx, f: &CubeFunction, a: SubsetMask, m: usize, noise: NoiseParam) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    let lambda = noise.lambda();
    let feasible = feasible_from_function(f, a, m, noise)?;
    let lp = solve_lp(&feasible.problem)?;
    let boundary = &feasible.problem.boundary;
    let sym = symmetric_value(&SymmetricData::from_boundary(boundary, lambda)?)?;
    let prop = noisy_mi_upper_bound(f, a, m, noise)?;
    let lp_tol = ctx.tol.lp;
    let id_tol = ctx.tol.identity;
    let details = json!({ "k": boundary.k(), "status": lp.status, "pivots": lp.pivots });
    let reports = vec![
        CheckReport::flag("chain-lp-status", lp.status == Status::Optimal).with_details(details),
        CheckReport::inequality("chain-actual-le-lp", feasible.direct, lp.objective, lp_tol),
        CheckReport::inequality("chain-lp-le-sym", lp.objective, sym, lp_tol),
        CheckReport::inequality("chain-sym-le-bound", sym, prop.bound, lp_tol),
        CheckReport::inequality("chain-actual-le-bound", prop.actual, prop.bound, lp_tol),
        CheckReport::inequality("feasible-residual", feasible.residuals.max(), 0.0, id_tol),
        CheckReport::identity("feasible-objective", feasible.objective, feasible.direct, id_tol),
    ];
    let ms = elapsed_ms(start);
    Ok(reports
        .into_iter()
        .map(|r| {
            r.with_n(f.n())
                .with_eps(noise.eps())
                .with_runtime(ms)
                .with_note(format!("k = {}", a.len()))
        })
        .collect())
}

/// Dominance of the symmetric value over the program for raw boundary data.
///
/// For consistent data the program must be feasible; an infeasible i.i.d.
/// instance dominates vacuously and is reported as such in its note.
pub fn chain_from_boundary(ctx: &Ctx, b: &BoundaryData, lambda: f64, class: BoundaryClass) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    let p = build_lp(b, lambda)?;
    let lp = solve_lp(&p)?;
    let sym = symmetric_value(&SymmetricData::from_boundary(b, lambda)?)?;
    let prefix = class.prefix();
    let tol = ctx.tol.lp;
    let mut out = Vec::new();
    let status_ok = match class {
        BoundaryClass::Consistent => lp.status == Status::Optimal,
        BoundaryClass::Iid => matches!(lp.status, Status::Optimal | Status::Infeasible),
    };
    out.push(
        CheckReport::flag(format!("{prefix}-status"), status_ok)
            .with_details(json!({ "status": lp.status, "pivots": lp.pivots })),
    );
    match lp.status {
        Status::Optimal => {
            out.push(CheckReport::inequality(format!("{prefix}-le-sym"), lp.objective, sym, tol));
            out.push(CheckReport::inequality(
                format!("{prefix}-residual"),
                lp.residuals.max(),
                0.0,
                ctx.tol.identity,
            ));
        }
        status => out.push(
            CheckReport::flag(format!("{prefix}-le-sym"), true)
                .with_note(format!("{status:?}: no feasible point, dominance is vacuous")),
        ),
    }
    out.push(CheckReport::inequality(format!("{prefix}-sym-le-bound"), sym, tail_bound(b, lambda), tol));
    let ms = elapsed_ms(start);
    Ok(out
        .into_iter()
        .map(|r| {
            r.with_runtime(ms).with_details(json!({
                "k": b.k(),
                "lambda": lambda,
                "status": lp.status,
                "lp": lp.objective,
                "sym": sym,
            }))
        })
        .collect())
}

/// Averaged path sums over every layer `|R| = r` against `mu(k, r)`.
pub fn layer_chain(ctx: &Ctx, b: &BoundaryData, lambda: f64) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    let pairs = layer_dominance(b, lambda)?;
    let ms = elapsed_ms(start);
    Ok(pairs
        .into_iter()
        .map(|(lp, sym)| CheckReport::inequality("lp-layer-le-sym", lp, sym, ctx.tol.lp).with_runtime(ms))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_consistent_boundary, random_iid_boundary, random_nonneg, seeded_rng};
    use crate::verify::report::all_pass;

    #[test]
    fn function_chain_holds() {
        let mut rng = seeded_rng(4);
        for k in [1, 2, 3] {
            let f = random_nonneg(5, &mut rng).unwrap();
            let a = SubsetMask::from_coords(0..k);
            let rs = chain_from_function(&Ctx::default(), &f, a, 4, NoiseParam::new(0.2).unwrap()).unwrap();
            assert!(all_pass(&rs), "{rs:?}");
        }
    }

    #[test]
    fn boundary_classes() {
        let mut rng = seeded_rng(9);
        for k in [2, 3] {
            let b = random_consistent_boundary(k, &mut rng).unwrap();
            let rs = chain_from_boundary(&Ctx::default(), &b, 0.5, BoundaryClass::Consistent).unwrap();
            assert!(all_pass(&rs), "{rs:?}");
            assert!(all_pass(&layer_chain(&Ctx::default(), &b, 0.5).unwrap()));
            let b = random_iid_boundary(k, &mut rng).unwrap();
            let rs = chain_from_boundary(&Ctx::default(), &b, 0.5, BoundaryClass::Iid).unwrap();
            assert!(all_pass(&rs), "{rs:?}");
        }
    }
}
