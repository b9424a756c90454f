//! Closed-form identity battery, property sweeps and the analytic checks of
//! Mrs. Gerber's function. Every function returns one aggregated report per
//! named check.

use std::time::Instant;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::cube::{CubeFunction, NoiseParam};
use crate::error::Result;
use crate::info::{marginal_shannon_entropy, mutual_info_sets, y_boundary, AveragingMode, EntropyOracle};
use crate::lp::feasible_from_function;
use crate::lp::program::RowKind;
use crate::random::{random_boolean, random_density, random_iid_boundary, random_nonneg, seeded_rng, TestRng};
use crate::scalar::{binomial, h2, phi};
use crate::spectral::{
    dirichlet_form, dirichlet_form_fourier, even_odd_entropy, noise_via_spectrum, quartic_majorant, wht_forward,
    wht_inverse,
};
use crate::subsets::{permutations, SubsetMask};
use crate::symmetric::{
    lambda_coeff, layer_recursion_sides, restriction_average_sides, w_weight_routes, x_closed_form_unit, x_table,
    SymmetricData, SymmetricSolution,
};
use crate::verify::checks::{check_entropy_bridge, check_lemma_h_entr};
use crate::verify::report::{aggregate_by_name, CheckReport};
use crate::verify::{elapsed_ms, Ctx, Tamper};

pub const LAMBDA_GRID: [f64; 7] = [0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0];
pub const LSI_TOL: f64 = 1e-10;
pub const PHI_TOL: f64 = 1e-10;
pub const QUARTIC_TOL: f64 = 1e-12;

fn timed(start: Instant, reports: Vec<CheckReport>) -> Vec<CheckReport> {
    let ms = elapsed_ms(start);
    aggregate_by_name(reports)
        .into_iter()
        .map(|r| r.with_runtime(ms))
        .collect()
}

fn eps_of(rng: &mut TestRng) -> NoiseParam {
    NoiseParam::new(*[0.05, 0.1, 0.25, 0.4, 0.45, 0.49].choose(rng).expect("nonempty")).expect("grid in range")
}

/// The closed-form identities of the symmetric program, the weights `w_s`,
/// the second-difference profile and the entropy bridges.
pub fn identities(ctx: &Ctx, seed: u64) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    let tol = ctx.tol.identity;
    let mut rng = seeded_rng(seed);
    let mut out = Vec::new();

    for k in 1..=8 {
        for &lambda in &LAMBDA_GRID {
            for s in 1..=k {
                let table = x_table(&SymmetricData::unit(k, s, lambda)?);
                for t in 1..=k {
                    for r in 0..t {
                        let stored = ctx.bump(Tamper::XRecursion, table.get(r, t));
                        let closed = x_closed_form_unit(k, lambda, s, r, t)?;
                        out.push(CheckReport::identity("x-table-closed-form", stored, closed, tol));
                    }
                }
                let series = lambda.powi(s as i32)
                    * (0..=k - s)
                        .map(|m| binomial((s + m - 1) as u64, m as u64) * (1.0 - lambda).powi(m as i32))
                        .sum::<f64>();
                out.push(CheckReport::identity(
                    "unit-value-dual-forms",
                    ctx.bump(Tamper::UnitValue, series),
                    ctx.bump(Tamper::LambdaCoeff, lambda_coeff(k, s, lambda)),
                    tol,
                ));
            }
            let y: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
            let data = SymmetricData::new(lambda, y.clone())?;
            let table = x_table(&data);
            for t in 2..=k {
                for r in 1..t {
                    let next = lambda * table.get(r - 1, t) + (1.0 - lambda) * table.get(r - 1, t - 1);
                    out.push(CheckReport::identity(
                        "x-table-recursion",
                        ctx.bump(Tamper::XRecursion, table.get(r, t)),
                        next,
                        tol,
                    ));
                }
            }
            let sol = SymmetricSolution::new(data.clone());
            let linear: f64 = (1..=k)
                .map(|s| y[s - 1] * ctx.bump(Tamper::LambdaCoeff, lambda_coeff(k, s, lambda)))
                .sum();
            out.push(CheckReport::identity("symmetric-value-routes", sol.value(), linear, tol));
            for (lhs, rhs) in layer_recursion_sides(&data)? {
                out.push(CheckReport::identity("layer-recursion", lhs, rhs, tol));
            }
            if k <= 5 {
                for r in 0u32..1 << k {
                    let r = SubsetMask(r);
                    let closed = sol.mu(k, r.len())?;
                    for tau in permutations(k) {
                        let mut prefix = SubsetMask::EMPTY;
                        let mut direct = 0.0;
                        for &i in &tau {
                            prefix = prefix.with(i);
                            direct += sol.assignment(r, prefix, i)?;
                        }
                        out.push(CheckReport::identity("path-invariance", direct, closed, tol));
                    }
                }
            }
            if (2..=6).contains(&k) {
                let b = random_iid_boundary(k, &mut rng)?;
                for (lhs, rhs) in restriction_average_sides(&b, lambda)? {
                    out.push(CheckReport::identity("restriction-average", lhs, rhs, tol));
                }
            }
        }
    }

    for n in 2..=12 {
        for &lambda in &LAMBDA_GRID {
            let [direct, tails, moments] = w_weight_routes(n, lambda)?;
            for s in 0..n - 1 {
                let d = ctx.bump(Tamper::WWeights, direct[s]);
                out.push(CheckReport::identity("w-weight-routes", d, tails[s], tol).with_n(n));
                out.push(CheckReport::identity("w-weight-routes", d, moments[s], tol).with_n(n));
            }
        }
    }

    for n in 3..=8 {
        for _ in 0..4 {
            let f = random_density(n, &mut rng)?;
            let oracle = EntropyOracle::new(&f, AveragingMode::Exact)?;
            let t = oracle.t_profile()?.t;
            let single = oracle.size_average(1, |b| oracle.ent(b));
            for u in 1..n {
                let lhs = oracle.size_average(u + 1, |b| oracle.ent(b)) - (u + 1) as f64 * single;
                let rhs: f64 = (1..=u)
                    .map(|s| (u - s + 1) as f64 * ctx.bump(Tamper::TProfile, t[s - 1]))
                    .sum();
                out.push(CheckReport::identity("t-profile-identity", lhs, rhs, tol).with_n(n));
            }
        }
    }

    for n in 1..=8 {
        for _ in 0..4 {
            let b = random_boolean(n, &mut rng)?;
            let noise = eps_of(&mut rng);
            out.push(check_lemma_h_entr(ctx, &b, noise)?);
            out.push(check_entropy_bridge(ctx, &random_density(n, &mut rng)?)?);
            out.push(check_entropy_bridge(ctx, &random_nonneg(n, &mut rng)?.scaled(3.0))?);

            let g = random_density(n, &mut rng)?;
            out.push(CheckReport::identity("even-odd-identity", g.entropy()?, even_odd_entropy(&g)?, tol).with_n(n));
            if b.mean() > 0.0 {
                let sparse = b.normalized()?;
                out.push(
                    CheckReport::identity("even-odd-identity", sparse.entropy()?, even_odd_entropy(&sparse)?, tol)
                        .with_n(n),
                );
            }
            let h = random_nonneg(n, &mut rng)?.map(|v| 2.0 * v - 1.0);
            out.push(
                CheckReport::identity(
                    "dirichlet-duality",
                    ctx.bump(Tamper::DirichletForm, dirichlet_form(&h)),
                    dirichlet_form_fourier(&h),
                    tol,
                )
                .with_n(n),
            );
        }
    }
    Ok(timed(start, out))
}

/// Log-Sobolev and contraction sweeps over `trials` random instances each.
pub fn properties(ctx: &Ctx, seed: u64, trials: usize) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(2 * trials);
    for j in 0..trials {
        let n = 1 + j % 8;
        let g = match j % 3 {
            0 => random_nonneg(n, &mut rng)?,
            1 => {
                let b = random_boolean(n, &mut rng)?;
                if b.mean() == 0.0 {
                    CubeFunction::dictator(n, 0)?
                } else {
                    b
                }
            }
            _ => random_nonneg(n, &mut rng)?.map(|v| v.powi(6)),
        };
        let lhs = 2.0 * std::f64::consts::LN_2 * g.mean() * g.entropy()?;
        let rhs = ctx.bump(Tamper::DirichletForm, dirichlet_form(&g));
        out.push(CheckReport::inequality("log-sobolev", lhs, rhs, LSI_TOL).with_n(n));
    }
    for j in 0..trials {
        let n = 2 + j % 4;
        let k = 1 + j % (n - 1).min(3);
        let mut coords: Vec<usize> = (0..n).collect();
        coords.shuffle(&mut rng);
        let a = SubsetMask::from_coords(coords[..k].iter().copied());
        let m = coords[k];
        let noise = eps_of(&mut rng);
        let f = random_nonneg(n, &mut rng)?;
        let sol = feasible_from_function(&f, a, m, noise)?;
        let worst = sol
            .problem
            .inequalities
            .iter()
            .filter(|r| r.kind == RowKind::Contraction)
            .map(|r| r.row.eval(&sol.assignment) - r.row.rhs)
            .fold(f64::NEG_INFINITY, f64::max);
        out.push(
            CheckReport::inequality("sdpi", worst, 0.0, ctx.tol.inequality)
                .with_n(n)
                .with_eps(noise.eps()),
        );
    }
    Ok(timed(start, out))
}

/// Concavity and sandwich bounds of `phi` on a `0.01` grid and the quartic
/// majorant on a `0.001` grid.
pub fn phi_analytics(ctx: &Ctx) -> Vec<CheckReport> {
    let start = Instant::now();
    let mut out = Vec::new();
    for e in 1..=9 {
        let noise = NoiseParam::new(0.05 * e as f64).expect("grid in range");
        let eps = noise.eps();
        let p = |x: f64| ctx.bump(Tamper::GerberPhi, phi(x, noise));
        let capacity = 1.0 - h2(eps);
        let grid: Vec<f64> = (0..=100).map(|j| j as f64 / 100.0).collect();
        let vals: Vec<f64> = grid.iter().map(|&x| p(x)).collect();
        for j in 1..100 {
            let d2 = vals[j - 1] + vals[j + 1] - 2.0 * vals[j];
            out.push(CheckReport::inequality("phi-concavity", d2, 0.0, PHI_TOL).with_eps(eps));
        }
        for (&x, &v) in grid.iter().zip(&vals) {
            out.push(CheckReport::inequality("phi-sandwich-lower", capacity * x, v, PHI_TOL).with_eps(eps));
            out.push(CheckReport::inequality("phi-sandwich-upper", v, noise.lambda() * x, PHI_TOL).with_eps(eps));
        }
    }
    for j in 0..=1000 {
        let x = j as f64 / 1000.0;
        out.push(CheckReport::inequality(
            "quartic-bound",
            1.0 - h2((1.0 - x) / 2.0),
            quartic_majorant(x),
            QUARTIC_TOL,
        ));
    }
    timed(start, out)
}

/// Invariants of the noise operators, the transform and the information
/// measures on random functions.
pub fn invariants(ctx: &Ctx, seed: u64) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    let tol = ctx.tol.identity;
    let mut rng = seeded_rng(seed);
    let mut out = Vec::new();
    for n in 1..=8 {
        for _ in 0..4 {
            let f = random_density(n, &mut rng)?;
            let (a, b) = (eps_of(&mut rng), eps_of(&mut rng));
            let c = NoiseParam::new((1.0 - a.rho() * b.rho()) / 2.0)?;
            let twice = f.noise(a).noise(b);
            out.push(CheckReport::identity("noise-semigroup", twice.max_abs_diff(&f.noise(c)), 0.0, tol).with_n(n));
            out.push(
                CheckReport::identity("noise-spectral", f.noise(a).max_abs_diff(&noise_via_spectrum(&f, a)), 0.0, tol)
                    .with_n(n),
            );
            out.push(CheckReport::identity("noise-mean", f.noise(a).mean(), f.mean(), tol).with_n(n));
            out.push(
                CheckReport::identity("wht-roundtrip", wht_inverse(&wht_forward(&f)).max_abs_diff(&f), 0.0, tol)
                    .with_n(n),
            );

            let oracle = EntropyOracle::new(&f, AveragingMode::Exact)?;
            let han = oracle.han_profile()?;
            for w in han.windows(2) {
                out.push(CheckReport::inequality("han-monotone", w[1], w[0], tol).with_n(n));
            }
            if n >= 2 {
                let mut coords: Vec<usize> = (0..n).collect();
                coords.shuffle(&mut rng);
                let k = rng.random_range(1..n);
                let set = SubsetMask::from_coords(coords[..k].iter().copied());
                let m = coords[k];
                let by = y_boundary(&f, set, m)?;
                out.push(CheckReport::inequality("boundary-nonneg", 0.0, by.min_value(), tol).with_n(n));
                let order: Vec<usize> = (0..k).collect();
                let info = mutual_info_sets(&f, set, m)?;
                out.push(CheckReport::identity("boundary-telescoping", by.path_sum(&order), info, tol).with_n(n));
                let h = |s| marginal_shannon_entropy(&f, s);
                let shannon = h(set)? + h(SubsetMask::singleton(m))? - h(set.with(m))?;
                out.push(CheckReport::identity("mi-shannon-bridge", info, shannon, tol).with_n(n));
            }
        }
    }
    Ok(timed(start, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::report::all_pass;
    use crate::verify::Tamper;

    #[test]
    fn untampered_battery_passes() {
        let ctx = Ctx::default();
        let mut all = identities(&ctx, 1).unwrap();
        all.extend(properties(&ctx, 2, 60).unwrap());
        all.extend(phi_analytics(&ctx));
        all.extend(invariants(&ctx, 3).unwrap());
        for r in &all {
            assert!(r.pass, "{r:?}");
        }
        assert!(all_pass(&all));
    }

    #[test]
    fn each_tamper_is_noticed() {
        for t in Tamper::ALL {
            if matches!(t, Tamper::CkBound) {
                continue;
            }
            let ctx = Ctx::tampered(t);
            let mut all = identities(&ctx, 1).unwrap();
            all.extend(phi_analytics(&ctx));
            assert!(!all_pass(&all), "{t:?} went unnoticed");
        }
    }
}
