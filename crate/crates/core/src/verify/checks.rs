//! Checkers for the entropy bounds under noise. Each returns reports whose
//! `lhs`/`rhs` are the two sides of the claim as evaluated here.

use std::time::Instant;

use serde_json::json;

use crate::cube::{CubeFunction, NoiseParam};
use crate::error::{domain, Result};
use crate::info::{
    bernoulli_average, bool_mutual_information, ck_bound, shannon_entropy, subset_information, AveragingMode,
    EntropyOracle,
};
use crate::scalar::{binary_entropy, h2, h2_inv, phi, xlog2x};
use crate::subsets::SubsetMask;
use crate::symmetric::w_weights;
use crate::verify::report::{CheckReport, SAMPLED};
use crate::verify::{elapsed_ms, Ctx, Tamper};

/// Tolerance of the dictator equality case.
pub const EQUALITY_TOL: f64 = 1e-12;
/// Agreement required between the two forms of the sharpened lemma.
pub const RESTATEMENT_TOL: f64 = 1e-10;
/// Largest `n` for the joint-distribution and subset-information routes.
pub const JOINT_LIMIT: usize = 10;

fn ensure_density(f: &CubeFunction) -> Result<()> {
    let m = f.mean();
    if (m - 1.0).abs() > 1e-12 {
        return Err(domain(format!("expected E f = 1, got {m}")));
    }
    Ok(())
}

fn ensure_joint_size(f: &CubeFunction) -> Result<()> {
    if f.n() > JOINT_LIMIT {
        return Err(domain(format!("n = {} exceeds {JOINT_LIMIT} for exact enumeration", f.n())));
    }
    Ok(())
}

fn stamp(r: CheckReport, f: &CubeFunction, noise: NoiseParam, mode: AveragingMode, start: Instant) -> CheckReport {
    let r = r.with_n(f.n()).with_eps(noise.eps()).with_runtime(elapsed_ms(start));
    if mode.is_exact() {
        r
    } else {
        r.with_mode(SAMPLED)
    }
}

/// `Ent(T f) <= n E f phi(Ent(f) / (n E f))`.
pub fn check_mgl(ctx: &Ctx, f: &CubeFunction, noise: NoiseParam) -> Result<CheckReport> {
    let start = Instant::now();
    let lhs = f.noise(noise).entropy()?;
    let rhs = mgl_rhs(ctx, f, noise)?;
    let r = CheckReport::inequality("mgl", lhs, rhs, ctx.tol.inequality);
    Ok(stamp(r, f, noise, AveragingMode::Exact, start))
}

fn mgl_rhs(ctx: &Ctx, f: &CubeFunction, noise: NoiseParam) -> Result<f64> {
    let scale = f.n() as f64 * f.mean();
    let ent = f.entropy()?;
    Ok(scale * ctx.bump(Tamper::GerberPhi, phi(ent / scale, noise)))
}

/// Right-hand sides of the sampled-subset bound and its streamlined form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MainBounds {
    /// `Ent(T f)`.
    pub lhs: f64,
    /// `E_T [Ent(f|T) - sum_{i∈T} Ent(f|i)] + sum_i phi(Ent(f|i))`.
    pub main: f64,
    /// `E_T Ent(f|T)`.
    pub streamlined: f64,
}

/// `T` contains each coordinate independently with probability `λ`.
pub fn main_bounds(ctx: &Ctx, f: &CubeFunction, noise: NoiseParam, mode: AveragingMode) -> Result<MainBounds> {
    ensure_density(f)?;
    let oracle = EntropyOracle::new(f, mode)?;
    let n = f.n();
    let single: Vec<f64> = (0..n).map(|i| oracle.ent(SubsetMask::singleton(i))).collect();
    let lambda = noise.lambda();
    let gap = oracle.bernoulli_average(lambda, |t| oracle.ent(t) - t.iter().map(|i| single[i]).sum::<f64>());
    let phis: f64 = single.iter().map(|&e| ctx.bump(Tamper::GerberPhi, phi(e, noise))).sum();
    Ok(MainBounds {
        lhs: f.noise(noise).entropy()?,
        main: gap + phis,
        streamlined: oracle.bernoulli_average(lambda, |t| oracle.ent(t)),
    })
}

/// Reports `thm-main`, `cor-streamline` and `bound-order` (main rhs at most
/// the streamlined rhs).
pub fn check_theorem_main(ctx: &Ctx, f: &CubeFunction, noise: NoiseParam, mode: AveragingMode) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    let b = main_bounds(ctx, f, noise, mode)?;
    let tol = ctx.tol.inequality;
    Ok([
        CheckReport::inequality("thm-main", b.lhs, b.main, tol),
        CheckReport::inequality("cor-streamline", b.lhs, b.streamlined, tol),
        CheckReport::inequality("bound-order", b.main, b.streamlined, tol),
    ]
    .into_iter()
    .map(|r| stamp(r, f, noise, mode, start))
    .collect())
}

/// Only the streamlined bound `Ent(T f) <= E_T Ent(f|T)`.
pub fn check_corollary_streamline(ctx: &Ctx, f: &CubeFunction, noise: NoiseParam, mode: AveragingMode) -> Result<CheckReport> {
    let start = Instant::now();
    let b = main_bounds(ctx, f, noise, mode)?;
    let r = CheckReport::inequality("cor-streamline", b.lhs, b.streamlined, ctx.tol.inequality);
    Ok(stamp(r, f, noise, mode, start))
}

/// `I(f(X); Y) <= E_T I(f(X); X_T)` with sampling probability `λ`
/// (`info-app`) and the weaker `1 - 2 eps` (`info-app-weak`).
pub fn check_corollary_info_app(ctx: &Ctx, f: &CubeFunction, noise: NoiseParam) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    ensure_joint_size(f)?;
    let lhs = ctx.bump(Tamper::MutualInfo, bool_mutual_information(f, noise)?);
    let n = f.n();
    let info: Vec<f64> = (0..1u32 << n)
        .map(|t| subset_information(f, SubsetMask(t)))
        .collect::<Result<_>>()?;
    let avg = |p: f64| bernoulli_average(n, p, AveragingMode::Exact, |t| info[t.0 as usize]);
    let tol = ctx.tol.inequality;
    Ok([
        CheckReport::inequality("info-app", lhs, avg(noise.lambda()), tol),
        CheckReport::inequality("info-app-weak", lhs, avg(noise.rho()), tol),
    ]
    .into_iter()
    .map(|r| stamp(r, f, noise, AveragingMode::Exact, start))
    .collect())
}

/// Reports for the sharpened lemma: `smgl` (entropy form), `smgl-info`
/// (information form through the distribution of `X ⊕ Z`) and
/// `smgl-restatement` (equal margins). With `λ = 0` a single skipped report.
///
/// `smgl` carries the classical bound in its details for side-by-side use.
pub fn check_smgl(ctx: &Ctx, f: &CubeFunction, noise: NoiseParam, mode: AveragingMode) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    ensure_density(f)?;
    let lambda = noise.lambda();
    if lambda == 0.0 {
        let r = CheckReport::flag("smgl", true).with_note("skipped: t = 0 at eps = 1/2");
        return Ok(vec![stamp(r, f, noise, mode, start)]);
    }
    let oracle = EntropyOracle::new(f, mode)?;
    let n = f.n() as f64;
    let t = lambda * n;
    let noisy = f.noise(noise);

    let ent_lhs = noisy.entropy()?;
    let x = (oracle.bernoulli_average(lambda, |s| oracle.ent(s)) / t).clamp(0.0, 1.0);
    let ent_rhs = n * ctx.bump(Tamper::GerberPhi, phi(x, noise));

    let mut shannon = Vec::with_capacity(1 << f.n());
    for s in 0..1u32 << f.n() {
        shannon.push(oracle.shannon(SubsetMask(s))?);
    }
    let avg_h = oracle.bernoulli_average(lambda, |s| shannon[s.0 as usize]);
    let p = h2_inv((avg_h / t).clamp(0.0, 1.0));
    let info_bound = n * h2(noise.eps() + noise.rho() * p);
    let info_h = shannon_entropy(&noisy)?;

    let tol = ctx.tol.inequality;
    let classical = mgl_rhs(ctx, f, noise)?;
    let main = CheckReport::inequality("smgl", ent_lhs, ent_rhs, tol).with_details(json!({
        "mgl_rhs": classical,
        "smgl_tighter": ent_rhs < classical,
    }));
    let info = CheckReport::inequality("smgl-info", info_bound, info_h, tol);
    let same = CheckReport::identity("smgl-restatement", main.margin, info.margin, RESTATEMENT_TOL);
    Ok([main, info, same]
        .into_iter()
        .map(|r| stamp(r, f, noise, mode, start))
        .collect())
}

/// `noisy-ts`: `Ent(T f) <= sum_i phi(Ent(f|i)) + sum_s w_s t_s`, and
/// `w-identity`: `E_T [Ent(f|T) - sum_{i∈T} Ent(f|i)] = sum_s w_s t_s`.
pub fn check_lemma_noisy_ts(ctx: &Ctx, f: &CubeFunction, noise: NoiseParam, mode: AveragingMode) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    ensure_density(f)?;
    let oracle = EntropyOracle::new(f, mode)?;
    let n = f.n();
    let w = w_weights(n, noise.lambda())?;
    let t = oracle.t_profile()?.t;
    let weighted: f64 = w
        .iter()
        .zip(&t)
        .map(|(&w, &t)| ctx.bump(Tamper::WWeights, w) * ctx.bump(Tamper::TProfile, t))
        .sum();
    let single: Vec<f64> = (0..n).map(|i| oracle.ent(SubsetMask::singleton(i))).collect();
    let phis: f64 = single.iter().map(|&e| ctx.bump(Tamper::GerberPhi, phi(e, noise))).sum();
    let gap = oracle.bernoulli_average(noise.lambda(), |s| oracle.ent(s) - s.iter().map(|i| single[i]).sum::<f64>());
    let lhs = f.noise(noise).entropy()?;
    Ok([
        CheckReport::inequality("noisy-ts", lhs, phis + weighted, ctx.tol.inequality),
        CheckReport::identity("w-identity", gap, weighted, ctx.tol.identity),
    ]
    .into_iter()
    .map(|r| stamp(r, f, noise, mode, start))
    .collect())
}

/// `I(f(X); Y)` from the joint law of `(f(X), Y)`, enumerating all `4^n`
/// pairs `(x, y)`.
pub fn joint_mutual_information(f: &CubeFunction, noise: NoiseParam) -> Result<f64> {
    ensure_joint_size(f)?;
    f.ensure_boolean()?;
    let n = f.n();
    let size = 1usize << n;
    let eps = noise.eps();
    let channel: Vec<f64> = (0..=n)
        .map(|d| eps.powi(d as i32) * (1.0 - eps).powi((n - d) as i32))
        .collect();
    let px = 1.0 / size as f64;
    let ones: Vec<usize> = (0..size).filter(|&x| f.get(x) == 1.0).collect();
    let p1 = ones.len() as f64 * px;
    let mut info = 0.0;
    for y in 0..size {
        let joint1: f64 = ones.iter().map(|&x| px * channel[(x ^ y).count_ones() as usize]).sum();
        let joint0 = px - joint1;
        for (joint, pb) in [(joint0, 1.0 - p1), (joint1, p1)] {
            // pb = 0 forces the joint to 0; rounding may leave a residue.
            if joint > 0.0 && pb > 0.0 {
                info += joint * (joint / (pb * px)).log2();
            }
        }
    }
    Ok(info)
}

/// `Ent(T f) + Ent(T (1 - f)) = I(f(X); Y)` against [`joint_mutual_information`].
pub fn check_lemma_h_entr(ctx: &Ctx, f: &CubeFunction, noise: NoiseParam) -> Result<CheckReport> {
    let start = Instant::now();
    let lhs = ctx.bump(Tamper::MutualInfo, bool_mutual_information(f, noise)?);
    let rhs = joint_mutual_information(f, noise)?;
    let r = CheckReport::identity("lemma-h-entr", lhs, rhs, ctx.tol.identity.min(1e-10));
    Ok(stamp(r, f, noise, AveragingMode::Exact, start))
}

/// The dictator `g_k` attains `1 - H2(eps)` and `Ent(T g_k) = (1 - H2(eps)) / 2`.
pub fn check_equality_case(ctx: &Ctx, n: usize, k: usize, noise: NoiseParam) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    let g = CubeFunction::dictator(n, k)?;
    let mi = ctx.bump(Tamper::MutualInfo, bool_mutual_information(&g, noise)?);
    let ent = g.noise(noise).entropy()?;
    let capacity = 1.0 - binary_entropy(noise.eps())?;
    Ok([
        CheckReport::identity("equality-case-mi", mi, ctx.bump(Tamper::CkBound, ck_bound(noise)), EQUALITY_TOL),
        CheckReport::identity("equality-case-ent", ent, capacity / 2.0, EQUALITY_TOL),
    ]
    .into_iter()
    .map(|r| stamp(r, &g, noise, AveragingMode::Exact, start).with_note(format!("k = {}", k + 1)))
    .collect())
}

/// `Ent(f|A) = E f (|A| - H(X_A))` for every `A`, as the worst residual.
pub fn check_entropy_bridge(ctx: &Ctx, f: &CubeFunction) -> Result<CheckReport> {
    let start = Instant::now();
    let oracle = EntropyOracle::new(f, AveragingMode::Exact)?;
    let mean = f.mean();
    let mut worst = (0.0f64, 0.0f64);
    for a in 0..1u32 << f.n() {
        let a = SubsetMask(a);
        let lhs = ctx.bump(Tamper::EntropyBridge, oracle.ent(a));
        let h = -f
            .marginal(a)
            .iter()
            .map(|&v| xlog2x(v / (mean * (1usize << a.len()) as f64)))
            .sum::<f64>();
        let rhs = mean * (a.len() as f64 - h);
        if (lhs - rhs).abs() >= (worst.0 - worst.1).abs() {
            worst = (lhs, rhs);
        }
    }
    let r = CheckReport::identity("entropy-bridge", worst.0, worst.1, ctx.tol.identity);
    Ok(r.with_n(f.n()).with_runtime(elapsed_ms(start)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::bool_mutual_information_h2;
    use crate::random::{random_boolean, random_density, random_product, seeded_rng};

    fn noise(eps: f64) -> NoiseParam {
        NoiseParam::new(eps).unwrap()
    }

    fn exact() -> AveragingMode {
        AveragingMode::Exact
    }

    #[test]
    fn dictator_closed_forms() {
        let ctx = Ctx::default();
        for eps in [0.1, 0.4] {
            let rs = check_equality_case(&ctx, 5, 2, noise(eps)).unwrap();
            assert!(rs.iter().all(|r| r.pass), "{rs:?}");
            let g2 = CubeFunction::dictator(4, 1).unwrap().scaled(2.0);
            let b = main_bounds(&ctx, &g2, noise(eps), exact()).unwrap();
            assert!((b.lhs - (1.0 - h2(eps))).abs() < 1e-12);
            // Dictators attain the main bound.
            assert!((b.main - b.lhs).abs() < 1e-12, "{}", b.main - b.lhs);
            assert!(b.streamlined > b.main);
        }
    }

    #[test]
    fn joint_oracle_handles_constants() {
        for n in 1..=5 {
            for c in [0.0, 1.0] {
                let f = CubeFunction::constant(n, c).unwrap();
                for eps in [0.0, 0.05, 0.3, 0.5] {
                    let v = joint_mutual_information(&f, noise(eps)).unwrap();
                    assert!(v.abs() < 1e-14, "{n} {c} {eps} {v}");
                    assert!(check_lemma_h_entr(&Ctx::default(), &f, noise(eps)).unwrap().pass);
                }
            }
        }
    }

    #[test]
    fn constants_give_zero_margins() {
        let ctx = Ctx::default();
        let one = CubeFunction::constant(4, 1.0).unwrap();
        let r = check_mgl(&ctx, &one, noise(0.2)).unwrap();
        assert!(r.pass && r.lhs.abs() < 1e-14 && r.rhs.abs() < 1e-14);
        for r in check_theorem_main(&ctx, &one, noise(0.2), exact()).unwrap() {
            assert!(r.pass && r.rhs.abs() < 1e-14, "{r:?}");
        }
        for r in check_smgl(&ctx, &one, noise(0.2), exact()).unwrap() {
            assert!(r.pass, "{r:?}");
        }
        let zero = CubeFunction::constant(3, 0.0).unwrap();
        for r in check_corollary_info_app(&ctx, &zero, noise(0.3)).unwrap() {
            assert!(r.pass && r.lhs == 0.0 && r.rhs == 0.0);
        }
    }

    #[test]
    fn random_sweeps_pass() {
        let ctx = Ctx::default();
        let mut rng = seeded_rng(41);
        for n in 3..=6 {
            for eps in [0.1, 0.3, 0.45] {
                let f = random_density(n, &mut rng).unwrap();
                let mut all = vec![check_mgl(&ctx, &f, noise(eps)).unwrap()];
                all.extend(check_theorem_main(&ctx, &f, noise(eps), exact()).unwrap());
                all.extend(check_smgl(&ctx, &f, noise(eps), exact()).unwrap());
                all.extend(check_lemma_noisy_ts(&ctx, &f, noise(eps), exact()).unwrap());
                all.push(check_entropy_bridge(&ctx, &f).unwrap());
                let b = random_boolean(n, &mut rng).unwrap();
                all.extend(check_corollary_info_app(&ctx, &b, noise(eps)).unwrap());
                all.push(check_lemma_h_entr(&ctx, &b, noise(eps)).unwrap());
                for r in &all {
                    assert!(r.pass, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn product_functions_have_no_second_differences() {
        let ctx = Ctx::default();
        let f = random_product(5, &mut seeded_rng(8)).unwrap().normalized().unwrap();
        let rs = check_lemma_noisy_ts(&ctx, &f, noise(0.25), exact()).unwrap();
        assert!(rs[1].rhs.abs() < 1e-12 && rs[1].lhs.abs() < 1e-12);
        assert!(rs[0].pass);
    }

    #[test]
    fn joint_oracle_matches_other_routes() {
        let mut rng = seeded_rng(3);
        for n in 1..=5 {
            let f = random_boolean(n, &mut rng).unwrap();
            let j = joint_mutual_information(&f, noise(0.2)).unwrap();
            assert!((j - bool_mutual_information(&f, noise(0.2)).unwrap()).abs() < 1e-12);
            assert!((j - bool_mutual_information_h2(&f, noise(0.2)).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn smgl_skips_at_half() {
        let f = random_density(3, &mut seeded_rng(1)).unwrap();
        let rs = check_smgl(&Ctx::default(), &f, noise(0.5), exact()).unwrap();
        assert_eq!(rs.len(), 1);
        assert!(rs[0].pass && rs[0].note.is_some());
    }

    #[test]
    fn tampering_flips_reports() {
        let f = random_density(4, &mut seeded_rng(12)).unwrap();
        let b = random_boolean(4, &mut seeded_rng(13)).unwrap();
        let w = check_lemma_noisy_ts(&Ctx::tampered(Tamper::WWeights), &f, noise(0.3), exact()).unwrap();
        assert!(!w[1].pass);
        let h = check_lemma_h_entr(&Ctx::tampered(Tamper::MutualInfo), &b, noise(0.3)).unwrap();
        assert!(!h.pass);
        let s = check_smgl(&Ctx::tampered(Tamper::GerberPhi), &f, noise(0.3), exact()).unwrap();
        assert!(!s[2].pass);
        let e = check_entropy_bridge(&Ctx::tampered(Tamper::EntropyBridge), &f).unwrap();
        assert!(!e.pass);
    }

    #[test]
    fn rejects_bad_inputs() {
        let ctx = Ctx::default();
        let f = random_density(3, &mut seeded_rng(2)).unwrap().scaled(2.0);
        assert!(check_theorem_main(&ctx, &f, noise(0.2), exact()).is_err());
        assert!(check_lemma_h_entr(&ctx, &f, noise(0.2)).is_err());
        assert!(check_mgl(&ctx, &CubeFunction::constant(2, 0.0).unwrap(), noise(0.2)).is_err());
    }
}
