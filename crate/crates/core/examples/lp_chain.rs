//! The linear program over discrete derivatives and the dominance chain.

use cube_entropy::lp::{build_lp, feasible_from_function, solve_lp};
use cube_entropy::random::{random_consistent_boundary, random_nonneg, seeded_rng};
use cube_entropy::symmetric::{noisy_mi_upper_bound, symmetric_value, SymmetricData};
use cube_entropy::{NoiseParam, Result, SubsetMask};

fn main() -> Result<()> {
    let noise = NoiseParam::new(0.2)?;
    let f = random_nonneg(5, &mut seeded_rng(6))?;
    let a = SubsetMask::from_coords([0, 1, 2]);
    let feasible = feasible_from_function(&f, a, 3, noise)?;
    let lp = solve_lp(&feasible.problem)?;
    let sym = symmetric_value(&SymmetricData::from_boundary(&feasible.problem.boundary, noise.lambda())?)?;
    let bound = noisy_mi_upper_bound(&f, a, 3, noise)?;
    println!("variables = {}, equalities = {}, inequalities = {}",
        feasible.problem.vars.len(), feasible.problem.equalities.len(), feasible.problem.inequalities.len());
    println!("noisy MI      {:.9}", feasible.direct);
    println!("LP optimum    {:.9} ({:?}, {} pivots)", lp.objective, lp.status, lp.pivots);
    println!("symmetric     {sym:.9}");
    println!("tail bound    {:.9}", bound.bound);
    println!("feasible point residual {:e}", feasible.residuals.max());

    let b = random_consistent_boundary(4, &mut seeded_rng(7))?;
    let p = build_lp(&b, 0.5)?;
    let s = solve_lp(&p)?;
    let sym = symmetric_value(&SymmetricData::from_boundary(&b, 0.5)?)?;
    println!("k = 4 random boundary: LP {:.9} <= symmetric {sym:.9} ({:?})", s.objective, s.status);
    Ok(())
}
