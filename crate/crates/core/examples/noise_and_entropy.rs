//! Noise operator, entropy functional and conditional entropy of a small function.

use cube_entropy::random::{random_density, seeded_rng};
use cube_entropy::{CubeFunction, NoiseParam, Result, SubsetMask};

fn main() -> Result<()> {
    let f = random_density(4, &mut seeded_rng(1))?;
    println!("E f = {:.6}, Ent(f) = {:.6}", f.mean(), f.entropy()?);
    for eps in [0.0, 0.1, 0.25, 0.4, 0.5] {
        let t = f.noise(NoiseParam::new(eps)?);
        println!("eps = {eps:<4}  Ent(T f) = {:.6}", t.entropy()?);
    }
    let a = SubsetMask::from_coords([0, 2]);
    println!("Ent(f | x1, x3) = {:.6}", f.conditional_entropy(a)?);

    // Noise on a subset of directions only.
    let g = CubeFunction::dictator(3, 0)?.scaled(2.0);
    let partial = g.noise_directions(NoiseParam::new(0.2)?, SubsetMask::from_coords([0]));
    println!("dictator, noised along x1 only: {:?}", partial.values());
    Ok(())
}
