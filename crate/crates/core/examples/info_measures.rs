//! Conditional-entropy tables, mutual-information functionals, the t-profile
//! and the channel quantity I(f(X); Y).

use cube_entropy::info::{bool_mutual_information, t_profile, AveragingMode, EntropyOracle};
use cube_entropy::random::{random_boolean, random_density, seeded_rng};
use cube_entropy::symmetric::w_weights;
use cube_entropy::{CubeFunction, NoiseParam, Result, SubsetMask};

fn main() -> Result<()> {
    let f = random_density(5, &mut seeded_rng(4))?;
    let oracle = EntropyOracle::new(&f, AveragingMode::Exact)?;
    let a = SubsetMask::from_coords([0, 1]);
    println!("I_f(A = {{1,2}}, m = 3) = {:.6}", oracle.mutual_info(a, 2));
    let t = t_profile(&f, AveragingMode::Exact)?;
    println!("t profile: {:?}", t.t);
    println!("Han profile: {:?}", oracle.han_profile()?);
    println!("w weights at lambda = 0.5: {:?}", w_weights(5, 0.5)?);
    let b = oracle.boundary(a, 2)?;
    println!("boundary data for A = {{1,2}}, m = 3:\n{}", serde_json::to_string(&b).expect("serializes"));

    let noise = NoiseParam::new(0.2)?;
    let g = CubeFunction::dictator(5, 0)?;
    println!("dictator: I = {:.6}", bool_mutual_information(&g, noise)?);
    let h = random_boolean(5, &mut seeded_rng(5))?;
    println!("random boolean: I = {:.6}", bool_mutual_information(&h, noise)?);
    Ok(())
}
