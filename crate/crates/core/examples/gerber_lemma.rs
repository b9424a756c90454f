//! Mrs. Gerber's function and the classical lemma on random functions.

use cube_entropy::random::{random_nonneg, seeded_rng};
use cube_entropy::scalar::{binary_entropy, binary_entropy_inv, gerber_phi};
use cube_entropy::verify::checks::check_mgl;
use cube_entropy::verify::Ctx;
use cube_entropy::{NoiseParam, Result};

fn main() -> Result<()> {
    let noise = NoiseParam::new(0.1)?;
    for x in [0.0, 0.1, 0.5, 0.9, 1.0] {
        println!("phi({x}) = {:.6}  (lambda x = {:.6})", gerber_phi(x, noise)?, noise.lambda() * x);
    }
    let p = binary_entropy_inv(0.5)?;
    println!("H2^-1(0.5) = {p:.12}, H2 of that = {:.12}", binary_entropy(p)?);

    let ctx = Ctx::default();
    let mut rng = seeded_rng(3);
    let mut worst = f64::INFINITY;
    for _ in 0..200 {
        let f = random_nonneg(5, &mut rng)?;
        worst = worst.min(check_mgl(&ctx, &f, noise)?.margin);
    }
    println!("smallest margin over 200 functions on 5 bits: {worst:.3e}");
    Ok(())
}
