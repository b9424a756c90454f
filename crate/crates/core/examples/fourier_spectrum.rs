//! Walsh-Fourier spectrum, the spectral noise route, Dirichlet form and even/odd split.

use cube_entropy::random::{random_nonneg, seeded_rng};
use cube_entropy::spectral::{
    dirichlet_form, dirichlet_form_fourier, even_odd_split, log_sobolev_gap, noise_via_spectrum, wht_forward, wht_inverse,
};
use cube_entropy::{NoiseParam, Result, SubsetMask};

fn main() -> Result<()> {
    let f = random_nonneg(3, &mut seeded_rng(2))?;
    let s = wht_forward(&f);
    for mask in 0..1u32 << 3 {
        let set = SubsetMask(mask);
        println!("f^({:?}) = {:+.6}", set.iter().map(|i| i + 1).collect::<Vec<_>>(), s.get(set));
    }
    println!("Parseval: E f^2 = {:.6}, sum of squares = {:.6}", f.mean_square(), s.energy());
    println!("round trip error = {:e}", wht_inverse(&s).max_abs_diff(&f));

    let noise = NoiseParam::new(0.15)?;
    println!("spectral vs direct noise: {:e}", noise_via_spectrum(&f, noise).max_abs_diff(&f.noise(noise)));
    println!("Dirichlet form: {:.6} (neighbour sum) vs {:.6} (Fourier)", dirichlet_form(&f), dirichlet_form_fourier(&f));
    println!("log-Sobolev gap of sqrt f: {:.6}", log_sobolev_gap(&f.map(f64::sqrt))?);
    let (even, odd) = even_odd_split(&f);
    println!("even part mean {:.6}, odd part mean {:.6}", even.mean(), odd.mean());
    Ok(())
}
