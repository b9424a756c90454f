//! Walsh–Fourier analysis on the cube.
//!
//! Coefficients are expectations, `f^(S) = E_x f(x) W_S(x)`, so `f^(0) = E f`
//! and Parseval reads `sum_S f^(S)^2 = E f^2`.

use serde::{Deserialize, Serialize};

use crate::cube::{CubeFunction, NoiseParam};
use crate::error::{argument, domain, Result};
use crate::scalar::h2;
use crate::subsets::SubsetMask;

/// Walsh–Fourier coefficients indexed by subset mask.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl Spectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n == 0 || n > crate::cube::MAX_DIM || coeffs.len() != 1 << n {
            return Err(argument(format!(
                "spectrum of dimension {n} needs 2^n coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Spectrum { n, coeffs })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn get(&self, s: SubsetMask) -> f64 {
        self.coeffs[s.0 as usize]
    }

    /// `sum_S f^(S)^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Unnormalized in-place butterfly: `v[S] <- sum_x v[x] (-1)^{|S & x|}`.
fn butterfly(v: &mut [f64]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(h << 1) {
            for x in block..block + h {
                let a = v[x];
                let b = v[x + h];
                v[x] = a + b;
                v[x + h] = a - b;
            }
        }
        h <<= 1;
    }
}

pub fn wht_forward(f: &CubeFunction) -> Spectrum {
    let mut v = f.values().to_vec();
    butterfly(&mut v);
    let scale = 1.0 / v.len() as f64;
    v.iter_mut().for_each(|c| *c *= scale);
    Spectrum {
        n: f.n(),
        coeffs: v,
    }
}

/// `f(x) = sum_S f^(S) W_S(x)`.
pub fn wht_inverse(s: &Spectrum) -> CubeFunction {
    let mut v = s.coeffs.clone();
    butterfly(&mut v);
    CubeFunction::new(s.n, v).expect("butterfly preserves length and finiteness")
}

/// Scales `f^(S)` by `(1 - 2 eps)^{|S|}`, the Fourier form of `T_eps`.
pub fn noise_multiplier(s: &Spectrum, noise: NoiseParam) -> Spectrum {
    let rho = noise.rho();
    let powers: Vec<f64> = (0..=s.n).map(|d| rho.powi(d as i32)).collect();
    let coeffs = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(mask, &c)| c * powers[(mask as u32).count_ones() as usize])
        .collect();
    Spectrum { n: s.n, coeffs }
}

/// `T_eps f` computed through the Fourier multiplier.
pub fn noise_via_spectrum(f: &CubeFunction, noise: NoiseParam) -> CubeFunction {
    wht_inverse(&noise_multiplier(&wht_forward(f), noise))
}

/// Dirichlet form `E_x sum_{y ~ x} (g(y) - g(x))^2`, summing over the `n`
/// neighbours of `x`. Equals `4 sum_S |S| g^(S)^2`.
pub fn dirichlet_form(g: &CubeFunction) -> f64 {
    let n = g.n();
    let v = g.values();
    let total: f64 = (0..v.len())
        .map(|x| {
            (0..n)
                .map(|i| {
                    let d = v[x ^ (1 << i)] - v[x];
                    d * d
                })
                .sum::<f64>()
        })
        .sum();
    total / v.len() as f64
}

/// Fourier-side evaluation `4 sum_S |S| g^(S)^2`.
pub fn dirichlet_form_fourier(g: &CubeFunction) -> f64 {
    let s = wht_forward(g);
    4.0 * s
        .coeffs
        .iter()
        .enumerate()
        .map(|(mask, c)| (mask as u32).count_ones() as f64 * c * c)
        .sum::<f64>()
}

/// `E(g, g) - 2 ln 2 E g Ent(g)`; nonnegative by the log-Sobolev inequality.
pub fn log_sobolev_gap(g: &CubeFunction) -> Result<f64> {
    let ent = g.entropy()?;
    Ok(dirichlet_form(g) - 2.0 * std::f64::consts::LN_2 * g.mean() * ent)
}

/// Splits `g` into its even part `g0(x) = (g(x) + g(x^c)) / 2` and odd part
/// `g1 = g - g0`.
pub fn even_odd_split(g: &CubeFunction) -> (CubeFunction, CubeFunction) {
    let full = (1usize << g.n()) - 1;
    let v = g.values();
    let even: Vec<f64> = (0..v.len()).map(|x| 0.5 * (v[x] + v[x ^ full])).collect();
    let odd: Vec<f64> = v.iter().zip(&even).map(|(a, e)| a - e).collect();
    (
        CubeFunction::new(g.n(), even).expect("same shape"),
        CubeFunction::new(g.n(), odd).expect("same shape"),
    )
}

/// `sum_{|S| >= d} f^(S)^2`.
pub fn spectral_tail(f: &CubeFunction, d: usize) -> Result<f64> {
    if d > f.n() {
        return Err(argument(format!("degree {d} exceeds n = {}", f.n())));
    }
    let s = wht_forward(f);
    Ok(s
        .coeffs
        .iter()
        .enumerate()
        .filter(|(mask, _)| (*mask as u32).count_ones() as usize >= d)
        .map(|(_, c)| c * c)
        .sum())
}

/// Right-hand side of the even/odd entropy decomposition
/// `Ent(g0) + E_x g0(x) (1 - H2((1 - |g1(x)| / g0(x)) / 2))`, for `E g = 1`.
/// Points with `g0(x) = 0` contribute 0.
pub fn even_odd_entropy(g: &CubeFunction) -> Result<f64> {
    g.ensure_nonnegative()?;
    if (g.mean() - 1.0).abs() > 1e-12 {
        return Err(domain(format!("expected E g = 1, got {}", g.mean())));
    }
    let (g0, g1) = even_odd_split(g);
    let ent0 = g0.entropy()?;
    let vals0 = g0.values();
    let vals1 = g1.values();
    let correction: f64 = vals0
        .iter()
        .zip(vals1)
        .map(|(&a, &b)| {
            if a <= 0.0 {
                0.0
            } else {
                let ratio = (b.abs() / a).min(1.0);
                a * (1.0 - h2((1.0 - ratio) / 2.0))
            }
        })
        .sum::<f64>()
        / vals0.len() as f64;
    Ok(ent0 + correction)
}

/// The quartic majorant `x^2 / (2 ln 2) + (1 - 1/(2 ln 2)) x^4` of
/// `1 - H2((1 - x) / 2)` on `[0, 1]`.
pub fn quartic_majorant(x: f64) -> f64 {
    let c = 1.0 / (2.0 * std::f64::consts::LN_2);
    c * x * x + (1.0 - c) * x.powi(4)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random(n: usize, seed: u64) -> CubeFunction {
        let mut s = seed ^ 0x9E37_79B9_7F4A_7C15;
        CubeFunction::from_fn(n, |_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        })
        .unwrap()
    }

    #[test]
    fn dictator_spectrum() {
        for n in 1..=6 {
            for k in 0..n {
                let s = wht_forward(&CubeFunction::dictator(n, k).unwrap());
                for (mask, &c) in s.coeffs().iter().enumerate() {
                    let expect = if mask == 0 || mask == 1 << k { 0.5 } else { 0.0 };
                    assert!((c - expect).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn constant_and_zero() {
        let s = wht_forward(&CubeFunction::constant(3, 1.5).unwrap());
        assert_eq!(s.coeffs()[0], 1.5);
        assert!(s.coeffs()[1..].iter().all(|&c| c == 0.0));
        let z = wht_inverse(&Spectrum::new(3, vec![0.0; 8]).unwrap());
        assert!(z.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn inverse_of_dictator_spectrum() {
        let mut c = vec![0.0; 16];
        c[0] = 0.5;
        c[1 << 2] = 0.5;
        let g = wht_inverse(&Spectrum::new(4, c).unwrap());
        assert_eq!(g, CubeFunction::dictator(4, 2).unwrap());
    }

    #[test]
    fn round_trips() {
        let f = random(6, 42);
        assert!(wht_inverse(&wht_forward(&f)).max_abs_diff(&f) < 1e-12);
        let s = Spectrum::new(5, random(5, 7).into_values()).unwrap();
        assert!(wht_forward(&wht_inverse(&s)).max_abs_diff(&s) < 1e-12);
    }

    #[test]
    fn parseval() {
        for seed in 0..20 {
            let f = random(1 + seed as usize % 8, seed);
            let s = wht_forward(&f);
            assert!((s.energy() - f.mean_square()).abs() <= 1e-10 * (1.0 + f.mean_square()));
            assert!((s.coeffs()[0] - f.mean()).abs() < 1e-14);
        }
    }

    #[test]
    fn multiplier_examples() {
        let f = random(4, 1);
        let s = wht_forward(&f);
        let half = noise_multiplier(&s, NoiseParam::new(0.5).unwrap());
        assert_eq!(half.coeffs()[0], s.coeffs()[0]);
        assert!(half.coeffs()[1..].iter().all(|&c| c == 0.0));
        assert_eq!(noise_multiplier(&s, NoiseParam::new(0.0).unwrap()), s);
        // Dictator: compare against the pointwise noisy dictator.
        let eps = 0.2;
        let g = CubeFunction::dictator(3, 1).unwrap();
        let p = NoiseParam::new(eps).unwrap();
        let via_mult = noise_multiplier(&wht_forward(&g), p);
        let via_points = wht_forward(&g.noise(p));
        assert!(via_mult.max_abs_diff(&via_points) < 1e-15);
        assert!((via_mult.get(SubsetMask::singleton(1)) - (1.0 - 2.0 * eps) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn multiplier_matches_pointwise_noise() {
        for n in 1..=8 {
            let f = random(n, 100 + n as u64);
            for &eps in &[0.05, 0.25, 0.45] {
                let p = NoiseParam::new(eps).unwrap();
                assert!(noise_via_spectrum(&f, p).max_abs_diff(&f.noise(p)) < 1e-12);
            }
        }
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet_form(&CubeFunction::constant(3, 2.0).unwrap()), 0.0);
        let w = CubeFunction::character(2, SubsetMask::singleton(0)).unwrap();
        assert!((dirichlet_form(&w) - 4.0).abs() < 1e-15);
        assert!((dirichlet_form_fourier(&w) - 4.0).abs() < 1e-15);
        let g = random(6, 3);
        let a = dirichlet_form(&g);
        let b = dirichlet_form_fourier(&g);
        assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn log_sobolev_examples() {
        let c = CubeFunction::constant(3, 1.0).unwrap();
        assert!(log_sobolev_gap(&c).unwrap().abs() < 1e-15);
        // Dictator: Dirichlet form 4 * 1 * (1/2)^2 = 1, E g Ent g = 1/4.
        let g = CubeFunction::dictator(4, 0).unwrap();
        let gap = log_sobolev_gap(&g).unwrap();
        assert!((gap - (1.0 - 2.0 * std::f64::consts::LN_2 * 0.25)).abs() < 1e-14);
        assert!(log_sobolev_gap(&CubeFunction::new(1, vec![-1.0, 1.0]).unwrap()).is_err());
    }

    #[test]
    fn even_odd_examples() {
        let even = CubeFunction::from_fn(3, |x| if x == 0 || x == 7 { 2.0 } else { 1.0 }).unwrap();
        let (e, o) = even_odd_split(&even);
        assert_eq!(e, even);
        assert!(o.values().iter().all(|&v| v == 0.0));
        let w = CubeFunction::character(3, SubsetMask::singleton(0)).unwrap();
        let (e, o) = even_odd_split(&w);
        assert!(e.values().iter().all(|&v| v == 0.0));
        assert_eq!(o, w);
        let g = random(5, 9);
        let (g0, g1) = even_odd_split(&g);
        let s0 = wht_forward(&g0);
        let s1 = wht_forward(&g1);
        for mask in 0..32u32 {
            if mask.count_ones() % 2 == 1 {
                assert!(s0.coeffs()[mask as usize].abs() < 1e-12);
            } else {
                assert!(s1.coeffs()[mask as usize].abs() < 1e-12);
            }
        }
        for x in 0..32 {
            assert!(g1.get(x).abs() <= g0.get(x) + 1e-15);
        }
    }

    #[test]
    fn tails() {
        let f = random(5, 4);
        assert!((spectral_tail(&f, 0).unwrap() - f.mean_square()).abs() < 1e-12);
        let var = f.mean_square() - f.mean() * f.mean();
        assert!((spectral_tail(&f, 1).unwrap() - var).abs() < 1e-10);
        let g = CubeFunction::dictator(4, 3).unwrap();
        assert_eq!(spectral_tail(&g, 2).unwrap(), 0.0);
        assert!(spectral_tail(&g, 5).is_err());
    }

    #[test]
    fn even_odd_entropy_identity() {
        for seed in 0..10 {
            let g = random(5, seed).normalized().unwrap();
            let lhs = g.entropy().unwrap();
            let rhs = even_odd_entropy(&g).unwrap();
            assert!((lhs - rhs).abs() < 1e-10);
        }
        // Atoms where g vanishes at x and x^c.
        let g = CubeFunction::new(2, vec![0.0, 2.0, 2.0, 0.0]).unwrap();
        assert!((g.entropy().unwrap() - even_odd_entropy(&g).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn quartic_bound_on_grid() {
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            assert!(1.0 - h2((1.0 - x) / 2.0) <= quartic_majorant(x) + 1e-12, "x={x}");
        }
    }
}
