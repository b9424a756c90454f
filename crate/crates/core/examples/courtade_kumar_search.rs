//! Exhaustive search for the most informative boolean function.

use cube_entropy::verify::ck::ck_exhaustive_search;
use cube_entropy::{NoiseParam, Result};

fn main() -> Result<()> {
    for n in 1..=4 {
        for eps in [0.3, 0.45] {
            let s = ck_exhaustive_search(n, NoiseParam::new(eps)?)?;
            println!(
                "n = {n} eps = {eps}: max I = {:.12}, 1 - H2(eps) = {:.12}, {} maximizers, dictator-type: {}, {} functions in {} ms",
                s.max, s.bound, s.maximizers.len(), s.dictator_type, s.functions, s.runtime_ms
            );
        }
    }
    Ok(())
}
