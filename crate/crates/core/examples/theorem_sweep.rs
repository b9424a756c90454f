//! Seeded sweeps of the sharpened bounds, printed as CSV.

use cube_entropy::verify::commands::{bound_sweep, theorem_sweep, Theorem};
use cube_entropy::verify::report::to_csv;
use cube_entropy::verify::Ctx;
use cube_entropy::Result;

fn main() -> Result<()> {
    let ctx = Ctx::default();
    let cells = bound_sweep(&ctx, Theorem::Main, 3..=6, &[0.1, 0.4], 50, 9, false)?;
    print!("{}", to_csv(&cells));
    let ts = theorem_sweep(&ctx, Theorem::NoisyTs, 5, 0.25, 20, 9)?;
    let worst = ts.iter().map(|r| r.slack()).fold(f64::INFINITY, f64::min);
    println!("noisy-ts and w-identity over 20 functions: worst slack {worst:.3e}");
    Ok(())
}
