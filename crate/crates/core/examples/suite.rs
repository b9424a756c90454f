//! A reduced suite run with a summary per report.

use cube_entropy::verify::suite::{run_suite, SuiteConfig};
use cube_entropy::Result;

fn main() -> Result<()> {
    let cfg = SuiteConfig {
        n_max: 5,
        mgl_trials: 20,
        trials: 40,
        lp_trials: 20,
        property_trials: 100,
        ck_n: 3,
        ..SuiteConfig::default()
    };
    let out = run_suite(&cfg)?;
    for r in &out.reports {
        println!("{:<4} {:<28} n={:<2} eps={:<5} slack={:+.3e} ({} instances)",
            if r.pass { "PASS" } else { "FAIL" }, r.name,
            r.n.map_or("-".into(), |n| n.to_string()), r.eps.map_or("-".into(), |e| e.to_string()),
            r.slack(), r.instances);
    }
    let h = &out.header;
    println!("{} reports over {} instances, {} failed, {} ms", h.reports, h.instances, h.failed, h.runtime_ms);
    println!("sharpened bound tighter on {:.1}% of instances", 100.0 * h.smgl_vs_mgl.fraction);
    println!("{}", h.substitution);
    Ok(())
}
