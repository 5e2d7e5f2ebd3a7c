//! A reduced verification run, then a deliberately impossible one whose
//! counterexample is replayed.

use pinsker::catalog::DivergenceSpec;
use pinsker::verify::{replay, run_suite, SuiteConfig, Tolerances};

fn main() -> pinsker::Result<()> {
    let cfg = SuiteConfig {
        families: vec![DivergenceSpec::Umegaki, DivergenceSpec::Max, DivergenceSpec::smoothed_max(0.2)?],
        dims: vec![2, 3],
        pairs_per_dim: 300,
        ..SuiteConfig::default()
    };
    let report = run_suite(&cfg)?;
    print!("{}", report.to_text());

    let strict = SuiteConfig { tolerances: Tolerances::uniform(0.0), ..cfg.clone() };
    let report = run_suite(&strict)?;
    let failed = report.failures().count();
    println!("\nwith zero tolerance: {failed} failing items");
    if let Some(cx) = report.failures().find_map(|f| f.counterexample.as_ref()) {
        let (margin, still_fails) = replay(cx, &strict.lambda_grid)?;
        println!("replayed {:?} at {:?}: margin {margin:.3e}, still fails = {still_fails}", cx.item.kind, cx.probe);
    }
    Ok(())
}
