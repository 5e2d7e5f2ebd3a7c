//! Quantum divergences of one random qubit pair, and what happens to them
//! under measurement in the eigenbasis of rho - sigma.

use pinsker::catalog::{eval_binary, DivergenceSpec};
use pinsker::quantum::{classicalize, eval_quantum, sample_pair, trace_distance, RenyiVariant};

fn main() -> pinsker::Result<()> {
    let pair = sample_pair(7, 2, 0)?;
    let binary = classicalize(&pair);
    println!("T = {:.6}, classical pair r = {:.6}, s = {:.6}", trace_distance(&pair), binary.r(), binary.s());

    for spec in [DivergenceSpec::Umegaki, DivergenceSpec::renyi(1.5)?, DivergenceSpec::Collision, DivergenceSpec::Max] {
        let petz = eval_quantum(&spec, &pair, RenyiVariant::Petz)?.value();
        let sandwiched = eval_quantum(&spec, &pair, RenyiVariant::Sandwiched)?.value();
        let classical = eval_binary(&spec, binary)?.value();
        println!(
            "{:<24} petz {petz:>10.6}  sandwiched {sandwiched:>10.6}  measured {classical:>10.6}",
            spec.to_string()
        );
    }
    Ok(())
}
