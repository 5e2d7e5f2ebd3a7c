//! Print the divergence families and where closed forms exist.

use pinsker::catalog::{catalog_list, eval_binary, BinaryPair, DivergenceSpec};

fn main() -> pinsker::Result<()> {
    for entry in catalog_list() {
        println!("{:<14} {:<22} {}", entry.name, format!("{:?}", entry.analytic), entry.note);
    }

    let pair = BinaryPair::new(0.9, 0.3)?;
    println!("\nD(diag(0.9, 0.1) || diag(0.3, 0.7)), T = {:.2}", pair.trace_distance());
    let specs = [
        DivergenceSpec::Umegaki,
        DivergenceSpec::Fidelity,
        DivergenceSpec::renyi(1.5)?,
        DivergenceSpec::Collision,
        DivergenceSpec::Max,
        DivergenceSpec::hellinger(1.5)?,
        DivergenceSpec::NeymanChi2,
        DivergenceSpec::PearsonChi2,
    ];
    for spec in specs {
        println!("  {:<28} {:.6}", spec.to_string(), eval_binary(&spec, pair)?.value());
    }
    Ok(())
}
