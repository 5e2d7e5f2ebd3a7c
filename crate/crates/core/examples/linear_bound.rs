//! Optimal linear bounds L(lambda): numeric minimization next to the
//! closed forms.

use pinsker::analytic::linear_bound_analytic;
use pinsker::catalog::DivergenceSpec;
use pinsker::engine::linear_bound_numeric;

fn main() -> pinsker::Result<()> {
    let spec = DivergenceSpec::Umegaki;
    println!("{spec}");
    println!("{:>8} {:>14} {:>14} {:>10} {:>10}", "lambda", "numeric", "closed form", "r*", "s*");
    for lambda in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
        let numeric = linear_bound_numeric(&spec, lambda)?;
        let closed = linear_bound_analytic(&spec, lambda)?.value().map_or(f64::NAN, |p| p.value);
        println!(
            "{lambda:>8.2} {:>14.9} {closed:>14.9} {:>10.6} {:>10.6}",
            numeric.value,
            numeric.pair.r(),
            numeric.pair.s()
        );
    }
    Ok(())
}
