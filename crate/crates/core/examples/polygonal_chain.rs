//! Convex bound from the upper envelope of numeric tangents, compared with
//! the closed form.

use pinsker::analytic::PiecewiseBound;
use pinsker::catalog::DivergenceSpec;
use pinsker::engine::{build_chain, build_linear_bound, numeric_convex_bound, LambdaGrid};

fn main() -> pinsker::Result<()> {
    let spec = DivergenceSpec::Collision;

    // Plain 400-point grid, then the adaptively refined chain.
    let coarse = build_chain(&build_linear_bound(&spec, &LambdaGrid::default())?)?;
    let refined = numeric_convex_bound(&spec)?;
    let closed = PiecewiseBound::for_spec(&spec)?;

    println!("{spec}, closed-form breakpoints at T = {:?}", closed.breakpoints());
    println!("{:>6} {:>14} {:>14} {:>14}", "T", "grid chain", "refined", "closed form");
    for k in 0..=9 {
        let t = 0.1 * k as f64 + 0.05;
        let exact = closed.eval(t).value().unwrap_or(f64::NAN);
        println!("{t:>6.2} {:>14.9} {:>14.9} {exact:>14.9}", coarse.eval(t), refined.eval(t));
    }
    Ok(())
}
