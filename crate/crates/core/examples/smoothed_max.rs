//! The smoothed max divergence: the max-divergence bound moved right by
//! epsilon, with a zero region below it.

use pinsker::analytic::convex_bound_analytic;
use pinsker::catalog::DivergenceSpec;
use pinsker::engine::{smooth_convex, smooth_linear, smoothing_slopes, ConvexBound};

fn main() -> pinsker::Result<()> {
    let epsilon = 0.2;
    let base = ConvexBound::closed_form(&DivergenceSpec::Max)?;
    let smoothed = DivergenceSpec::smoothed_max(epsilon)?;

    for t in [0.0, 0.1, 0.2, 0.3, 0.5, 0.8, 0.95] {
        let closed = convex_bound_analytic(&smoothed, t)?.value().unwrap_or(f64::NAN);
        println!("T = {t:.2}: shifted {:.9}  closed form {closed:.9}", smooth_convex(&base, epsilon, t));
    }

    let (_, lambda_max) = smoothing_slopes(&base, epsilon)?;
    println!("\nlinear bounds defined up to lambda = {lambda_max:.6}");
    for lambda in [0.5, 1.0, 2.0, 5.0] {
        println!("L({lambda}) = {:.9}", smooth_linear(&base, epsilon, lambda)?);
    }
    match smooth_linear(&base, epsilon, 2.0 * lambda_max) {
        Err(e) => println!("beyond that: {e}"),
        Ok(v) => println!("unexpected value {v}"),
    }
    Ok(())
}
