//! Relative-entropy bound as a parametrized curve, inverted pointwise and
//! compared with Pinsker's inequality.

use pinsker::analytic::{pinsker, umegaki_convex_bound, umegaki_parametrized};

fn main() {
    println!("{:>10} {:>12} {:>14}", "t", "T", "D");
    for t in [1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 50.0] {
        let p = umegaki_parametrized(t);
        println!("{:>10.4} {:>12.9} {:>14.9}", p.t, p.t_dist, p.d);
    }

    println!("\n{:>6} {:>14} {:>14}", "T", "bound", "Pinsker");
    for t in [0.05, 0.2, 0.4, 0.6, 0.8, 0.95, 0.99] {
        println!("{t:>6.2} {:>14.9} {:>14.9}", umegaki_convex_bound(t), pinsker(t));
    }
}
