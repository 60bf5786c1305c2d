//! Equispaced trapezoidal rule for 2π-periodic integrands.
//!
//! For a smooth periodic function the rule converges geometrically, and it is exact
//! for trigonometric polynomials of degree below the node count.

use std::f64::consts::PI;

/// Nodes `k_j = −π + 2πj/n`, `j = 0..n`. The endpoint π coincides with −π and is
/// not repeated.
pub fn periodic_nodes(n: usize) -> impl Iterator<Item = f64> + Clone {
    let h = 2.0 * PI / n as f64;
    (0..n).map(move |j| -PI + h * j as f64)
}

/// `(1/2π) ∫_{−π}^{π} f(k) dk` with `n` equispaced nodes.
pub fn mean_over_period<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    periodic_nodes(n).map(f).sum::<f64>() / n as f64
}
