//! 4th-order five-point differentiation stencils on a uniform grid.
//!
//! All coefficient sets share the 1/(12h) normalization; interior points use
//! the centered stencil, the two points at each boundary use one-sided
//! variants of the same order.

const CENTER: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
const EDGE_0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const EDGE_1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
const EDGE_N1: [f64; 5] = [-1.0, 6.0, -18.0, 10.0, 3.0];
const EDGE_N: [f64; 5] = [3.0, -16.0, 36.0, -48.0, 25.0];

/// Stencil for sample `j` of `0..=n`: coefficients (to be divided by 12h)
/// and the offset of the first coefficient relative to `j`.
pub fn stencil_at(j: usize, n: usize) -> (&'static [f64; 5], isize) {
    debug_assert!(n >= 4 && j <= n);
    if j == 0 {
        (&EDGE_0, 0)
    } else if j == 1 {
        (&EDGE_1, -1)
    } else if j == n - 1 {
        (&EDGE_N1, -3)
    } else if j == n {
        (&EDGE_N, -4)
    } else {
        (&CENTER, -2)
    }
}

/// Trapezoidal rule with uniform spacing `h`.
pub fn trapezoid(h: f64, f: &[f64]) -> f64 {
    if f.len() < 2 {
        return 0.0;
    }
    let ends = 0.5 * (f[0] + f[f.len() - 1]);
    let interior: f64 = f[1..f.len() - 1].iter().sum();
    h * (ends + interior)
}
