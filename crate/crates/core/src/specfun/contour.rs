//! Placement of straight Mellin-Barnes contours.
//!
//! Any abscissa inside the fundamental strip gives the same integral, but
//! the size of the integrand relative to the result differs by orders of
//! magnitude. Along the real axis the log-modulus is convex for the kernels
//! used here and its minimum marks the saddle point; a vertical contour
//! through it keeps the integrand as small as possible and avoids
//! cancellation when arguments are large or small.

const GOLDEN_ITERATIONS: usize = 90;

/// Minimizer of a unimodal `f` on the open interval `(lo, hi)`.
///
/// Non-finite values are treated as `+inf`, so poles at the interval ends
/// repel the search.
pub(crate) fn golden_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2);
        }
        if b - a <= 1e-12 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
