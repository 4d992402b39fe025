//! Tolerance-aware comparisons shared by every algorithm.
//!
//! Two values are considered tied when they differ by at most `TOL` scaled by
//! `max(1, |a|, |b|)`. Callers resolve remaining ties by ascending item id, which
//! gives every selection rule a deterministic total order.

/// Absolute comparison tolerance before scaling.
pub const TOL: f64 = 1e-9;

#[inline]
fn scale(a: f64, b: f64) -> f64 {
    1.0_f64.max(a.abs()).max(b.abs())
}

/// `a` and `b` are equal up to the scaled tolerance.
#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * scale(a, b)
}

/// `a` exceeds `b` by more than the scaled tolerance.
#[inline]
pub fn definitely_greater(a: f64, b: f64) -> bool {
    a - b > TOL * scale(a, b)
}
