//! Curvature-dependent robustness factor.
//!
//! For curvature `c ∈ (0, 1]` the factor is `α = (1 − x) / (2 − (2 − c) x)`
//! where `x ∈ [0, 1]` solves `(1/c)(1 − e^{−cx}) = (1 − x) / (2 − (2 − c) x)`.
//! At `c = 0` the left side degenerates to `x` and the root is `1/2`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// Below this curvature the `c → 0` limit is used.
pub const LIMIT_THRESHOLD: f64 = 1e-9;

/// Bisection stops once the bracket is this narrow.
pub const BRACKET_WIDTH: f64 = 1e-12;

/// Robustness factor of the best deterministic policy previously known for
/// fully curved objectives, `2(1 − 1/e)/21`.
pub fn kawase_deterministic() -> f64 {
    2.0 * (1.0 - (-1.0f64).exp()) / 21.0
}

/// Best possible factor for modular objectives.
pub const MODULAR_OPTIMUM: f64 = 0.5;

fn check_domain(c: f64) -> Result<()> {
    if (0.0..=1.0).contains(&c) {
        Ok(())
    } else {
        Err(Error::Domain(format!("curvature {c} outside [0, 1]")))
    }
}

fn decreasing_side(c: f64, z: f64) -> f64 {
    (1.0 - z) / (2.0 - (2.0 - c) * z)
}

/// `h(z) = (1/c)(1 − e^{−cz}) − (1 − z)/(2 − (2 − c)z)`; increasing on `[0, 1]`.
pub fn residual(c: f64, z: f64) -> f64 {
    -(-c * z).exp_m1() / c - decreasing_side(c, z)
}

/// Root in `[0, 1]` of the balance equation.
pub fn solve_x(c: f64) -> Result<f64> {
    check_domain(c)?;
    if c <= LIMIT_THRESHOLD {
        return Ok(0.5);
    }
    // h(0) = -1/2 < 0 and h(1) = (1 - e^{-c})/c > 0
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > BRACKET_WIDTH {
        let mid = 0.5 * (lo + hi);
        if residual(c, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn alpha(c: f64) -> Result<f64> {
    let x = solve_x(c)?;
    Ok(decreasing_side(c, x))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundResult {
    pub c: f64,
    pub x: f64,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundTable {
    pub rows: Vec<BoundResult>,
    pub kawase_deterministic: f64,
    pub modular_optimum: f64,
}

impl BoundTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("c,x,alpha\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{}", r.c, r.x, r.alpha);
        }
        let _ = writeln!(out, "# kawase_deterministic={}", self.kawase_deterministic);
        let _ = writeln!(out, "# modular_optimum={}", self.modular_optimum);
        out
    }
}

pub fn bound(c: f64) -> Result<BoundResult> {
    let x = solve_x(c)?;
    Ok(BoundResult {
        c,
        x,
        alpha: decreasing_side(c, x),
    })
}

pub fn bound_table(grid: &[f64]) -> Result<BoundTable> {
    Ok(BoundTable {
        rows: grid.iter().map(|&c| bound(c)).collect::<Result<_>>()?,
        kawase_deterministic: kawase_deterministic(),
        modular_optimum: MODULAR_OPTIMUM,
    })
}

/// Parses `start:end:step` into grid points `start + i·step ≤ end`.
///
/// Points are computed by multiplication, not accumulation, and a final point
/// within `1e-9` of `end` is snapped onto it.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Config(format!("malformed grid '{spec}', expected start:end:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (start, end, step) = (nums[0], nums[1], nums[2]);
    if !(start.is_finite() && end.is_finite() && step.is_finite()) || step <= 0.0 || end < start {
        return Err(bad());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    let mut grid: Vec<f64> = (0..count).map(|i| start + i as f64 * step).collect();
    if let Some(last) = grid.last_mut() {
        if (*last - end).abs() <= 1e-9 {
            *last = end;
        }
    }
    for &c in &grid {
        check_domain(c)?;
    }
    Ok(grid)
}
