//! Principal branch of the Lambert W function on the real line.

use std::f64::consts::E;

use crate::error::{Error, Result};

/// `1/e`, the magnitude of the branch point.
pub const INV_E: f64 = 1.0 / E;

const MAX_ITER: usize = 50;

/// Arguments this far below `-1/e` are treated as rounding of the branch
/// point rather than as domain errors.
const BRANCH_SLACK: f64 = 1e-15;

/// Principal value `w >= -1` solving `w e^w = x`, for `x >= -1/e`.
///
/// Halley iteration started from the branch-point series
/// `-1 + p - p^2/3 + 11 p^3/72`, `p = sqrt(2(e x + 1))`, when `x < -0.25`,
/// from `ln(1 + x)` up to `x = 3`, and from `L1 - L2 + L2/L1`
/// (`L1 = ln x`, `L2 = ln ln x`) beyond.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain(x));
    }
    if x <= -INV_E {
        return if -INV_E - x <= BRANCH_SLACK {
            Ok(-1.0)
        } else {
            Err(Error::Domain(x))
        };
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }

    let mut w = if x < -0.25 {
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0))
    } else if x < 3.0 {
        x.ln_1p()
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        // Residual at rounding level: further steps only chase noise.
        if f.abs() <= 4.0 * f64::EPSILON * x.abs() || wp1 == 0.0 {
            return Ok(w);
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = w - step;
        if (next - w).abs() <= 4.0 * f64::EPSILON * (1.0 + next.abs()) {
            return Ok(next);
        }
        w = next;
    }
    Err(Error::Convergence(format!(
        "Lambert W did not converge for x = {x}"
    )))
}
