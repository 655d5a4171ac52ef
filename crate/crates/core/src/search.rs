//! One-dimensional minimisation and root bracketing.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimiser of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Minimises `f` on `[lo, hi]` (with `lo > 0`): a log-spaced scan of
/// `points` values locates the basin, then golden-section search refines it.
/// The endpoints are returned when they beat the interior estimate.
pub fn minimize_on_log_grid<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize, tol: f64) -> f64 {
    debug_assert!(lo > 0.0 && hi >= lo && points >= 3);
    if hi - lo <= tol {
        return lo;
    }
    let ratio = (hi / lo).ln() / (points - 1) as f64;
    let grid: Vec<f64> = (0..points)
        .map(|i| if i + 1 == points { hi } else { lo * (ratio * i as f64).exp() })
        .collect();
    let best = grid
        .iter()
        .enumerate()
        .map(|(i, &x)| (i, f(x)))
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let a = grid[best.0.saturating_sub(1)];
    let b = grid[(best.0 + 1).min(points - 1)];
    let x = golden_section(&f, a, b, tol);
    [lo, hi]
        .into_iter()
        .fold(x, |cur, end| if f(end) < f(cur) { end } else { cur })
}

/// Bisection for `f(x) = target` with `f` increasing on `[lo, hi]`. Stops when
/// `|f(x) - target| <= tol` or the bracket collapses.
pub fn bisect_increasing<F: Fn(f64) -> f64>(f: F, target: f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..400 {
        mid = 0.5 * (lo + hi);
        let v = f(mid);
        if (v - target).abs() <= tol || hi - lo <= f64::EPSILON * mid.abs() {
            break;
        }
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    mid
}
