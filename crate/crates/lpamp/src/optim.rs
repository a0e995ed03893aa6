//! One-dimensional search helpers shared by the state-evolution and minimax code.

/// Golden-section minimization of `f` on [a, b] until the bracket is below
/// `rel_tol·max(|x|, abs_floor)`. Returns (x, f(x)).
pub fn golden_min(
    mut f: impl FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    rel_tol: f64,
    abs_floor: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= rel_tol * (0.5 * (a + b)).abs().max(abs_floor) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Bisection for a sign change of `f` on [a, b], to `tol` absolute width.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..300 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Minimizes `f` over τ ∈ [0, ∞] using a log grid on [lo, hi] that is extended by decades
/// while the minimum sits on its upper edge, then golden-section in log τ around the best
/// point. `f(0)` and `f(∞)` are compared as candidates; a tie with ∞ goes to ∞.
pub fn minimize_scale(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    n: usize,
    rel_tol: f64,
) -> (f64, f64) {
    let mut grid = log_grid(lo, hi, n);
    let mut vals: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    let step = (hi / lo).powf(1.0 / (n - 1) as f64);
    let f_inf = f(f64::INFINITY);
    let f_zero = f(0.0);
    for _ in 0..120 {
        let last = vals.len() - 1;
        if argmin(&vals) != last || vals[last] <= f_inf {
            break;
        }
        let next = grid[last] * step.max(10f64.powf(0.1));
        grid.push(next);
        vals.push(f(next));
    }
    let i = argmin(&vals);
    let (mut best_t, mut best_f) = (grid[i], vals[i]);
    if i > 0 || vals.len() > 1 {
        let left = if i == 0 { grid[0] / step } else { grid[i - 1] };
        let right = if i + 1 < grid.len() { grid[i + 1] } else { grid[i] * step };
        let (lx, lf) = golden_min(|x| f(x.exp()), left.ln(), right.ln(), rel_tol, 1.0);
        if lf < best_f {
            best_t = lx.exp();
            best_f = lf;
        }
    }
    if f_zero < best_f {
        best_t = 0.0;
        best_f = f_zero;
    }
    if f_inf <= best_f {
        best_t = f64::INFINITY;
        best_f = f_inf;
    }
    (best_t, best_f)
}

/// Index of the smallest value; NaNs are never selected.
pub fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x < v[best] || v[best].is_nan() {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_min(|x| (x - 1.3).powi(2), 0.0, 5.0, 1e-10, 1.0);
        assert!((x - 1.3).abs() < 1e-9);
        assert!(fx < 1e-18);
    }

    #[test]
    fn scale_search_handles_endpoints() {
        let (t, _) = minimize_scale(|t| (t.ln() - 2.0).powi(2), 1e-3, 1e3, 60, 1e-10);
        assert!((t - 2f64.exp()).abs() < 1e-6);
        let (t, _) = minimize_scale(|t| 1.0 / (1.0 + t), 1e-3, 1e3, 60, 1e-10);
        assert!(t.is_infinite());
        let (t, _) = minimize_scale(|t| t, 1e-3, 1e3, 60, 1e-10);
        assert_eq!(t, 0.0);
    }

    #[test]
    fn bisection() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }
}
