/// Number of coarse grid samples before golden-section refinement.
pub const DEFAULT_GRID_POINTS: usize = 64;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn score(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Maximizes `f` on `[lo, hi]`: coarse grid of at least 64 points, then
/// golden-section refinement around the best sample down to `tol`.
///
/// Ties on the grid go to the smallest argument, and the returned value is
/// never worse than the best grid sample.
pub fn maximize_scalar<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    maximize_scalar_with_grid(f, lo, hi, tol, DEFAULT_GRID_POINTS)
}

pub fn maximize_scalar_with_grid<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    grid_points: usize,
) -> (f64, f64) {
    assert!(lo < hi, "maximize_scalar needs lo < hi");
    let n = grid_points.max(DEFAULT_GRID_POINTS);
    let step = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| score(f(x))).collect();

    let mut best = 0;
    for i in 1..n {
        if ys[i] > ys[best] {
            best = i;
        }
    }
    let grid_best = (xs[best], ys[best]);

    let mut a = xs[best.saturating_sub(1)];
    let mut b = xs[(best + 1).min(n - 1)];
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = score(f(c));
    let mut fd = score(f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = score(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = score(f(d));
        }
    }
    let (x_ref, f_ref) = if fc >= fd { (c, fc) } else { (d, fd) };
    if f_ref > grid_best.1 {
        (x_ref, f_ref)
    } else {
        grid_best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let (x, fx) = maximize_scalar(|x| -(x - 2.0) * (x - 2.0), 0.0, 5.0, 1e-8);
        assert!((x - 2.0).abs() < 1e-8);
        assert!(fx.abs() < 1e-15);
    }

    #[test]
    fn sine_on_half_period() {
        // A smooth maximum is only resolvable to about √ε.
        let (x, _) = maximize_scalar(f64::sin, 0.0, std::f64::consts::PI, 1e-9);
        assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn flat_function_returns_smallest_argument() {
        let (x, fx) = maximize_scalar(|_| 3.0, -1.0, 1.0, 1e-6);
        assert_eq!(x, -1.0);
        assert_eq!(fx, 3.0);
    }

    #[test]
    fn edge_maximum() {
        let (x, _) = maximize_scalar(|x| x, 0.0, 1.0, 1e-9);
        assert!((x - 1.0).abs() < 1e-9);
    }
}
