//! Geometric sampling grids shared by the modulus checker, the Orlicz index
//! estimators and the validation routines.

/// `n` geometrically spaced points spanning `[lo, hi]` (inclusive endpoints).
///
/// Requires `0 < lo < hi` and `n >= 2`.
pub fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2, "invalid geometric grid");
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    let mut pts: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
    // Pin the endpoints exactly; accumulated rounding must not shrink the range.
    pts[0] = lo;
    pts[n - 1] = hi;
    pts
}

/// The `t`-grid on which modulus comparisons are certified:
/// 512 geometric points in `[1e-4, 1e2]` plus `t = 1` exactly
/// (the strictness leg of the domination condition pivots at `t = 1`).
pub fn checker_t_grid() -> Vec<f64> {
    let mut g = geometric(1e-4, 1e2, 512);
    let pos = g.partition_point(|&t| t < 1.0);
    if g[pos] != 1.0 {
        g.insert(pos, 1.0);
    }
    g
}

/// Absolute slack used when comparing curves on the grid. Comparisons that
/// would be decided by less than this margin are treated as not established.
pub const GRID_MARGIN: f64 = 1e-9;
