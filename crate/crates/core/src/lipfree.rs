//! Lipschitz-free norms over finite pointed metric spaces.
//!
//! A molecule (finitely supported balance of point masses over the non-base
//! points) has free norm equal to the cheapest transport plan balancing it,
//! with the base point absorbing any surplus. Because the metric satisfies
//! the triangle inequality, an optimal plan ships directly from surpluses to
//! deficits, so the problem reduces to a transportation problem solved here
//! by successive shortest paths. Independently, the dual formulation — the
//! largest pairing against a 1-Lipschitz function vanishing at the base —
//! is solved as a linear program by a dense simplex; the two results must
//! agree to 1e-8 (the solver cross-checks itself on every small instance).
//!
//! The module also builds the uniformly discrete space whose free space has
//! the Schur property while carrying a functional that maximizes along a
//! weak*-convergent, non-vanishing sequence without attaining its norm.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LipfreeError {
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("expected {expected} values (one per point including the base), got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("expected {expected} molecule coefficients (one per non-base point), got {got}")]
    MoleculeMismatch { expected: usize, got: usize },
    #[error("primal/dual mismatch: transport cost {primal} vs Lipschitz pairing {dual}")]
    Inconsistent { primal: f64, dual: f64 },
    #[error("solver failed to converge: {0}")]
    NoConvergence(String),
}

/// A finite pointed metric space: points `0..=n` with point 0 as the base.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteMetricSpace {
    /// Full symmetric distance matrix, `(n+1) x (n+1)`, zero diagonal.
    dist: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    /// Validate and wrap a distance matrix (triangle inequality included,
    /// with a 1e-12 relative slack).
    pub fn new(dist: Vec<Vec<f64>>) -> Result<Self, LipfreeError> {
        let n = dist.len();
        if n < 2 {
            return Err(LipfreeError::InvalidMetric(
                "need at least the base point and one other".into(),
            ));
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(LipfreeError::InvalidMetric(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if dist[i][i] != 0.0 {
                return Err(LipfreeError::InvalidMetric(format!("nonzero diagonal at {i}")));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(LipfreeError::InvalidMetric(format!("non-finite entry ({i},{j})")));
                }
                if i != j && v <= 0.0 {
                    return Err(LipfreeError::InvalidMetric(format!(
                        "non-positive distance {v} between distinct points ({i},{j})"
                    )));
                }
                if (v - dist[j][i]).abs() > 1e-12 * (1.0 + v.abs()) {
                    return Err(LipfreeError::InvalidMetric(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let direct = dist[i][j];
                    let detour = dist[i][k] + dist[k][j];
                    if direct > detour + 1e-12 * (1.0 + direct) {
                        return Err(LipfreeError::InvalidMetric(format!(
                            "triangle inequality fails: d({i},{j}) = {direct} > {detour} via {k}"
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { dist })
    }

    /// Build from coordinates in Euclidean space (triangle automatic).
    pub fn from_euclidean_points(points: &[Vec<f64>]) -> Result<Self, LipfreeError> {
        let n = points.len();
        let mut dist = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if points[i].len() != points[j].len() {
                    return Err(LipfreeError::InvalidMetric("dimension mismatch".into()));
                }
                let d: f64 = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                dist[i][j] = d;
                dist[j][i] = d;
            }
        }
        FiniteMetricSpace::new(dist)
    }

    /// Total number of points, base included.
    pub fn points(&self) -> usize {
        self.dist.len()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }
}

/// A molecule: coefficients on the non-base points `1..=n`; the base point
/// implicitly carries the balancing coefficient `-sum`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Molecule {
    coeffs: Vec<f64>,
}

impl Molecule {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, LipfreeError> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(LipfreeError::InvalidMetric("non-finite molecule coefficient".into()));
        }
        Ok(Molecule { coeffs })
    }

    /// The unit mass at point `idx` (1-based among non-base points).
    pub fn delta(space: &FiniteMetricSpace, idx: usize) -> Result<Self, LipfreeError> {
        let n = space.points() - 1;
        if idx == 0 || idx > n {
            return Err(LipfreeError::MoleculeMismatch { expected: n, got: idx });
        }
        let mut coeffs = vec![0.0; n];
        coeffs[idx - 1] = 1.0;
        Ok(Molecule { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Molecule { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }
}

/// Largest slope of `values` (one value per point, base first) over the
/// space: `max |v_i - v_j| / d(i,j)`.
pub fn lipschitz_constant(
    space: &FiniteMetricSpace,
    values: &[f64],
) -> Result<f64, LipfreeError> {
    let n = space.points();
    if values.len() != n {
        return Err(LipfreeError::DimensionMismatch { expected: n, got: values.len() });
    }
    let mut best = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            best = best.max((values[i] - values[j]).abs() / space.dist[i][j]);
        }
    }
    Ok(best)
}

/// Duality pairing `<f, m> = sum_i a_i (f(x_i) - f(base))`.
pub fn pairing(
    space: &FiniteMetricSpace,
    molecule: &Molecule,
    values: &[f64],
) -> Result<f64, LipfreeError> {
    let n = space.points();
    if values.len() != n {
        return Err(LipfreeError::DimensionMismatch { expected: n, got: values.len() });
    }
    if molecule.coeffs.len() != n - 1 {
        return Err(LipfreeError::MoleculeMismatch { expected: n - 1, got: molecule.coeffs.len() });
    }
    Ok(molecule
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| a * (values[i + 1] - values[0]))
        .sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeNormResult {
    /// The free norm (the transport optimum).
    pub value: f64,
    /// Optimal transport cost from the successive-shortest-path solver.
    pub primal_cost: f64,
    /// LP optimum of the dual (1-Lipschitz pairing) when the instance is
    /// small enough for the dense simplex (at most 12 non-base points).
    pub dual_value: Option<f64>,
    /// Optimal 1-Lipschitz witness values (base first), when computed.
    pub dual_witness: Option<Vec<f64>>,
}

/// Largest instance (non-base points) the dense simplex cross-check runs on.
const SIMPLEX_LIMIT: usize = 12;

/// Free norm of a molecule: minimal transport cost, cross-checked against
/// the Lipschitz-dual LP on small instances.
pub fn free_norm(
    space: &FiniteMetricSpace,
    molecule: &Molecule,
) -> Result<FreeNormResult, LipfreeError> {
    let n = space.points() - 1;
    if molecule.coeffs.len() != n {
        return Err(LipfreeError::MoleculeMismatch { expected: n, got: molecule.coeffs.len() });
    }
    let primal = transport_cost(space, molecule)?;
    let (dual_value, dual_witness) = if n <= SIMPLEX_LIMIT {
        let (v, g) = lipschitz_dual_lp(space, molecule)?;
        if (primal - v).abs() > 1e-8 * (1.0 + primal.abs()) {
            return Err(LipfreeError::Inconsistent { primal, dual: v });
        }
        (Some(v), Some(g))
    } else {
        (None, None)
    };
    Ok(FreeNormResult { value: primal, primal_cost: primal, dual_value, dual_witness })
}

/// Minimal cost of a flow balancing the molecule (base absorbs the surplus),
/// by successive shortest augmenting paths on the surplus/deficit bipartite
/// residual graph. Direct surplus-to-deficit shipping is optimal because the
/// metric satisfies the triangle inequality.
fn transport_cost(space: &FiniteMetricSpace, molecule: &Molecule) -> Result<f64, LipfreeError> {
    let n = space.points();
    // Node balances: index 0 is the base.
    let mut balance = vec![0.0f64; n];
    let mut total = 0.0;
    for (i, &a) in molecule.coeffs.iter().enumerate() {
        balance[i + 1] = a;
        total += a;
    }
    balance[0] = -total;

    let scale: f64 = balance.iter().fold(0.0f64, |m, b| m.max(b.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let eps = 1e-14 * scale;
    let sources: Vec<usize> = (0..n).filter(|&i| balance[i] > eps).collect();
    let sinks: Vec<usize> = (0..n).filter(|&i| balance[i] < -eps).collect();
    let mut supply: Vec<f64> = sources.iter().map(|&i| balance[i]).collect();
    let mut demand: Vec<f64> = sinks.iter().map(|&i| -balance[i]).collect();
    // flow[s][t] between sources[s] and sinks[t].
    let mut flow = vec![vec![0.0f64; sinks.len()]; sources.len()];

    let mut guard = 0usize;
    loop {
        let remaining: f64 = supply.iter().sum();
        if remaining <= eps * supply.len().max(1) as f64 {
            break;
        }
        guard += 1;
        if guard > 16 * n * n + 64 {
            return Err(LipfreeError::NoConvergence(
                "too many augmenting iterations in the transport solver".into(),
            ));
        }
        // Bellman-Ford over a layered residual graph. Nodes: sources then
        // sinks. Distances start at 0 on sources with remaining supply.
        let ns = sources.len();
        let nt = sinks.len();
        let mut dist_s = vec![f64::INFINITY; ns];
        let mut dist_t = vec![f64::INFINITY; nt];
        let mut pred_t = vec![usize::MAX; nt]; // best incoming source for sink
        let mut pred_s = vec![usize::MAX; ns]; // best incoming sink for source
        for (s, &ds) in supply.iter().enumerate() {
            if ds > eps {
                dist_s[s] = 0.0;
            }
        }
        for _round in 0..(ns + nt + 1) {
            let mut changed = false;
            for s in 0..ns {
                if dist_s[s].is_finite() {
                    for t in 0..nt {
                        let cand = dist_s[s] + space.dist[sources[s]][sinks[t]];
                        if cand < dist_t[t] - 1e-15 {
                            dist_t[t] = cand;
                            pred_t[t] = s;
                            changed = true;
                        }
                    }
                }
            }
            for t in 0..nt {
                if dist_t[t].is_finite() {
                    for s in 0..ns {
                        if flow[s][t] > eps {
                            let cand = dist_t[t] - space.dist[sources[s]][sinks[t]];
                            if cand < dist_s[s] - 1e-15 {
                                dist_s[s] = cand;
                                pred_s[s] = t;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // Cheapest reachable sink with unmet demand.
        let mut best: Option<(usize, f64)> = None;
        for t in 0..nt {
            if demand[t] > eps && dist_t[t].is_finite()
                && best.is_none_or(|(_, d)| dist_t[t] < d) {
                    best = Some((t, dist_t[t]));
                }
        }
        let Some((t_end, _)) = best else {
            return Err(LipfreeError::NoConvergence(
                "no augmenting path despite remaining supply".into(),
            ));
        };
        // Walk the path backwards collecting the bottleneck.
        let mut path: Vec<(usize, usize, bool)> = Vec::new(); // (s, t, forward)
        let mut bottleneck = demand[t_end];
        let mut t = t_end;
        loop {
            let s = pred_t[t];
            path.push((s, t, true));
            if pred_s[s] == usize::MAX {
                bottleneck = bottleneck.min(supply[s]);
                break;
            }
            let t_prev = pred_s[s];
            path.push((s, t_prev, false));
            bottleneck = bottleneck.min(flow[s][t_prev]);
            t = t_prev;
        }
        let (s_start, _, _) = *path.last().unwrap();
        for &(s, t, forward) in &path {
            if forward {
                flow[s][t] += bottleneck;
            } else {
                flow[s][t] -= bottleneck;
            }
        }
        supply[s_start] -= bottleneck;
        demand[t_end] -= bottleneck;
    }

    let mut cost = 0.0;
    for (s, row) in flow.iter().enumerate() {
        for (t, &x) in row.iter().enumerate() {
            if x > 0.0 {
                cost += x * space.dist[sources[s]][sinks[t]];
            }
        }
    }
    Ok(cost)
}

/// Dual LP: maximize `sum a_i g_i` over 1-Lipschitz `g` with `g(base) = 0`.
///
/// Shifting `h_i = g_i + d(0,i)` makes every variable and every constraint
/// right-hand side non-negative (triangle inequality again), so the origin
/// is feasible and a single-phase dense simplex with Bland's rule applies.
/// Returns the optimum and the witness values `g` (base first).
fn lipschitz_dual_lp(
    space: &FiniteMetricSpace,
    molecule: &Molecule,
) -> Result<(f64, Vec<f64>), LipfreeError> {
    let n = space.points() - 1;
    let a = &molecule.coeffs;
    // Constraints on h (all with rhs >= 0, by the triangle inequality):
    //   h_i - h_j <= d(i,j) + d(0,i) - d(0,j)   for i != j in 1..=n
    //   h_i       <= 2 d(0,i)
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let mut coef = vec![0.0; n];
            coef[i - 1] = 1.0;
            coef[j - 1] = -1.0;
            let rhs = space.dist[i][j] + space.dist[0][i] - space.dist[0][j];
            rows.push((coef, rhs.max(0.0)));
        }
        let mut coef = vec![0.0; n];
        coef[i - 1] = 1.0;
        rows.push((coef, 2.0 * space.dist[0][i]));
    }
    let objective: Vec<f64> = a.clone();
    let h = simplex_maximize(&objective, &rows)?;
    let g: Vec<f64> = std::iter::once(0.0)
        .chain(h.iter().enumerate().map(|(i, &hi)| hi - space.dist[0][i + 1]))
        .collect();
    let value: f64 = a.iter().zip(&g[1..]).map(|(ai, gi)| ai * gi).sum();
    Ok((value, g))
}

/// Dense primal simplex for `max c.x` s.t. `A x <= b`, `x >= 0`, `b >= 0`,
/// with Bland's anti-cycling rule. Small instances only.
fn simplex_maximize(c: &[f64], rows: &[(Vec<f64>, f64)]) -> Result<Vec<f64>, LipfreeError> {
    const TOL: f64 = 1e-10;
    let n = c.len();
    let m = rows.len();
    let width = n + m + 1;
    // Tableau: m constraint rows then the objective row (negated costs).
    let mut t = vec![vec![0.0f64; width]; m + 1];
    for (r, (coef, rhs)) in rows.iter().enumerate() {
        t[r][..n].copy_from_slice(coef);
        t[r][n + r] = 1.0;
        t[r][width - 1] = *rhs;
    }
    for (j, &cj) in c.iter().enumerate() {
        t[m][j] = -cj;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    for _pivot in 0..50_000 {
        // Bland: entering = lowest-index column with negative objective coeff.
        let Some(enter) = (0..n + m).find(|&j| t[m][j] < -TOL) else {
            break; // optimal
        };
        // Ratio test; ties by lowest basis variable index (Bland).
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for r in 0..m {
            if t[r][enter] > TOL {
                let ratio = t[r][width - 1] / t[r][enter];
                let better = match leave {
                    None => true,
                    Some(cur) => {
                        ratio < best_ratio - 1e-15
                            || (ratio <= best_ratio + 1e-15 && basis[r] < basis[cur])
                    }
                };
                if better {
                    best_ratio = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(leave) = leave else {
            return Err(LipfreeError::NoConvergence("unbounded dual LP".into()));
        };
        // Pivot.
        let piv = t[leave][enter];
        for v in t[leave].iter_mut() {
            *v /= piv;
        }
        for r in 0..=m {
            if r != leave && t[r][enter].abs() > 0.0 {
                let factor = t[r][enter];
                let (pivot_row, other) = if r < leave {
                    let (a, b) = t.split_at_mut(leave);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = t.split_at_mut(r);
                    (&a[leave], &mut b[0])
                };
                for (o, p) in other.iter_mut().zip(pivot_row.iter()) {
                    *o -= factor * p;
                }
            }
        }
        basis[leave] = enter;
        if _pivot == 49_999 {
            return Err(LipfreeError::NoConvergence("simplex pivot limit reached".into()));
        }
    }

    let mut x = vec![0.0; n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = t[r][width - 1];
        }
    }
    Ok(x)
}

/// The uniformly discrete space witnessing a Schur free space without norm
/// attainment: base 0 and points `x_1 .. x_n` where, in sup-norm
/// coordinates, `x_1 = 2 e_1` and `x_k = e_1 + (1 + 1/k) e_k` for `k >= 2`.
///
/// Distances: `d(0, x_1) = 2`, `d(0, x_k) = d(x_1, x_k) = 1 + 1/k`, and
/// `d(x_k, x_m) = 1 + 1/min(k, m)`.
#[derive(Clone, Debug, Serialize)]
pub struct SchurExample {
    pub space: FiniteMetricSpace,
    /// The functional under test: 0 at the base and at `x_1`, 1 elsewhere.
    /// Its Lipschitz norm on the n-point truncation is `n/(n+1)`.
    pub f: Vec<f64>,
    /// The distance-to-base function: Lipschitz norm exactly 1.
    pub j: Vec<f64>,
    /// Test functions spanning the weak* convergence check: `d(.,0)`, the
    /// plateau function (2 at x_1, 1 elsewhere), and the vanishing tail
    /// (1/k at x_k, 0 at x_1).
    pub test_functions: Vec<Vec<f64>>,
}

// Index loops: the symmetric distance matrix is filled in (k, m) pairs.
#[allow(clippy::needless_range_loop)]
pub fn build_schur_example(n: usize) -> Result<SchurExample, LipfreeError> {
    if n < 2 {
        return Err(LipfreeError::InvalidMetric("need at least 2 non-base points".into()));
    }
    let total = n + 1;
    let coord = |k: usize| -> f64 {
        // d(0, x_k)
        if k == 1 {
            2.0
        } else {
            1.0 + 1.0 / k as f64
        }
    };
    let mut dist = vec![vec![0.0; total]; total];
    for k in 1..=n {
        dist[0][k] = coord(k);
        dist[k][0] = coord(k);
        for m in (k + 1)..=n {
            let d = if k == 1 {
                1.0 + 1.0 / m as f64
            } else {
                1.0 + 1.0 / k.min(m) as f64
            };
            dist[k][m] = d;
            dist[m][k] = d;
        }
    }
    let space = FiniteMetricSpace::new(dist)?;

    let mut f = vec![0.0; total];
    let mut j = vec![0.0; total];
    let mut plateau = vec![0.0; total];
    let mut tail = vec![0.0; total];
    for k in 1..=n {
        f[k] = if k == 1 { 0.0 } else { 1.0 };
        j[k] = coord(k);
        plateau[k] = if k == 1 { 2.0 } else { 1.0 };
        tail[k] = if k == 1 { 0.0 } else { 1.0 / k as f64 };
    }
    let test_functions = vec![j.clone(), plateau, tail];
    Ok(SchurExample { space, f, j, test_functions })
}

/// Numerical verification of the Schur example on its n-point truncation.
#[derive(Clone, Debug, Serialize)]
pub struct SchurReport {
    pub n: usize,
    /// Lipschitz norm of `f`: expected `n/(n+1)`.
    pub lip_f: f64,
    pub lip_f_expected: f64,
    /// Distance from the full-space norm (1): `1/(n+1)`.
    pub truncation_margin: f64,
    /// Norm of the maximizing molecule `delta(x_n) / d(0, x_n)`.
    pub maximizer_norm: f64,
    /// Its pairing with `f`; equals `lip_f` (the LP optimum over the ball).
    pub maximizer_pairing: f64,
    /// Lipschitz norm of the distance-to-base function: exactly 1.
    pub lip_j: f64,
    /// For each test function: pairing with the n-th maximizing molecule
    /// and with the candidate weak* limit (half the mass at `x_1`).
    pub weakstar_pairings: Vec<(f64, f64)>,
    /// `f(x_n)`: stays at 1, so `f` does not vanish along the sequence and
    /// is not itself a valid weak*-continuity test function.
    pub f_at_tail: f64,
    pub passed: bool,
}

pub fn verify_schur_example(n: usize, tol: f64) -> Result<SchurReport, LipfreeError> {
    let ex = build_schur_example(n)?;
    let space = &ex.space;
    let lip_f = lipschitz_constant(space, &ex.f)?;
    let lip_f_expected = n as f64 / (n + 1) as f64;
    let lip_j = lipschitz_constant(space, &ex.j)?;

    // Maximizing molecule at the tail point.
    let mu = Molecule::delta(space, n)?.scaled(1.0 / space.distance(0, n));
    let maximizer_norm = free_norm(space, &mu)?.value;
    let maximizer_pairing = pairing(space, &mu, &ex.f)?;

    // Candidate weak* limit: half the unit mass at x_1.
    let half_delta_x1 = Molecule::delta(space, 1)?.scaled(0.5);
    let mut weakstar_pairings = Vec::new();
    let mut weakstar_ok = true;
    for h in &ex.test_functions {
        let along = pairing(space, &mu, h)?;
        let at_limit = pairing(space, &half_delta_x1, h)?;
        // The gap closes like 1/n.
        if (along - at_limit).abs() > 2.0 / n as f64 + tol {
            weakstar_ok = false;
        }
        weakstar_pairings.push((along, at_limit));
    }

    let passed = (lip_f - lip_f_expected).abs() <= tol
        && (lip_j - 1.0).abs() <= tol
        && (maximizer_norm - 1.0).abs() <= 1e-8 + tol
        && (maximizer_pairing - lip_f).abs() <= tol
        && weakstar_ok
        && (ex.f[n] - 1.0).abs() <= tol;

    Ok(SchurReport {
        n,
        lip_f,
        lip_f_expected,
        truncation_margin: 1.0 - lip_f,
        maximizer_norm,
        maximizer_pairing,
        lip_j,
        weakstar_pairings,
        f_at_tail: ex.f[n],
        passed,
    })
}
