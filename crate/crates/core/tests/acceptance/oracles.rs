//! Independent reference computations for the acceptance suite: exhaustive
//! enumerations and closed forms that share no code with the library paths
//! they certify.

use maxprop_core::lipfree::{FiniteMetricSpace, Molecule};
use maxprop_core::norms::{FiniteVector, SequenceNorm};
use maxprop_core::orlicz::OrliczFunction;

/// James norm by exhaustive enumeration of all increasing index chains
/// (one zero tail position appended, matching the zero-at-infinity
/// convention). Bitmask sweep; fine up to ~20 positions.
pub fn james_by_chain_enumeration(entries: &[f64], p: f64) -> f64 {
    let mut vals = entries.to_vec();
    vals.push(0.0);
    let n = vals.len();
    assert!(n <= 24, "chain enumeration is exponential");
    let mut best = 0.0f64;
    for mask in 1u32..(1u32 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let mut m = mask;
        let first = m.trailing_zeros() as usize;
        m &= m - 1;
        let mut prev = vals[first];
        let mut acc = 0.0f64;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            let d = (vals[i] - prev).abs();
            acc += if p == 2.0 { d * d } else { d.powf(p) };
            prev = vals[i];
        }
        if acc > best {
            best = acc;
        }
    }
    best.powf(1.0 / p)
}

/// Prus block norm by brute force over all 2^(n-1) interval partitions of
/// the support range.
pub fn prus_by_partition_enumeration(x: &FiniteVector, base: &SequenceNorm, p: f64) -> f64 {
    let e = x.entries();
    let n = e.len();
    if n == 0 {
        return 0.0;
    }
    assert!(n <= 16, "partition enumeration is exponential");
    let mut best = 0.0f64;
    for cuts in 0u32..(1u32 << (n - 1)) {
        let mut acc = 0.0f64;
        let mut start = 0usize;
        for i in 0..n {
            if i == n - 1 || cuts & (1 << i) != 0 {
                let b = base
                    .eval(&FiniteVector::new(e[start..=i].to_vec()).unwrap())
                    .unwrap();
                acc += b.powf(p);
                start = i + 1;
            }
        }
        best = best.max(acc);
    }
    best.powf(1.0 / p)
}

/// Closed-form convex conjugate of `t^p` (p > 1): `(p-1) (s/p)^{p/(p-1)}`.
pub fn pow_conjugate(p: f64, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let q = p / (p - 1.0);
    (p - 1.0) * (s / p).powf(q)
}

/// Closed-form convex conjugate of `e^t - 1`: `s ln s - s + 1` for `s >= 1`,
/// `0` below (the supremum over `t >= 0` sits at `t = 0`).
pub fn exp_conjugate(s: f64) -> f64 {
    if s <= 1.0 {
        return 0.0;
    }
    s * s.ln() - s + 1.0
}

/// Growth indices of an Orlicz function by direct derivative analysis:
/// (inf, sup) of `t phi'(t) / phi(t)` over `(0, phi^{-1}(1)]`, with the
/// derivative taken as a central difference on a geometric grid.
pub fn derivative_quotient_indices(phi: &OrliczFunction) -> (f64, f64) {
    // Invert phi at 1 by bisection.
    let mut hi = 1.0f64;
    while phi.eval(hi) < 1.0 {
        hi *= 2.0;
        assert!(hi < 1e12, "phi never reaches 1");
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi.eval(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t1 = 0.5 * (lo + hi);

    let n = 800;
    let (a, b) = (1e-5f64, t1);
    let ratio = (b / a).powf(1.0 / (n - 1) as f64);
    let mut inf = f64::INFINITY;
    let mut sup = f64::NEG_INFINITY;
    let mut t = a;
    for _ in 0..n {
        let h = t * 1e-6;
        let v = phi.eval(t);
        if v > 1e-300 {
            let q = t * (phi.eval(t + h) - phi.eval(t - h)) / (2.0 * h * v);
            inf = inf.min(q);
            sup = sup.max(q);
        }
        t = (t * ratio).min(t1);
    }
    (inf, sup)
}

/// Free-space dual optimum by vertex enumeration: the feasible set
/// `{g : |g_i - g_j| <= d_ij, g_base = 0}` is a polytope whose vertices
/// are given by a spanning tree of tight constraints with a sign per edge.
/// Enumerates every spanning tree of the complete graph and every sign
/// pattern; returns the best feasible pairing with the molecule.
pub fn free_norm_by_tree_enumeration(space: &FiniteMetricSpace, mol: &Molecule) -> f64 {
    let n = space.points();
    assert!(n <= 6, "tree enumeration is exponential");
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j));
        }
    }
    let m = edges.len();
    let scale: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| space.distance(i, j))
        .fold(1.0, f64::max);
    let coeffs = mol.coeffs();
    let mut best = f64::NEG_INFINITY;

    for edge_mask in 0u32..(1u32 << m) {
        if edge_mask.count_ones() as usize != n - 1 {
            continue;
        }
        let chosen: Vec<(usize, usize)> = (0..m)
            .filter(|e| edge_mask & (1 << e) != 0)
            .map(|e| edges[e])
            .collect();
        // Adjacency of the candidate tree.
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (idx, &(i, j)) in chosen.iter().enumerate() {
            adj[i].push((j, idx));
            adj[j].push((i, idx));
        }
        for signs in 0u32..(1u32 << (n - 1)) {
            // Assign g by BFS from the base; disconnected masks leave
            // points unassigned and are skipped.
            let mut g = vec![f64::NAN; n];
            g[0] = 0.0;
            let mut queue = vec![0usize];
            while let Some(u) = queue.pop() {
                for &(v, idx) in &adj[u] {
                    if g[v].is_nan() {
                        let s = if signs & (1 << idx) != 0 { 1.0 } else { -1.0 };
                        g[v] = g[u] + s * space.distance(u, v);
                        queue.push(v);
                    }
                }
            }
            if g.iter().any(|x| x.is_nan()) {
                break; // not spanning; no sign pattern will help
            }
            let feasible = (0..n).all(|i| {
                ((i + 1)..n).all(|j| (g[i] - g[j]).abs() <= space.distance(i, j) + 1e-9 * scale)
            });
            if !feasible {
                continue;
            }
            let pairing: f64 = coeffs.iter().enumerate().map(|(k, a)| a * g[k + 1]).sum();
            best = best.max(pairing);
        }
    }
    best
}
