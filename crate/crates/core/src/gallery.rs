//! Explicit operators witnessing failures of maximizing properties, with
//! machine-checkable verification reports.
//!
//! Each operator ships a closed-form truncated norm together with an
//! independent structure-aware numeric estimate (iterated row/coordinate
//! maximization); the two must agree to 1e-8. Reports record truncated
//! norms, maximizing-sequence values, coordinate witnesses for the claimed
//! weak or weak* limit, and non-attainment margins. Tolerance violations
//! produce a failing report, not an error.
//!
//! The free-space example (a Schur free space whose functional maximizes
//! along a non-vanishing weak*-convergent sequence) lives in [`crate::lipfree`]
//! and is re-exported here.

use serde::Serialize;
use thiserror::Error;

use crate::norms::{james_norm, lp_norm, sup_norm, FiniteVector, NormError};

pub use crate::lipfree::{build_schur_example, verify_schur_example, SchurExample, SchurReport};

#[derive(Debug, Error)]
pub enum GalleryError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error("optimizer failed to converge: {0}")]
    NoConvergence(String),
}

/// An element of one of the three operator domains.
#[derive(Clone, Debug, Serialize)]
pub enum DomainElement {
    /// `(lambda, x)` in the sup-sum of a line with the Hilbert sequence space.
    SupSum { scalar: f64, vec: Vec<f64> },
    /// l1 coordinates with the designated limit coordinate stored first
    /// (the countable compactification adds one point at infinity).
    WithLimitCoordinate { limit: f64, vec: Vec<f64> },
    /// Plain Hilbert-space coordinates.
    Plain { vec: Vec<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
enum OpKind {
    /// `T(lambda, x) = (n/(n+1) * x_n)_n` into c0; the scalar part is killed.
    DiagonalSupSum,
    /// `T(e_n) = (1 - 1/n) e_n`, `T(e_limit) = 0`, l1 to l1.
    DiagonalL1,
    /// `(Tx)_n = x_1 + (1 - 1/n) x_n`, Hilbert space to bounded sequences.
    RowsToSup,
}

/// A norm-one-in-the-limit operator that does not attain its norm, with the
/// data needed to verify that numerically on finite truncations.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleOp {
    pub name: &'static str,
    /// Catalog spec strings for the domain/codomain pair (the checker's
    /// known-counterexample rule matches on these).
    pub domain_spec: &'static str,
    pub codomain_spec: &'static str,
    pub claimed_norm: f64,
    kind: OpKind,
}

/// `T(lambda, x) = (n/(n+1) x_n)_n` from the sup-sum of a line with the
/// Hilbert sequence space onto c0, `T(1, 0) = 0`. The sequence `(1, e_k)` is
/// maximizing and converges weakly to `(1, 0) != 0`, but the norm 1 is
/// never attained.
pub fn op_a_failing_pair() -> CounterexampleOp {
    CounterexampleOp {
        name: "op_a",
        domain_spec: "r_oplus_inf_l2",
        codomain_spec: "c0",
        claimed_norm: 1.0,
        kind: OpKind::DiagonalSupSum,
    }
}

/// Diagonal `T(e_n) = (1 - 1/n) e_n`, `T(e_limit) = 0`, on l1 viewed from
/// the convergent-sequence predual into l1 with its usual c0 predual. The
/// basis is maximizing and weak*-converges to the limit coordinate (a
/// nonzero point of the domain's weak* structure); the norm 1 is never
/// attained. `T` is the adjoint of the diagonal map on the preduals, which
/// is what makes it weak*-to-weak* continuous (recorded as a note).
pub fn op_b_weakstar_failure() -> CounterexampleOp {
    CounterexampleOp {
        name: "op_b",
        domain_spec: "ell1_as_comega_dual",
        codomain_spec: "ell1_as_c0_dual",
        claimed_norm: 1.0,
        kind: OpKind::DiagonalL1,
    }
}

/// `(Tx)_n = x_1 + (1 - 1/n) x_n` from the Hilbert sequence space into the
/// bounded sequences (`T e_1` is the constant-one sequence). The vectors
/// `(e_1 + e_k)/sqrt(2)` are maximizing and converge weak* to
/// `e_1/sqrt(2) != 0`, but the norm `sqrt(2)` is never attained.
pub fn op_d_l2_linf() -> CounterexampleOp {
    CounterexampleOp {
        name: "op_d",
        domain_spec: "lp:p=2",
        codomain_spec: "ell_infty",
        claimed_norm: std::f64::consts::SQRT_2,
        kind: OpKind::RowsToSup,
    }
}

impl CounterexampleOp {
    /// Operator norm of the truncation to the first `n` coordinates
    /// (closed form).
    pub fn truncated_norm(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self.kind {
            OpKind::DiagonalSupSum => nf / (nf + 1.0),
            OpKind::DiagonalL1 => 1.0 - 1.0 / nf,
            OpKind::RowsToSup => (1.0 + (1.0 - 1.0 / nf).powi(2)).sqrt(),
        }
    }

    /// The k-th element of the canonical maximizing sequence (unit vector
    /// in the domain norm).
    pub fn maximizing_element(&self, k: usize) -> DomainElement {
        let unit = |k: usize| {
            let mut v = vec![0.0; k];
            v[k - 1] = 1.0;
            v
        };
        match self.kind {
            OpKind::DiagonalSupSum => DomainElement::SupSum { scalar: 1.0, vec: unit(k) },
            OpKind::DiagonalL1 => DomainElement::WithLimitCoordinate { limit: 0.0, vec: unit(k) },
            OpKind::RowsToSup => {
                let mut v = unit(k);
                let s = std::f64::consts::FRAC_1_SQRT_2;
                v[0] += if k == 1 { 0.0 } else { 1.0 };
                for e in v.iter_mut() {
                    *e *= s;
                }
                if k == 1 {
                    v[0] = 1.0;
                }
                DomainElement::Plain { vec: v }
            }
        }
    }

    /// The claimed (nonzero) weak or weak* limit of the maximizing sequence.
    pub fn weak_limit(&self) -> DomainElement {
        match self.kind {
            OpKind::DiagonalSupSum => DomainElement::SupSum { scalar: 1.0, vec: vec![] },
            OpKind::DiagonalL1 => DomainElement::WithLimitCoordinate { limit: 1.0, vec: vec![] },
            OpKind::RowsToSup => {
                DomainElement::Plain { vec: vec![std::f64::consts::FRAC_1_SQRT_2] }
            }
        }
    }

    /// Domain norm of an element.
    pub fn domain_norm(&self, el: &DomainElement) -> Result<f64, GalleryError> {
        Ok(match (self.kind, el) {
            (OpKind::DiagonalSupSum, DomainElement::SupSum { scalar, vec }) => {
                let x = FiniteVector::new(vec.clone())?;
                scalar.abs().max(lp_norm(&x, 2.0)?)
            }
            (OpKind::DiagonalL1, DomainElement::WithLimitCoordinate { limit, vec }) => {
                let x = FiniteVector::new(vec.clone())?;
                limit.abs() + lp_norm(&x, 1.0)?
            }
            (OpKind::RowsToSup, DomainElement::Plain { vec }) => {
                lp_norm(&FiniteVector::new(vec.clone())?, 2.0)?
            }
            _ => return Err(GalleryError::BadParams("element does not match the domain".into())),
        })
    }

    /// Image coordinates `1..=coords` of the truncated operator.
    pub fn image(&self, el: &DomainElement, coords: usize) -> Result<Vec<f64>, GalleryError> {
        let at = |v: &[f64], i: usize| v.get(i - 1).copied().unwrap_or(0.0);
        match (self.kind, el) {
            (OpKind::DiagonalSupSum, DomainElement::SupSum { vec, .. }) => Ok((1..=coords)
                .map(|n| (n as f64 / (n as f64 + 1.0)) * at(vec, n))
                .collect()),
            (OpKind::DiagonalL1, DomainElement::WithLimitCoordinate { vec, .. }) => Ok((1..=coords)
                .map(|n| (1.0 - 1.0 / n as f64) * at(vec, n))
                .collect()),
            (OpKind::RowsToSup, DomainElement::Plain { vec }) => Ok((1..=coords)
                .map(|n| at(vec, 1) + (1.0 - 1.0 / n as f64) * at(vec, n))
                .collect()),
            _ => Err(GalleryError::BadParams("element does not match the domain".into())),
        }
    }

    /// Range norm of the image truncated to `coords` coordinates.
    pub fn image_norm(&self, el: &DomainElement, coords: usize) -> Result<f64, GalleryError> {
        let img = FiniteVector::new(self.image(el, coords)?)?;
        Ok(match self.kind {
            OpKind::DiagonalSupSum | OpKind::RowsToSup => sup_norm(&img),
            OpKind::DiagonalL1 => lp_norm(&img, 1.0)?,
        })
    }

    /// Independent numeric estimate of the truncated operator norm by
    /// iterated coordinate/row maximization: repeatedly replace the current
    /// unit vector by the best aligned candidate for its strongest
    /// coordinate/row. Converges to the truncated norm for these operators.
    pub fn numeric_norm_estimate(&self, n: usize) -> Result<f64, GalleryError> {
        // Start from the flat unit vector, the least informed guess.
        let mut el = match self.kind {
            OpKind::DiagonalSupSum => DomainElement::SupSum {
                scalar: 1.0,
                vec: vec![1.0 / (n as f64).sqrt(); n],
            },
            OpKind::DiagonalL1 => {
                DomainElement::WithLimitCoordinate { limit: 0.0, vec: vec![1.0 / n as f64; n] }
            }
            OpKind::RowsToSup => DomainElement::Plain { vec: vec![1.0 / (n as f64).sqrt(); n] },
        };
        let mut value = self.image_norm(&el, n)?;
        for _ in 0..64 {
            // Strongest image coordinate of the current iterate.
            let img = self.image(&el, n)?;
            let best = img
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
                .map(|(i, _)| i + 1)
                .unwrap();
            // Best domain unit vector for that coordinate.
            let candidate = match self.kind {
                OpKind::DiagonalSupSum => {
                    let mut v = vec![0.0; n];
                    v[best - 1] = 1.0;
                    DomainElement::SupSum { scalar: 1.0, vec: v }
                }
                OpKind::DiagonalL1 => {
                    let mut v = vec![0.0; n];
                    v[best - 1] = 1.0;
                    DomainElement::WithLimitCoordinate { limit: 0.0, vec: v }
                }
                OpKind::RowsToSup => {
                    // Align with the row: row_n = e_1 + (1 - 1/n) e_n.
                    let mut v = vec![0.0; n];
                    let c = 1.0 - 1.0 / best as f64;
                    v[0] = 1.0;
                    if best > 1 {
                        v[best - 1] = c;
                    }
                    let norm = (1.0 + if best > 1 { c * c } else { 0.0 }).sqrt();
                    for e in v.iter_mut() {
                        *e /= norm;
                    }
                    DomainElement::Plain { vec: v }
                }
            };
            let cand_value = self.image_norm(&candidate, n)?;
            if cand_value > value + 1e-15 {
                value = cand_value;
                el = candidate;
            } else {
                break;
            }
        }
        Ok(value)
    }

    /// Coordinate functionals witnessing the weak / weak* limit: label,
    /// pairing with the k-th maximizing element, pairing with the claimed
    /// limit, and the closed-form convergence rate at k.
    pub fn weak_limit_witnesses(&self, k: usize) -> Vec<WeakLimitWitness> {
        let kf = k as f64;
        match self.kind {
            OpKind::DiagonalSupSum => vec![
                // (1, e_k) against the scalar coordinate, a fixed Hilbert
                // coordinate, and a square-summable test vector.
                WeakLimitWitness::new("scalar coordinate", 1.0, 1.0, 0.0),
                WeakLimitWitness::new(
                    "hilbert coordinate 1",
                    if k == 1 { 1.0 } else { 0.0 },
                    0.0,
                    0.0,
                ),
                WeakLimitWitness::new("test vector (1/j^2)_j", 1.0 / (kf * kf), 0.0, 1.0 / kf),
            ],
            OpKind::DiagonalL1 => vec![
                // e_k against convergent-sequence test functions f (value at
                // the limit coordinate is lim f).
                WeakLimitWitness::new("constant-one test function", 1.0, 1.0, 0.0),
                WeakLimitWitness::new("vanishing test function (1/n)", 1.0 / kf, 0.0, 1.0 / kf),
            ],
            OpKind::RowsToSup => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                vec![
                    WeakLimitWitness::new("coordinate 1", s, s, 0.0),
                    WeakLimitWitness::new("coordinate 2", if k == 2 { s } else { 0.0 }, 0.0, 0.0),
                    WeakLimitWitness::new(
                        "test vector (1/j)_j",
                        s * (1.0 + 1.0 / kf),
                        s,
                        1.0 / kf,
                    ),
                ]
            }
        }
    }

    /// Closed-form gap between the truncated norm at `n` and the claimed
    /// norm (the non-attainment margin of the truncation).
    pub fn margin(&self, n: usize) -> f64 {
        self.claimed_norm - self.truncated_norm(n)
    }

    /// Notes recorded with every report (weak* continuity of the diagonal
    /// as an adjoint is a structural fact, not a finite computation).
    fn notes(&self) -> Vec<String> {
        match self.kind {
            OpKind::DiagonalSupSum => vec![
                "the maximizing sequence (1, e_k) converges weakly to (1, 0), which the \
                 operator sends to 0"
                    .into(),
            ],
            OpKind::DiagonalL1 => vec![
                "the operator is the adjoint of the diagonal map from c0 into the \
                 convergent sequences, hence weak*-to-weak* continuous"
                    .into(),
                "the designated limit coordinate encodes the extra point of the \
                 compactified index set; the basis weak*-converges to it"
                    .into(),
            ],
            OpKind::RowsToSup => vec![
                "the operator is the adjoint of the map l1 -> l2 sending e_n to the n-th \
                 row e_1 + (1 - 1/n) e_n, hence weak*-to-weak* continuous"
                    .into(),
            ],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakLimitWitness {
    pub functional: String,
    pub along_sequence: f64,
    pub at_limit: f64,
    /// Closed-form bound on `|along_sequence - at_limit|` at this index.
    pub rate: f64,
}

impl WeakLimitWitness {
    fn new(functional: &str, along_sequence: f64, at_limit: f64, rate: f64) -> Self {
        WeakLimitWitness { functional: functional.into(), along_sequence, at_limit, rate }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub op: &'static str,
    pub n: usize,
    pub claimed_norm: f64,
    pub truncated_norm: f64,
    pub numeric_norm_estimate: f64,
    /// `claimed_norm - truncated_norm(n)`: how far the truncation is from
    /// the never-attained supremum.
    pub convergence_gap: f64,
    /// `(k, ||T x_k||)` along the maximizing sequence (geometric sample).
    pub sequence_values: Vec<(usize, f64)>,
    pub weak_limit_witnesses: Vec<WeakLimitWitness>,
    /// `claimed_norm` minus the best value any search found: strictly
    /// positive on every truncation (the norm is not attained).
    pub non_attainment_margin: f64,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    pub notes: Vec<String>,
}

fn sample_indices(n: usize) -> Vec<usize> {
    let mut ks = vec![];
    let mut k = 2usize;
    while k < n {
        ks.push(k);
        k = (k * 3 / 2).max(k + 1);
    }
    ks.push(n);
    ks
}

/// Verify one gallery operator on its `n`-coordinate truncation.
pub fn run_verification(
    op: &CounterexampleOp,
    n: usize,
    tol: f64,
) -> Result<VerificationReport, GalleryError> {
    if n < 2 {
        return Err(GalleryError::BadParams("need n >= 2".into()));
    }
    let mut checks: Vec<CheckResult> = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| {
        checks.push(CheckResult { name, passed, detail });
    };

    // (a) Truncated norms increase toward the claimed norm and stay below it.
    let truncated = op.truncated_norm(n);
    let gap = op.claimed_norm - truncated;
    {
        let samples = sample_indices(n);
        let monotone = samples
            .windows(2)
            .all(|w| op.truncated_norm(w[0]) <= op.truncated_norm(w[1]) + tol);
        let below = samples.iter().all(|&k| op.truncated_norm(k) < op.claimed_norm);
        push(
            "truncated-norm-monotone-below-claimed",
            monotone && below && gap > 0.0,
            format!("truncated norm {truncated} at n = {n}, gap {gap:.3e}"),
        );
    }

    // Independent numeric estimate must agree with the closed form.
    let estimate = op.numeric_norm_estimate(n)?;
    push(
        "numeric-estimate-matches-closed-form",
        (estimate - truncated).abs() <= 1e-8 * (1.0 + truncated),
        format!("closed form {truncated}, iterated maximization {estimate}"),
    );

    // (b) The maximizing sequence is unit and its values approach the claim.
    let mut sequence_values = Vec::new();
    let mut seq_ok = true;
    let mut prev = f64::NEG_INFINITY;
    for k in sample_indices(n) {
        let el = op.maximizing_element(k);
        let dn = op.domain_norm(&el)?;
        if (dn - 1.0).abs() > tol {
            seq_ok = false;
        }
        let value = op.image_norm(&el, n.max(k))?;
        if value < prev - tol || value >= op.claimed_norm {
            seq_ok = false;
        }
        prev = value;
        sequence_values.push((k, value));
    }
    let (last_k, last_value) = *sequence_values.last().unwrap();
    // The remaining distance is controlled by the truncation margin at N.
    if op.claimed_norm - last_value > 2.0 * op.margin(last_k) + tol {
        seq_ok = false;
    }
    push(
        "maximizing-sequence-unit-and-converging",
        seq_ok,
        format!("final value {last_value} at k = {last_k}, claimed {}", op.claimed_norm),
    );

    // (c) Weak-limit witnesses: coordinate functionals converge to the
    // claimed nonzero limit at the recorded rates.
    let witnesses = op.weak_limit_witnesses(n);
    let witness_ok = witnesses
        .iter()
        .all(|w| (w.along_sequence - w.at_limit).abs() <= w.rate + tol);
    let limit_nonzero = match op.weak_limit() {
        DomainElement::SupSum { scalar, vec } => {
            scalar.abs() + vec.iter().map(|v| v * v).sum::<f64>().sqrt() > tol
        }
        DomainElement::WithLimitCoordinate { limit, vec } => {
            limit.abs() + vec.iter().map(|v| v.abs()).sum::<f64>() > tol
        }
        DomainElement::Plain { vec } => vec.iter().map(|v| v * v).sum::<f64>().sqrt() > tol,
    };
    push(
        "weak-limit-witnesses",
        witness_ok && limit_nonzero,
        format!("{} functionals within rate, limit nonzero: {limit_nonzero}", witnesses.len()),
    );

    // (d) Non-attainment: neither the maximizing sequence nor the iterated
    // search exceeds the truncated norm, which sits margin(n) below the
    // claimed norm.
    let search_best = estimate.max(last_value);
    let margin = op.claimed_norm - search_best;
    push(
        "non-attainment-margin",
        search_best <= op.claimed_norm - op.margin(n) + tol && margin > 0.0,
        format!("best value found {search_best}, margin {margin:.3e}"),
    );

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        op: op.name,
        n,
        claimed_norm: op.claimed_norm,
        truncated_norm: truncated,
        numeric_norm_estimate: estimate,
        convergence_gap: gap,
        sequence_values,
        weak_limit_witnesses: witnesses,
        non_attainment_margin: margin,
        checks,
        passed,
        notes: op.notes(),
    })
}

/// Analysis of the norm-one functional `T x = -x(1)/2 + sum_{j>=2} x(j)/j^2`
/// on the quadratic James space, evaluated on the two-parameter family
/// `x = (t1, t2, ..., t2, 0, ...)`.
///
/// Two closed forms of the normalized objective in `t = t1/t2` are in
/// circulation: a hand-factored one with denominator `sqrt((1-t)^2 + t^2)`
/// and the one whose denominator is the James norm of the family itself,
/// `sqrt((1-t)^2 + 1)` for `t <= 1`. They disagree; the report evaluates
/// the factored form at its own critical point and independently maximizes
/// the norm-constrained form through the dynamic program, flagging the
/// discrepancy. Both exceed 1/2, which is all the non-attainment argument
/// needs.
#[derive(Clone, Debug, Serialize)]
pub struct JamesRemarkReport {
    /// Critical point of the factored objective (denominator
    /// `sqrt((1-t)^2 + t^2)`): `(pi^2 - 9)/(2 pi^2 - 15)`.
    pub t_max_closed_form: f64,
    /// The factored objective at that point (about 0.661).
    pub factored_objective_at_t_max: f64,
    /// Independent optimum of the true objective, with the denominator
    /// computed by the James-norm dynamic program instead of a hand-derived
    /// closed form (about 0.5206).
    pub dp_optimum: f64,
    pub dp_optimizer_t: f64,
    /// `|factored - dp|`: the two objective forms genuinely differ; both
    /// still exceed 1/2, which is what the non-attainment argument needs.
    pub discrepancy: f64,
    pub exceeds_half: bool,
    /// `|<x, T>| / ||x||` for the one-spike candidates `x = (t1, 0, ...)`:
    /// exactly 1/2, strictly below the optimum.
    pub spike_candidate_ratio: f64,
    /// The James norm of `(t, 1, ..., 1, 0)` does not depend on the number
    /// of repeated blocks (>= 2), verified numerically.
    pub norm_block_count_independent: bool,
    /// `(k, normalized functional value)` for `k` repeated blocks:
    /// increasing toward the optimum.
    pub sequence_values: Vec<(usize, f64)>,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

/// Partial sum `sum_{j=2}^{m} 1/j^2`.
fn tail_sum(m: usize) -> f64 {
    (2..=m).map(|j| 1.0 / (j * j) as f64).sum()
}

/// James norm of `(t, 1, 1, ..., 1)` with `blocks` ones (the trailing zero
/// is implicit in the norm).
fn family_norm(t: f64, blocks: usize) -> Result<f64, GalleryError> {
    let mut e = vec![1.0; blocks + 1];
    e[0] = t;
    Ok(james_norm(&FiniteVector::new(e)?, 2.0)?)
}

pub fn james_remark_analysis(
    n_terms: usize,
    tol: f64,
) -> Result<JamesRemarkReport, GalleryError> {
    if n_terms < 3 {
        return Err(GalleryError::BadParams("need n_terms >= 3".into()));
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let coeff_sum = pi2 / 6.0 - 1.0; // sum_{j >= 2} 1/j^2
    let mut checks: Vec<CheckResult> = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| {
        checks.push(CheckResult { name, passed, detail });
    };

    // (i) The factored objective and its closed-form critical point.
    let t_max = (pi2 - 9.0) / (2.0 * pi2 - 15.0);
    let factored = |t: f64| (coeff_sum - t / 2.0) / ((1.0 - t) * (1.0 - t) + t * t).sqrt();
    let factored_at_t_max = factored(t_max);
    // Verify it is critical: symmetric difference quotient nearly zero.
    let h = 1e-6;
    let deriv = (factored(t_max + h) - factored(t_max - h)) / (2.0 * h);
    push(
        "factored-form-critical-point",
        deriv.abs() < 1e-4,
        format!("t_max = {t_max}, factored value {factored_at_t_max}, derivative {deriv:.2e}"),
    );

    // (ii) Independent maximization of the true objective with the
    // DP-computed denominator. Coarse scan to bracket, then golden section.
    let blocks = (n_terms - 1).max(2);
    let objective = |t: f64| -> Result<f64, GalleryError> {
        Ok((coeff_sum - t / 2.0) / family_norm(t, 2)?)
    };
    let (mut lo, mut hi) = {
        let mut best_t = 0.0;
        let mut best_v = f64::NEG_INFINITY;
        let scan_n = 1200;
        for i in 0..=scan_n {
            let t = -30.0 + 31.4 * i as f64 / scan_n as f64;
            let v = objective(t)?;
            if v > best_v {
                best_v = v;
                best_t = t;
            }
        }
        let step = 31.4 / scan_n as f64;
        (best_t - step, best_t + step)
    };
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut iter = 0;
    while hi - lo > 1e-11 {
        iter += 1;
        if iter > 300 {
            return Err(GalleryError::NoConvergence("golden section stalled".into()));
        }
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if objective(a)? < objective(b)? {
            lo = a;
        } else {
            hi = b;
        }
    }
    let t_star = 0.5 * (lo + hi);
    let dp_optimum = objective(t_star)?;
    push(
        "dp-optimum-exceeds-half",
        dp_optimum > 0.5 + 1e-3,
        format!("optimum {dp_optimum} at t = {t_star}"),
    );

    // (iii) The block count does not change the norm, so the normalized
    // functional values increase with the number of blocks toward the
    // optimum (the coefficient tail fills in).
    let base_norm = family_norm(t_star, 2)?;
    let mut norm_independent = true;
    for b in [3usize, 5, blocks] {
        if (family_norm(t_star, b)? - base_norm).abs() > 1e-12 * (1.0 + base_norm) {
            norm_independent = false;
        }
    }
    push(
        "james-norm-block-count-independent",
        norm_independent,
        format!("norm {base_norm} for 2..={blocks} blocks"),
    );
    let mut sequence_values = Vec::new();
    let mut increasing = true;
    let mut prev = f64::NEG_INFINITY;
    for k in sample_indices(blocks) {
        // k blocks cover coefficients 1/j^2 for j = 2..=k+1.
        let value = (tail_sum(k + 1) - t_star / 2.0) / family_norm(t_star, k)?;
        if value < prev {
            increasing = false;
        }
        prev = value;
        sequence_values.push((k, value));
    }
    let tail_gap = dp_optimum - prev;
    // The missing coefficient mass is below 1/(blocks + 1).
    let seq_ok = increasing && tail_gap >= -tol && tail_gap <= 1.0 / (blocks as f64 + 1.0) + tol;
    push(
        "sequence-increases-to-optimum",
        seq_ok,
        format!("final value {prev} with {blocks} blocks, optimum {dp_optimum}"),
    );

    // (iv) One-spike candidates attain exactly half their norm: for
    // x = (t1, 0, ...), <x, T> = -t1/2 and ||x|| = |t1|.
    let mut spike_ratio: f64 = 0.0;
    let mut spike_ok = true;
    for t1 in [0.7, 1.0, -1.3] {
        let x = FiniteVector::new(vec![t1, 0.0, 0.0])?;
        let ratio = (t1 / 2.0).abs() / james_norm(&x, 2.0)?;
        if (ratio - 0.5).abs() > 1e-13 {
            spike_ok = false;
        }
        spike_ratio = ratio;
    }
    push(
        "spike-candidates-at-half-norm",
        spike_ok && spike_ratio + 1e-3 < dp_optimum,
        format!("spike ratio {spike_ratio}, optimum {dp_optimum}"),
    );

    let discrepancy = (factored_at_t_max - dp_optimum).abs();
    push(
        "objective-forms-differ",
        discrepancy > 1e-3,
        format!(
            "factored value {factored_at_t_max} vs DP-constrained optimum {dp_optimum}: \
             the factored denominator sqrt((1-t)^2+t^2) is not the James norm of the \
             family, which the dynamic program evaluates to sqrt((1-t)^2+1) for t <= 1"
        ),
    );

    let passed = checks.iter().all(|c| c.passed);
    Ok(JamesRemarkReport {
        t_max_closed_form: t_max,
        factored_objective_at_t_max: factored_at_t_max,
        dp_optimum,
        dp_optimizer_t: t_star,
        discrepancy,
        exceeds_half: dp_optimum > 0.5,
        spike_candidate_ratio: spike_ratio,
        norm_block_count_independent: norm_independent,
        sequence_values,
        checks,
        passed,
    })
}
