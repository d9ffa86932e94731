//! Orlicz functions and their small-argument geometry: conjugates, doubling
//! behaviour at zero, Matuszewska-Orlicz indices, Boyd-type exponent ranges
//! and the induced power-type modulus bounds for the sequence space built
//! from the function.
//!
//! Everything here is sampling-based numerics over geometric grids: the
//! monotonicity predicates behind the indices are checked in log space (so
//! extreme exponents cannot overflow), and limits at zero are estimated from
//! the smallest sampled decade. Results are accurate to roughly 1e-4 for the
//! index searches and are validated against derivative-quotient oracles in
//! the test suite.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::grid::geometric;
use crate::moduli::{BoundSide, Coeff, ModulusRole, ModulusSpec, ScalarCurve};

#[derive(Debug, Error)]
pub enum OrliczError {
    #[error("invalid Orlicz spec `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },
    #[error("invalid Orlicz function `{label}`: {reason}")]
    InvalidFunction { label: String, reason: String },
    #[error("no convexity bound: the upper index is infinite")]
    NoConvexityBound,
}

/// Index searches are capped here; a predicate that still holds at the cap
/// is reported as the cap (lower index) or as infinity (upper index).
pub const MAX_INDEX: f64 = 512.0;

// Dense sampling: the monotonicity predicates compare log-log secants, which
// average the derivative quotient over each interval; the grid must be fine
// enough that the averaging error stays below the 1e-3 index tolerance.
const INDEX_GRID_POINTS: usize = 8192;
const LOG_TOL: f64 = 1e-9;
/// Numerical indices are resolved no finer than this; reflexivity calls use
/// it as a margin over the boundary value 1.
pub const INDEX_TOL: f64 = 1e-3;

/// A validated Orlicz function: convex, non-decreasing, `phi(0) = 0`, not
/// identically zero. Validation samples `[0, 10]`; behaviour beyond that
/// range never influences the sequence-space geometry (unit-ball coordinates
/// stay below `phi^{-1}(1)`).
#[derive(Clone)]
pub struct OrliczFunction {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    label: String,
    spec: String,
    /// `phi^{-1}(1)`: the largest coordinate a unit-ball vector can have.
    inv_at_one: f64,
    index_p: f64,
    index_q: f64,
}

impl fmt::Debug for OrliczFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrliczFunction")
            .field("spec", &self.spec)
            .field("index_p", &self.index_p)
            .field("index_q", &self.index_q)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Delta2Report {
    /// Whether the doubling ratio `phi(2t)/phi(t)` stayed below the cap
    /// (1e6) on the sampled approach to zero.
    pub satisfied: bool,
    /// Largest doubling ratio over the smallest usable sampled decade;
    /// `None` when the function underflows there.
    pub ratio_estimate: Option<f64>,
}

/// Everything the `orlicz` CLI subcommand reports.
#[derive(Clone, Debug, Serialize)]
pub struct OrliczReport {
    pub spec: String,
    pub index_p: f64,
    /// `None` encodes an infinite upper index.
    pub index_q: Option<f64>,
    pub boyd_alpha: f64,
    pub boyd_beta: f64,
    pub delta2_at_zero: Delta2Report,
    pub reflexive_sequence_space: bool,
    pub convexity_bound: Option<ModulusSpec>,
    pub smoothness_bound: ModulusSpec,
}

impl OrliczFunction {
    /// Validate and wrap a function; computes `phi^{-1}(1)` and both indices
    /// up front (a few thousand evaluations).
    pub fn new<F>(label: impl Into<String>, spec: impl Into<String>, f: F) -> Result<Self, OrliczError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let label = label.into();
        let spec = spec.into();
        let invalid = |reason: String| OrliczError::InvalidFunction { label: label.clone(), reason };

        let at_zero = f(0.0);
        if at_zero.abs() > 1e-12 {
            return Err(invalid(format!("phi(0) = {at_zero}, must be 0")));
        }
        let mut xs = vec![0.0];
        xs.extend(geometric(1e-8, 10.0, 384));
        let mut prev_slope = f64::NEG_INFINITY;
        for w in xs.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (f(a), f(b));
            if !fa.is_finite() || !fb.is_finite() {
                return Err(invalid(format!("non-finite value near t = {b}")));
            }
            if fb < fa - 1e-12 * (1.0 + fa.abs()) {
                return Err(invalid(format!("decreasing on [{a}, {b}]")));
            }
            let slope = (fb - fa) / (b - a);
            if slope < prev_slope - 1e-9 * (1.0 + prev_slope.abs()) {
                return Err(invalid(format!("not convex: slope drops at t = {a}")));
            }
            prev_slope = prev_slope.max(slope);
        }
        if f(10.0) <= 0.0 {
            return Err(invalid("identically zero on the sampled range".into()));
        }

        let inv_at_one = invert_at_one(&f, &label)?;
        // Log-space samples on (0, phi^{-1}(1)] drive both index searches.
        // Points where phi underflows to 0 carry no usable slope information
        // and are dropped (the samples near phi^{-1}(1) always survive).
        let samples: Vec<(f64, f64)> = geometric(inv_at_one * 1e-8, inv_at_one, INDEX_GRID_POINTS)
            .into_iter()
            .filter_map(|u| {
                let v = f(u);
                (v > 0.0 && v.is_finite()).then(|| (u.ln(), v.ln()))
            })
            .collect();
        debug_assert!(samples.len() >= 8);
        let index_p = search_index_p(&samples);
        let index_q = search_index_q(&samples);

        Ok(OrliczFunction { f: Arc::new(f), label, spec, inv_at_one, index_p, index_q })
    }

    /// Parse a function spec:
    /// * `pow <p>` — `t^p` with `1 <= p <= 64`;
    /// * `exp` — `e^t - 1`;
    /// * `poly <c2> <c3> ...` — `c2 t^2 + c3 t^3 + ...` with non-negative
    ///   coefficients, at least one positive (up to 16 of them).
    pub fn parse(spec: &str) -> Result<Self, OrliczError> {
        let spec = spec.trim().to_string();
        let invalid = |reason: String| OrliczError::InvalidSpec { spec: spec.clone(), reason };
        let mut toks = spec.split_whitespace();
        match toks.next() {
            Some("pow") => {
                let p: f64 = toks
                    .next()
                    .ok_or_else(|| invalid("missing exponent".into()))?
                    .parse()
                    .map_err(|_| invalid("exponent is not a number".into()))?;
                if toks.next().is_some() {
                    return Err(invalid("too many arguments".into()));
                }
                if !(1.0..=64.0).contains(&p) {
                    return Err(invalid(format!("exponent must be in [1, 64], got {p}")));
                }
                OrliczFunction::new(format!("t^{p}"), spec.clone(), move |t| t.powf(p))
            }
            Some("exp") => {
                if toks.next().is_some() {
                    return Err(invalid("too many arguments".into()));
                }
                OrliczFunction::new("e^t - 1", spec.clone(), |t: f64| t.exp_m1())
            }
            Some("poly") => {
                let coeffs: Result<Vec<f64>, _> = toks.map(|t| t.parse::<f64>()).collect();
                let coeffs = coeffs.map_err(|_| invalid("coefficient is not a number".into()))?;
                if coeffs.is_empty() || coeffs.len() > 16 {
                    return Err(invalid("need between 1 and 16 coefficients".into()));
                }
                if coeffs.iter().any(|&c| c < 0.0 || !c.is_finite()) {
                    return Err(invalid("coefficients must be non-negative and finite".into()));
                }
                if coeffs.iter().all(|&c| c == 0.0) {
                    return Err(invalid("at least one coefficient must be positive".into()));
                }
                let label = format!(
                    "sum of c_k t^k with c = {:?} (degrees 2..={})",
                    coeffs,
                    coeffs.len() + 1
                );
                let cs = coeffs.clone();
                OrliczFunction::new(label, spec.clone(), move |t: f64| {
                    cs.iter()
                        .enumerate()
                        .map(|(k, c)| c * t.powi(k as i32 + 2))
                        .sum()
                })
            }
            Some(other) => Err(invalid(format!("unknown form `{other}` (known: pow, exp, poly)"))),
            None => Err(invalid("empty spec".into())),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        (self.f)(t)
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `phi^{-1}(1)`.
    pub fn inv_at_one(&self) -> f64 {
        self.inv_at_one
    }

    /// Lower Matuszewska-Orlicz index at zero:
    /// `sup { p : u^{-p} phi(u) is non-decreasing on (0, phi^{-1}(1)] }`.
    /// Capped at [`MAX_INDEX`].
    pub fn index_p(&self) -> f64 {
        self.index_p
    }

    /// Upper Matuszewska-Orlicz index at zero:
    /// `inf { q : u^{-q} phi(u) is non-increasing on (0, phi^{-1}(1)] }`,
    /// `f64::INFINITY` when no exponent below [`MAX_INDEX`] works.
    pub fn index_q(&self) -> f64 {
        self.index_q
    }

    /// Fenchel conjugate `phi*(t) = sup_{s >= 0} (s t - phi(s))`, by
    /// golden-section on the concave objective. Returns `f64::INFINITY`
    /// when the supremum is still growing at `s = 1e14`.
    pub fn conjugate(&self, t: f64) -> Result<f64, OrliczError> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(OrliczError::InvalidSpec {
                spec: self.spec.clone(),
                reason: format!("conjugate argument must be finite and >= 0, got {t}"),
            });
        }
        let g = |s: f64| s * t - self.eval(s);
        // Bracket the maximizer: double until the objective stops improving.
        let mut hi = 1.0f64;
        loop {
            let here = g(hi);
            let there = g(2.0 * hi);
            if !(there > here + 1e-15 * (1.0 + here.abs())) {
                break;
            }
            hi *= 2.0;
            if hi > 1e14 {
                return Ok(f64::INFINITY);
            }
        }
        hi *= 2.0;
        // Golden-section maximization on [0, hi].
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (0.0f64, hi);
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut gc, mut gd) = (g(c), g(d));
        for _ in 0..200 {
            if b - a < 1e-13 * (1.0 + b) {
                break;
            }
            if gc > gd {
                b = d;
                d = c;
                gd = gc;
                c = b - inv_phi * (b - a);
                gc = g(c);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + inv_phi * (b - a);
                gd = g(d);
            }
        }
        Ok(g(0.5 * (a + b)).max(0.0))
    }

    /// Doubling behaviour of `phi` on the approach to zero, sampled on the
    /// grid `[1e-8, 1e-1]`.
    pub fn delta2_at_zero(&self) -> Delta2Report {
        const CAP: f64 = 1e6;
        let ts = geometric(1e-8, 1e-1, 128);
        let mut satisfied = true;
        let mut smallest_decade: Option<f64> = None;
        for &t in &ts {
            let (lo, hi) = (self.eval(t), self.eval(2.0 * t));
            if lo <= 0.0 || !hi.is_finite() {
                // Underflow (or blow-up): cannot certify doubling here.
                satisfied = false;
                continue;
            }
            let ratio = hi / lo;
            if ratio > CAP {
                satisfied = false;
            }
            if t <= 1e-7 {
                let best = smallest_decade.get_or_insert(ratio);
                *best = best.max(ratio);
            }
        }
        Delta2Report { satisfied, ratio_estimate: smallest_decade }
    }

    /// Boyd-type exponent range by direct extraction: with
    /// `e(u, t) = ln(phi(t u) / phi(u)) / ln t` at `t = 1e-6`, returns
    /// `(inf_u e, sup_u e)` over `u` in `(0, phi^{-1}(1)]`. The pair always
    /// sits inside `[index_p, index_q]` up to sampling error.
    pub fn boyd_indices(&self) -> (f64, f64) {
        let t = 1e-6f64;
        let ln_t = t.ln();
        let mut alpha = f64::INFINITY;
        let mut beta = f64::NEG_INFINITY;
        for u in geometric(self.inv_at_one * 1e-2, self.inv_at_one, 128) {
            let (num, den) = (self.eval(t * u), self.eval(u));
            if num <= 0.0 || den <= 0.0 {
                continue;
            }
            let e = (num.ln() - den.ln()) / ln_t;
            alpha = alpha.min(e);
            beta = beta.max(e);
        }
        (alpha, beta)
    }

    /// Convexity-modulus lower bound for the sequence space: power type
    /// `index_q`, valid for all `t`. Errors when the index is infinite.
    ///
    /// The exponent is padded up by [`INDEX_TOL`]: the numerical search can
    /// only under-estimate the upper index, and the power-type curve grows
    /// as its exponent shrinks, so the padding keeps the bound sound.
    pub fn convexity_bound(&self) -> Result<ModulusSpec, OrliczError> {
        if !self.index_q.is_finite() {
            return Err(OrliczError::NoConvexityBound);
        }
        let q = self.index_q + INDEX_TOL;
        Ok(ModulusSpec::bounds(
            ModulusRole::Convexity,
            BoundSide::all_t(ScalarCurve::PowerType { p: q }),
            BoundSide::all_t(ScalarCurve::Identity),
        )
        .with_power_type(q, Coeff::Known(2f64.powf(1.0 / q) - 1.0)))
    }

    /// Smoothness-modulus upper bound for the sequence space: power type
    /// `index_p`, valid for all `t` (vacuous when the index is 1).
    ///
    /// Padded down by [`INDEX_TOL`] for the mirror-image soundness reason:
    /// the search can only over-estimate the lower index.
    pub fn smoothness_bound(&self) -> ModulusSpec {
        let p = (self.index_p - INDEX_TOL).max(1.0);
        ModulusSpec::bounds(
            ModulusRole::Smoothness,
            BoundSide::all_t(ScalarCurve::C0Kink),
            BoundSide::all_t(ScalarCurve::PowerType { p }),
        )
        .with_power_type(p, Coeff::Known(1.0 / p))
    }

    /// Both modulus bounds; errors when no convexity bound exists.
    pub fn moduli_bounds(&self) -> Result<(ModulusSpec, ModulusSpec), OrliczError> {
        Ok((self.convexity_bound()?, self.smoothness_bound()))
    }

    /// Whether the sequence space built from the function is reflexive:
    /// lower index strictly above 1 (with the numerical margin) and upper
    /// index finite.
    pub fn reflexive_sequence_space(&self) -> bool {
        self.index_p > 1.0 + INDEX_TOL && self.index_q.is_finite()
    }

    pub fn report(&self) -> OrliczReport {
        let (alpha, beta) = self.boyd_indices();
        OrliczReport {
            spec: self.spec.clone(),
            index_p: self.index_p,
            index_q: self.index_q.is_finite().then_some(self.index_q),
            boyd_alpha: alpha,
            boyd_beta: beta,
            delta2_at_zero: self.delta2_at_zero(),
            reflexive_sequence_space: self.reflexive_sequence_space(),
            convexity_bound: self.convexity_bound().ok(),
            smoothness_bound: self.smoothness_bound(),
        }
    }
}

fn invert_at_one<F: Fn(f64) -> f64>(f: &F, label: &str) -> Result<f64, OrliczError> {
    let mut hi = 1.0f64;
    let mut guard = 0;
    while f(hi) < 1.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(OrliczError::InvalidFunction {
                label: label.to_string(),
                reason: "phi never reaches 1".into(),
            });
        }
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `u^{-p} phi(u)` non-decreasing, checked in log space on the samples.
fn non_decreasing_after_division(samples: &[(f64, f64)], p: f64) -> bool {
    samples.windows(2).all(|w| {
        let ((lu0, lf0), (lu1, lf1)) = (w[0], w[1]);
        lf1 - p * lu1 >= lf0 - p * lu0 - LOG_TOL
    })
}

/// `u^{-q} phi(u)` non-increasing, checked in log space on the samples.
fn non_increasing_after_division(samples: &[(f64, f64)], q: f64) -> bool {
    samples.windows(2).all(|w| {
        let ((lu0, lf0), (lu1, lf1)) = (w[0], w[1]);
        lf1 - q * lu1 <= lf0 - q * lu0 + LOG_TOL
    })
}

fn search_index_p(samples: &[(f64, f64)]) -> f64 {
    // Convexity with phi(0) = 0 makes phi(u)/u non-decreasing, so p = 1
    // always qualifies; the predicate is monotone (anti-tone in p).
    if non_decreasing_after_division(samples, MAX_INDEX) {
        return MAX_INDEX;
    }
    let (mut lo, mut hi) = (1.0f64, MAX_INDEX);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if non_decreasing_after_division(samples, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn search_index_q(samples: &[(f64, f64)]) -> f64 {
    if !non_increasing_after_division(samples, MAX_INDEX) {
        return f64::INFINITY;
    }
    if non_increasing_after_division(samples, 1.0) {
        return 1.0;
    }
    let (mut lo, mut hi) = (1.0f64, MAX_INDEX);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if non_increasing_after_division(samples, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
