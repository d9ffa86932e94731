//! Norm evaluators on finitely supported real sequences.
//!
//! All evaluators are exact algorithms (no sampling): the James norm is a
//! quadratic dynamic program over index chains, the Lorentz norm a decreasing
//! rearrangement, the Luxemburg norm a bisection on a monotone gauge, and the
//! block norm an `l_p` sum of per-block sup norms over an explicit blocking.

use std::fmt;

use thiserror::Error;

use crate::moduli::{paren_to_colon, split_top_level, validate_lorentz_weights, ModuliError};
use crate::orlicz::{OrliczError, OrliczFunction};

#[derive(Debug, Error)]
pub enum NormError {
    #[error("exponent must satisfy p >= 1, got {0}")]
    BadExponent(f64),
    #[error("vector entries must be finite; entry {index} is {value}")]
    NonFinite { index: usize, value: f64 },
    #[error("coordinate indices are 1-based; got {0}")]
    BadIndex(usize),
    #[error("duplicate coordinate index {0}")]
    DuplicateIndex(usize),
    #[error("vector support has {support} entries but only {weights} weights were given")]
    WeightsExhausted { support: usize, weights: usize },
    #[error(transparent)]
    BadWeights(#[from] ModuliError),
    #[error("invalid blocking: {0}")]
    BadBlocking(String),
    #[error("invalid norm spec `{spec}`: {reason}")]
    BadSpec { spec: String, reason: String },
    #[error(transparent)]
    Orlicz(#[from] OrliczError),
    #[error("cannot parse vector entry `{0}`")]
    BadEntry(String),
}

/// A finitely supported sequence, stored densely from coordinate 1.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteVector {
    entries: Vec<f64>,
}

impl FiniteVector {
    pub fn new(entries: Vec<f64>) -> Result<Self, NormError> {
        for (i, &v) in entries.iter().enumerate() {
            if !v.is_finite() {
                return Err(NormError::NonFinite { index: i + 1, value: v });
            }
        }
        Ok(FiniteVector { entries })
    }

    /// Build from `(index, value)` pairs with 1-based indices.
    pub fn from_pairs(pairs: &[(usize, f64)]) -> Result<Self, NormError> {
        let mut max_idx = 0usize;
        for &(i, _) in pairs {
            if i == 0 {
                return Err(NormError::BadIndex(0));
            }
            max_idx = max_idx.max(i);
        }
        let mut entries = vec![0.0; max_idx];
        let mut seen = vec![false; max_idx];
        for &(i, v) in pairs {
            if seen[i - 1] {
                return Err(NormError::DuplicateIndex(i));
            }
            seen[i - 1] = true;
            entries[i - 1] = v;
        }
        FiniteVector::new(entries)
    }

    /// Parse a comma-separated list of entries, e.g. `1,0,-1`.
    pub fn parse_comma_list(s: &str) -> Result<Self, NormError> {
        let mut entries = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let v: f64 = tok.parse().map_err(|_| NormError::BadEntry(tok.to_string()))?;
            entries.push(v);
        }
        FiniteVector::new(entries)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Absolute values in non-increasing order (the decreasing rearrangement).
    pub fn abs_sorted_desc(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.entries.iter().map(|x| x.abs()).collect();
        v.sort_by(|a, b| b.partial_cmp(a).expect("entries are finite"));
        v
    }

    /// Number of nonzero entries.
    pub fn support_size(&self) -> usize {
        self.entries.iter().filter(|&&x| x != 0.0).count()
    }
}

fn check_exponent(p: f64) -> Result<(), NormError> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(NormError::BadExponent(p));
    }
    Ok(())
}

/// `(sum |x_i|^p)^{1/p}`, scaled to avoid overflow for extreme entries.
pub fn lp_norm(x: &FiniteVector, p: f64) -> Result<f64, NormError> {
    check_exponent(p)?;
    let m = sup_norm(x);
    if m == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(x.entries.iter().map(|v| v.abs()).sum());
    }
    let s: f64 = x.entries.iter().map(|v| (v.abs() / m).powf(p)).sum();
    Ok(m * s.powf(1.0 / p))
}

pub fn sup_norm(x: &FiniteVector) -> f64 {
    x.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// The James `p`-norm: the supremum over increasing index chains
/// `p_1 < ... < p_k` of `(sum_i |x(p_{i+1}) - x(p_i)|^p)^{1/p}`.
///
/// Chains may reach past the support (where the sequence is 0), so the
/// computation appends one virtual zero coordinate; further zeros add
/// nothing. Quadratic dynamic program over all coordinates — chains that
/// revisit equal values through interior zeros can beat the direct jump, so
/// no sparsification is attempted.
pub fn james_norm(x: &FiniteVector, p: f64) -> Result<f64, NormError> {
    check_exponent(p)?;
    let mut vals: Vec<f64> = x.entries.clone();
    vals.push(0.0);
    let n = vals.len();
    // best[j] = largest chain sum (of p-th powers) over chains ending at j.
    let mut best = vec![0.0f64; n];
    let mut overall = 0.0f64;
    for j in 1..n {
        for i in 0..j {
            let step = (vals[j] - vals[i]).abs().powf(p);
            let cand = best[i] + step;
            if cand > best[j] {
                best[j] = cand;
            }
        }
        overall = overall.max(best[j]);
    }
    Ok(overall.powf(1.0 / p))
}

/// Lorentz norm `(sum w_i (x*_i)^p)^{1/p}` with `x*` the decreasing
/// rearrangement of `|x|`. The weight list must cover the support.
pub fn lorentz_norm(x: &FiniteVector, weights: &[f64], p: f64) -> Result<f64, NormError> {
    check_exponent(p)?;
    validate_lorentz_weights("lorentz", weights)?;
    let sorted = x.abs_sorted_desc();
    let support = sorted.iter().filter(|&&v| v != 0.0).count();
    if support > weights.len() {
        return Err(NormError::WeightsExhausted { support, weights: weights.len() });
    }
    let m = sorted.first().copied().unwrap_or(0.0);
    if m == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = sorted
        .iter()
        .take(support)
        .zip(weights)
        .map(|(v, w)| w * (v / m).powf(p))
        .sum();
    Ok(m * s.powf(1.0 / p))
}

/// Luxemburg norm `inf { lambda > 0 : sum phi(|x_i| / lambda) <= 1 }`,
/// computed by bisection on the monotone gauge to relative tolerance 1e-12.
pub fn luxemburg_norm(x: &FiniteVector, phi: &OrliczFunction) -> Result<f64, NormError> {
    let gauge = |lambda: f64| -> f64 {
        x.entries.iter().filter(|&&v| v != 0.0).map(|v| phi.eval(v.abs() / lambda)).sum()
    };
    let m = sup_norm(x);
    if m == 0.0 {
        return Ok(0.0);
    }
    // Bracket the unit level set: grow hi until the gauge drops to <= 1,
    // shrink lo until it exceeds 1.
    let mut hi = m.max(1e-300);
    let mut guard = 0;
    while gauge(hi) > 1.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 4096 {
            return Err(NormError::BadSpec {
                spec: phi.spec().to_string(),
                reason: "luxemburg gauge does not drop below 1 (phi too flat?)".into(),
            });
        }
    }
    let mut lo = hi / 2.0;
    guard = 0;
    while gauge(lo) <= 1.0 {
        lo /= 2.0;
        guard += 1;
        if guard > 4096 {
            // Gauge stays <= 1 down to absurdly small lambda: norm is 0.
            return Ok(0.0);
        }
        if lo < 1e-300 {
            return Ok(0.0);
        }
    }
    while (hi - lo) > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if gauge(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// The `p`-convexification of a base norm: `base(|x|^p)^{1/p}` entrywise.
/// The base must be a 1-unconditional lattice norm (`lp`, `sup`, `lorentz`
/// or `luxemburg`), otherwise the construction is not a norm.
pub fn pconvex_norm(x: &FiniteVector, base: &SequenceNorm, p: f64) -> Result<f64, NormError> {
    check_exponent(p)?;
    if !base.is_unconditional_lattice() {
        return Err(NormError::BadSpec {
            spec: base.to_string(),
            reason: "p-convexification base must be lp, sup, lorentz or luxemburg".into(),
        });
    }
    let powered: Vec<f64> = x.entries.iter().map(|v| v.abs().powf(p)).collect();
    let y = FiniteVector::new(powered)?;
    Ok(base.eval(&y)?.powf(1.0 / p))
}

/// A blocking `1 = n_1 < n_2 < ...` of the coordinates. Block `i` is the
/// index window `[n_i, n_{i+1})`; the last block extends to infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct Blocking {
    boundaries: Vec<usize>,
}

impl Blocking {
    pub fn new(boundaries: Vec<usize>) -> Result<Self, NormError> {
        if boundaries.first() != Some(&1) {
            return Err(NormError::BadBlocking("first boundary must be 1".into()));
        }
        if boundaries.windows(2).any(|w| w[1] <= w[0]) {
            return Err(NormError::BadBlocking("boundaries must be strictly increasing".into()));
        }
        Ok(Blocking { boundaries })
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    /// Inclusive 1-based index windows `[start, end]` of the blocks; the
    /// last block is capped at the support length `n`.
    fn windows(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.boundaries.len());
        for (k, &start) in self.boundaries.iter().enumerate() {
            let end = self.boundaries.get(k + 1).map(|e| e - 1).unwrap_or(n.max(start));
            out.push((start, end));
        }
        out
    }
}

/// The Prus block norm: the supremum over interval blockings of the support
/// range of `(sum_k base(x restricted to block k)^p)^{1/p}`, computed by
/// dynamic programming over block endpoints (O(N^2) base evaluations).
/// With an explicit blocking, evaluates that blocking alone; its value is a
/// lower-bound certificate for the supremum.
pub fn prus_block_norm(
    x: &FiniteVector,
    base: &SequenceNorm,
    p: f64,
    blocking: Option<&Blocking>,
) -> Result<f64, NormError> {
    check_exponent(p)?;
    let n = x.len();
    // base norm of the entries with indices in [a, b] (may overshoot the
    // support, where the sequence is 0).
    let window = |a: usize, b: usize| -> Result<f64, NormError> {
        let hi = b.min(n);
        if a > hi {
            return Ok(0.0);
        }
        base.eval(&FiniteVector::new(x.entries[a - 1..hi].to_vec())?)
    };
    match blocking {
        Some(bl) => {
            let mut vals = Vec::new();
            for (a, b) in bl.windows(n) {
                vals.push(window(a, b)?);
            }
            lp_norm(&FiniteVector::new(vals)?, p)
        }
        None => {
            let m = sup_norm(x);
            if m == 0.0 {
                return Ok(0.0);
            }
            // Scale to unit sup so the p-th powers cannot overflow.
            let scaled = FiniteVector::new(x.entries.iter().map(|v| v / m).collect())?;
            let window = |a: usize, b: usize| -> Result<f64, NormError> {
                base.eval(&FiniteVector::new(scaled.entries[a - 1..b].to_vec())?)
            };
            // g[j] = best sum of base^p over blockings of [1..=j].
            let mut g = vec![0.0f64; n + 1];
            for j in 1..=n {
                let mut best = f64::NEG_INFINITY;
                for (i, gi) in g[..j].iter().enumerate() {
                    best = best.max(gi + window(i + 1, j)?.powf(p));
                }
                g[j] = best;
            }
            Ok(m * g[n].powf(1.0 / p))
        }
    }
}

/// A parseable, evaluable sequence norm.
#[derive(Clone, Debug)]
pub enum SequenceNorm {
    Lp { p: f64 },
    Sup,
    James { p: f64 },
    Lorentz { p: f64, weights: Vec<f64> },
    Luxemburg { phi: OrliczFunction },
    PConvex { base: Box<SequenceNorm>, p: f64 },
    PrusBlock { base: Box<SequenceNorm>, p: f64, blocking: Option<Blocking> },
}

impl fmt::Display for SequenceNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceNorm::Lp { p } => write!(f, "lp(p={p})"),
            SequenceNorm::Sup => write!(f, "sup"),
            SequenceNorm::James { p } => write!(f, "james(p={p})"),
            SequenceNorm::Lorentz { p, weights } => write!(f, "lorentz(p={p}, w={weights:?})"),
            SequenceNorm::Luxemburg { phi } => write!(f, "luxemburg(phi={})", phi.spec()),
            SequenceNorm::PConvex { base, p } => write!(f, "pconvex(base={base}, p={p})"),
            SequenceNorm::PrusBlock { base, p, blocking } => match blocking {
                Some(b) => write!(f, "prus(p={p}, base={base}, blocking={:?})", b.boundaries()),
                None => write!(f, "prus(p={p}, base={base})"),
            },
        }
    }
}

impl SequenceNorm {
    /// Parse a norm spec: `lp:p=2`, `sup`, `james:p=2`,
    /// `lorentz:p=1,w=1 0.5`, `luxemburg:phi=exp`,
    /// `pconvex:p=2,base=lp(p=2)`, `prus:p=2,base=lp(p=2),blocking=1 3 5`
    /// (prus base defaults to `sup`; omitting `blocking` takes the supremum
    /// over all blockings).
    pub fn parse(spec: &str) -> Result<Self, NormError> {
        let spec = spec.trim();
        let err = |reason: String| NormError::BadSpec { spec: spec.to_string(), reason };
        let (name, rest) = match spec.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (spec, None),
        };

        let mut p: Option<f64> = None;
        let mut weights: Option<Vec<f64>> = None;
        let mut phi: Option<String> = None;
        let mut base: Option<String> = None;
        let mut blocking: Option<Vec<usize>> = None;
        if let Some(rest) = rest {
            for item in split_top_level(rest, ',') {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| err(format!("expected key=value, got `{item}`")))?;
                let v = v.trim();
                match k.trim() {
                    "p" => p = Some(v.parse().map_err(|_| err(format!("bad p `{v}`")))?),
                    "w" => {
                        let ws: Result<Vec<f64>, _> =
                            v.split_whitespace().map(|t| t.parse::<f64>()).collect();
                        weights = Some(ws.map_err(|_| err(format!("bad weights `{v}`")))?);
                    }
                    "phi" => phi = Some(v.to_string()),
                    "base" => base = Some(paren_to_colon(v)),
                    "blocking" => {
                        let bs: Result<Vec<usize>, _> =
                            v.split_whitespace().map(|t| t.parse::<usize>()).collect();
                        blocking = Some(bs.map_err(|_| err(format!("bad blocking `{v}`")))?);
                    }
                    other => return Err(err(format!("unknown key `{other}`"))),
                }
            }
        }
        let need_p = || p.ok_or_else(|| err("missing `p`".into()));
        match name.to_ascii_lowercase().as_str() {
            "lp" => {
                let p = need_p()?;
                check_exponent(p)?;
                Ok(SequenceNorm::Lp { p })
            }
            "sup" | "linf" => Ok(SequenceNorm::Sup),
            "james" => {
                let p = need_p()?;
                check_exponent(p)?;
                Ok(SequenceNorm::James { p })
            }
            "lorentz" => {
                let p = need_p()?;
                check_exponent(p)?;
                let w = weights.ok_or_else(|| err("missing `w`".into()))?;
                validate_lorentz_weights("lorentz", &w)?;
                Ok(SequenceNorm::Lorentz { p, weights: w })
            }
            "luxemburg" => {
                let phi = phi.ok_or_else(|| err("missing `phi`".into()))?;
                Ok(SequenceNorm::Luxemburg { phi: OrliczFunction::parse(&phi)? })
            }
            "pconvex" | "p_convexification" => {
                let p = need_p()?;
                check_exponent(p)?;
                let base = base.ok_or_else(|| err("missing `base`".into()))?;
                let base = SequenceNorm::parse(&base)?;
                if !base.is_unconditional_lattice() {
                    return Err(err("base must be lp, sup, lorentz or luxemburg".into()));
                }
                Ok(SequenceNorm::PConvex { base: Box::new(base), p })
            }
            "prus" | "prus_block" => {
                let p = need_p()?;
                check_exponent(p)?;
                let base = match base {
                    Some(b) => SequenceNorm::parse(&b)?,
                    None => SequenceNorm::Sup,
                };
                let blocking = blocking.map(Blocking::new).transpose()?;
                Ok(SequenceNorm::PrusBlock { base: Box::new(base), p, blocking })
            }
            other => Err(err(format!(
                "unknown norm `{other}` (known: lp, sup, james, lorentz, luxemburg, pconvex, prus)"
            ))),
        }
    }

    /// Whether the norm is 1-unconditional and lattice-monotone (valid as a
    /// p-convexification base).
    pub fn is_unconditional_lattice(&self) -> bool {
        matches!(
            self,
            SequenceNorm::Lp { .. }
                | SequenceNorm::Sup
                | SequenceNorm::Lorentz { .. }
                | SequenceNorm::Luxemburg { .. }
        )
    }

    pub fn eval(&self, x: &FiniteVector) -> Result<f64, NormError> {
        match self {
            SequenceNorm::Lp { p } => lp_norm(x, *p),
            SequenceNorm::Sup => Ok(sup_norm(x)),
            SequenceNorm::James { p } => james_norm(x, *p),
            SequenceNorm::Lorentz { p, weights } => lorentz_norm(x, weights, *p),
            SequenceNorm::Luxemburg { phi } => luxemburg_norm(x, phi),
            SequenceNorm::PConvex { base, p } => pconvex_norm(x, base, *p),
            SequenceNorm::PrusBlock { base, p, blocking } => {
                prus_block_norm(x, base, *p, blocking.as_ref())
            }
        }
    }
}
