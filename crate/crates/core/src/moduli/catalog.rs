//! Catalog of sequence/function spaces with their isomorphic flags and
//! asymptotic moduli, plus the `name:key=value,...` spec-string parser used
//! by the CLI and the pair checker.
//!
//! Every descriptor stores only *certified* information: exact moduli where a
//! closed form is known, two-sided estimates where not, and the universal
//! envelopes otherwise. Flags that are not established for a family default
//! to `false` (they are informational; the checker never treats `false` as a
//! negative fact).

use serde::Serialize;

use super::{
    BoundSide, Coeff, ModuliError, ModulusRole, ModulusSpec, ScalarCurve,
};
use crate::orlicz::OrliczFunction;

/// Isomorphic-level facts about a space. `is_dual_of` holds a catalog spec
/// string for the predual when one is representable (it may name a space the
/// catalog cannot resolve, e.g. the predual of a James space; consumers must
/// treat unresolvable preduals as "dual, structure unknown").
#[derive(Clone, Debug, Serialize)]
pub struct SpaceFlags {
    pub reflexive: bool,
    pub schur: bool,
    pub dunford_pettis: bool,
    pub weakstar_dunford_pettis: bool,
    pub is_dual_of: Option<String>,
    pub subspace_of_c0: bool,
}

impl SpaceFlags {
    fn none() -> Self {
        SpaceFlags {
            reflexive: false,
            schur: false,
            dunford_pettis: false,
            weakstar_dunford_pettis: false,
            is_dual_of: None,
            subspace_of_c0: false,
        }
    }
}

/// Parameters a family was instantiated with (unused fields stay `None`).
#[derive(Clone, Debug, Default, Serialize)]
pub struct SpaceParams {
    pub p: Option<f64>,
    pub weights: Option<Vec<f64>>,
    pub phi: Option<String>,
    pub base: Option<String>,
}

/// A catalog space: flags plus its three asymptotic moduli.
///
/// `delta_star` is present only when a weak* structure with a recorded
/// estimate exists. `rho_is_renorm_only` marks smoothness bounds that hold
/// for an equivalent norm rather than the stored norm itself; such bounds
/// must not be fed to rules that need the original norm.
#[derive(Clone, Debug, Serialize)]
pub struct SpaceDescriptor {
    pub name: String,
    pub display: String,
    pub params: SpaceParams,
    pub flags: SpaceFlags,
    pub delta: ModulusSpec,
    pub delta_star: Option<ModulusSpec>,
    pub rho: ModulusSpec,
    pub rho_is_renorm_only: bool,
    pub notes: Vec<String>,
}

impl SpaceDescriptor {
    /// Whether the space carries a weak* topology the checker may use:
    /// either an explicit predual or reflexivity (canonical predual).
    pub fn is_dual_space(&self) -> bool {
        self.flags.is_dual_of.is_some() || self.flags.reflexive
    }

    /// The predual's descriptor, when `is_dual_of` names a catalog space.
    pub fn resolve_predual(&self) -> Option<SpaceDescriptor> {
        self.flags.is_dual_of.as_deref().and_then(|s| parse_space(s).ok())
    }
}

pub fn catalog_names() -> &'static [&'static str] {
    &[
        "lp",
        "c0",
        "ell1_as_c0_dual",
        "ell1_as_comega_dual",
        "ell_infty",
        "sum_finite_dim_p",
        "lorentz",
        "orlicz",
        "james",
        "lp_interval",
        "r_oplus_inf_l2",
        "p_convexification",
        "scalar",
    ]
}

fn bad(space: &str, reason: impl Into<String>) -> ModuliError {
    ModuliError::BadParams { space: space.to_string(), reason: reason.into() }
}

/// Exact power-type modulus with its small-`t` power-type metadata:
/// convexity-role curves dominate `(2^{1/p}-1) t^p` on `[0,1]`, the
/// smoothness-role curve is dominated by `t^p / p` there.
fn power_exact(role: ModulusRole, p: f64) -> ModulusSpec {
    let constant = match role {
        ModulusRole::Convexity | ModulusRole::WeakStarConvexity => 2f64.powf(1.0 / p) - 1.0,
        ModulusRole::Smoothness => 1.0 / p,
    };
    ModulusSpec::exact(role, ScalarCurve::PowerType { p })
        .expect("power-type curve is fully known")
        .with_power_type(p, Coeff::Known(constant))
}

fn kink_exact(role: ModulusRole) -> ModulusSpec {
    ModulusSpec::exact(role, ScalarCurve::C0Kink).expect("kink curve is fully known")
}

fn scaled(coeff: Coeff, exponent: f64) -> ScalarCurve {
    ScalarCurve::ScaledPower { coeff, exponent }
}

/// Parse a space spec string: `name` or `name:key=value,key=value`.
///
/// Keys: `p` (number), `w` (whitespace-separated weights), `phi` (an Orlicz
/// function spec such as `pow 2`, `exp` or `poly 1 0.5`), `base` (a nested
/// space written as `name(key=value;key=value)`).
pub fn parse_space(spec: &str) -> Result<SpaceDescriptor, ModuliError> {
    let spec = spec.trim();
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n.trim(), Some(r)),
        None => (spec, None),
    };
    let mut params = SpaceParams::default();
    if let Some(rest) = rest {
        for item in split_top_level(rest, ',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| bad(name, format!("expected key=value, got `{item}`")))?;
            let value = value.trim();
            match key.trim() {
                "p" => {
                    let p: f64 = value
                        .parse()
                        .map_err(|_| bad(name, format!("`p` is not a number: `{value}`")))?;
                    params.p = Some(p);
                }
                "w" => {
                    let mut ws = Vec::new();
                    for tok in value.split_whitespace() {
                        let w: f64 = tok
                            .parse()
                            .map_err(|_| bad(name, format!("weight is not a number: `{tok}`")))?;
                        ws.push(w);
                    }
                    params.weights = Some(ws);
                }
                "phi" => params.phi = Some(value.to_string()),
                "base" => params.base = Some(paren_to_colon(value)),
                other => return Err(bad(name, format!("unknown key `{other}`"))),
            }
        }
    }
    lookup_space(name, &params)
}

/// Split on `sep` ignoring separators nested inside parentheses.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Rewrite the nested-space form `name(k=v;k=v)` into the top-level form
/// `name:k=v,k=v` so the same parser handles both.
pub(crate) fn paren_to_colon(s: &str) -> String {
    let s = s.trim();
    match s.split_once('(') {
        Some((name, rest)) => {
            let inner = rest.strip_suffix(')').unwrap_or(rest);
            format!("{}:{}", name.trim(), inner.replace(';', ","))
        }
        None => s.to_string(),
    }
}

/// Build the descriptor for catalog family `name` with `params`.
pub fn lookup_space(name: &str, params: &SpaceParams) -> Result<SpaceDescriptor, ModuliError> {
    use ModulusRole::{Convexity, Smoothness, WeakStarConvexity};

    let key = name.trim().to_ascii_lowercase();
    match key.as_str() {
        "lp" => {
            let p = require_p(&key, params)?;
            if !(p > 1.0) {
                return Err(bad(
                    &key,
                    "requires p > 1 (the space with p = 1 is cataloged as ell1_as_c0_dual)",
                ));
            }
            let conj = p / (p - 1.0);
            Ok(SpaceDescriptor {
                name: key.clone(),
                display: format!("lp(p={p})"),
                params: SpaceParams { p: Some(p), ..Default::default() },
                flags: SpaceFlags {
                    reflexive: true,
                    is_dual_of: Some(format!("lp:p={conj}")),
                    ..SpaceFlags::none()
                },
                delta: power_exact(Convexity, p),
                delta_star: Some(power_exact(WeakStarConvexity, p)),
                rho: power_exact(Smoothness, p),
                rho_is_renorm_only: false,
                notes: vec![],
            })
        }
        "c0" => Ok(SpaceDescriptor {
            name: key.clone(),
            display: "c0".into(),
            params: SpaceParams::default(),
            flags: SpaceFlags {
                dunford_pettis: true,
                subspace_of_c0: true,
                ..SpaceFlags::none()
            },
            delta: kink_exact(Convexity),
            delta_star: None,
            rho: kink_exact(Smoothness),
            rho_is_renorm_only: false,
            notes: vec![],
        }),
        "ell1_as_c0_dual" => Ok(SpaceDescriptor {
            name: key.clone(),
            display: "ell1 (as c0 dual)".into(),
            params: SpaceParams::default(),
            flags: SpaceFlags {
                schur: true,
                dunford_pettis: true,
                weakstar_dunford_pettis: true,
                is_dual_of: Some("c0".into()),
                ..SpaceFlags::none()
            },
            delta: power_exact(Convexity, 1.0),
            delta_star: Some(
                ModulusSpec::exact(WeakStarConvexity, ScalarCurve::Identity)
                    .expect("identity is fully known"),
            ),
            rho: power_exact(Smoothness, 1.0),
            rho_is_renorm_only: false,
            notes: vec![
                "weak* structure induced by c0; the weak* convexity modulus is maximal (= t)"
                    .into(),
            ],
        }),
        "ell1_as_comega_dual" => Ok(SpaceDescriptor {
            name: key.clone(),
            display: "ell1 (as C[0,omega] dual)".into(),
            params: SpaceParams::default(),
            flags: SpaceFlags {
                schur: true,
                dunford_pettis: true,
                weakstar_dunford_pettis: true,
                is_dual_of: Some("c_omega".into()),
                ..SpaceFlags::none()
            },
            delta: power_exact(Convexity, 1.0),
            delta_star: None,
            rho: power_exact(Smoothness, 1.0),
            rho_is_renorm_only: false,
            notes: vec![
                "same Banach space as ell1_as_c0_dual; only the weak* structure differs".into(),
                "the predual C[0,omega] (convergent sequences) is not a subspace of c0".into(),
            ],
        }),
        "ell_infty" => Ok(SpaceDescriptor {
            name: key.clone(),
            display: "ell_infty".into(),
            params: SpaceParams::default(),
            flags: SpaceFlags {
                dunford_pettis: true,
                weakstar_dunford_pettis: true,
                is_dual_of: Some("ell1_as_c0_dual".into()),
                ..SpaceFlags::none()
            },
            delta: ModulusSpec::unknown(Convexity),
            delta_star: None,
            rho: ModulusSpec::unknown(Smoothness),
            rho_is_renorm_only: false,
            notes: vec![
                "Grothendieck space with the Dunford-Pettis property; weak*-null bounded \
                 sequences are weakly null, so the weak* variant follows"
                    .into(),
                "no weak* convexity estimate recorded".into(),
            ],
        }),
        "sum_finite_dim_p" => {
            let p = require_p(&key, params)?;
            if !(p >= 1.0) {
                return Err(bad(&key, "requires p >= 1"));
            }
            let reflexive = p > 1.0;
            let schur = p == 1.0;
            let delta = power_exact(Convexity, p);
            Ok(SpaceDescriptor {
                name: key.clone(),
                display: format!("sum_finite_dim_p(p={p})"),
                params: SpaceParams { p: Some(p), ..Default::default() },
                flags: SpaceFlags {
                    reflexive,
                    schur,
                    dunford_pettis: schur,
                    ..SpaceFlags::none()
                },
                delta_star: reflexive.then(|| power_exact(WeakStarConvexity, p)),
                delta,
                rho: power_exact(Smoothness, p),
                rho_is_renorm_only: false,
                notes: vec![
                    "l_p-sum of finite-dimensional blocks: moduli are the pure power type \
                     regardless of the blocks"
                        .into(),
                ],
            })
        }
        "lorentz" => {
            let p = require_p(&key, params)?;
            if !(p >= 1.0) {
                return Err(bad(&key, "requires p >= 1"));
            }
            let w = params
                .weights
                .clone()
                .ok_or_else(|| bad(&key, "missing weights `w`"))?;
            validate_lorentz_weights(&key, &w)?;
            let reflexive = p > 1.0;
            let delta = ModulusSpec::unknown(Convexity);
            Ok(SpaceDescriptor {
                name: key.clone(),
                display: format!("lorentz(p={p}, w={w:?})"),
                params: SpaceParams { p: Some(p), weights: Some(w), ..Default::default() },
                flags: SpaceFlags { reflexive, ..SpaceFlags::none() },
                delta_star: reflexive.then(|| ModulusSpec::unknown(WeakStarConvexity)),
                delta,
                rho: power_exact(Smoothness, p),
                rho_is_renorm_only: false,
                notes: vec![
                    "weights are the leading terms of a non-increasing sequence with w1 = 1; \
                     the norm satisfies an upper p-estimate with constant 1, which pins the \
                     smoothness modulus; no convexity estimate recorded"
                        .into(),
                ],
            })
        }
        "orlicz" => {
            let phi_spec = params
                .phi
                .clone()
                .ok_or_else(|| bad(&key, "missing Orlicz function `phi`"))?;
            let f = OrliczFunction::parse(&phi_spec)
                .map_err(|e| bad(&key, format!("invalid phi: {e}")))?;
            let p_idx = f.index_p();
            let q_idx = f.index_q();
            let mut notes = vec![format!(
                "computed indices: p = {p_idx:.6}, q = {}",
                if q_idx.is_finite() { format!("{q_idx:.6}") } else { "infinity".into() }
            )];
            let delta = match f.convexity_bound() {
                Ok(d) => d,
                Err(_) => {
                    notes.push("upper index is infinite: no convexity estimate available".into());
                    ModulusSpec::unknown(Convexity)
                }
            };
            let rho = f.smoothness_bound();
            let reflexive = f.reflexive_sequence_space();
            Ok(SpaceDescriptor {
                name: key.clone(),
                display: format!("orlicz(phi={phi_spec})"),
                params: SpaceParams { phi: Some(phi_spec), ..Default::default() },
                flags: SpaceFlags { reflexive, ..SpaceFlags::none() },
                delta_star: reflexive.then(|| {
                    let mut d = delta.clone();
                    d.role = WeakStarConvexity;
                    d
                }),
                delta,
                rho,
                rho_is_renorm_only: false,
                notes,
            })
        }
        "james" => {
            let p = require_p(&key, params)?;
            if !(p > 1.0) {
                return Err(bad(&key, "requires p > 1"));
            }
            let delta = if p == 2.0 {
                power_exact(Convexity, 2.0)
            } else {
                ModulusSpec::bounds(
                    Convexity,
                    BoundSide::all_t(ScalarCurve::PowerType { p }),
                    BoundSide::all_t(ScalarCurve::Identity),
                )
            };
            Ok(SpaceDescriptor {
                name: key.clone(),
                display: format!("james(p={p})"),
                params: SpaceParams { p: Some(p), ..Default::default() },
                flags: SpaceFlags {
                    is_dual_of: Some(format!("james_predual:p={p}")),
                    ..SpaceFlags::none()
                },
                delta,
                delta_star: Some(power_exact(WeakStarConvexity, p)),
                rho: ModulusSpec::bounds(
                    Smoothness,
                    BoundSide::all_t(ScalarCurve::C0Kink),
                    BoundSide::all_t(ScalarCurve::PowerType { p }),
                )
                .with_power_type(p, Coeff::Known(1.0 / p)),
                rho_is_renorm_only: true,
                notes: vec![
                    "quasi-reflexive of order one; dual of a space outside this catalog".into(),
                    "the smoothness upper bound holds for an equivalent norm only".into(),
                ],
            })
        }
        "lp_interval" => {
            let p = require_p(&key, params)?;
            if !(p > 1.0) {
                return Err(bad(&key, "requires p > 1"));
            }
            let conj = p / (p - 1.0);
            let flags = SpaceFlags {
                reflexive: true,
                is_dual_of: Some(format!("lp_interval:p={conj}")),
                ..SpaceFlags::none()
            };
            let (delta, rho, notes): (ModulusSpec, ModulusSpec, Vec<String>) = if p == 2.0 {
                (
                    power_exact(Convexity, 2.0),
                    power_exact(Smoothness, 2.0),
                    vec!["Hilbert space: both moduli are the exact power type 2".into()],
                )
            } else if p < 2.0 {
                (
                    ModulusSpec::bounds(
                        Convexity,
                        BoundSide::small_t(scaled(Coeff::UnknownPositive, 2.0), 1.0),
                        BoundSide::small_t(scaled(Coeff::Known(p - 1.0), 2.0), 1.0),
                    ),
                    ModulusSpec::bounds(
                        Smoothness,
                        BoundSide::small_t(scaled(Coeff::Known(1.0 / p), p), 1.0),
                        BoundSide::small_t(scaled(Coeff::Known(2.0 / p), p), 1.0),
                    )
                    .with_power_type(p, Coeff::Known(2.0 / p)),
                    vec![format!(
                        "for 1 < p < 2 the convexity modulus behaves like t^2 and the \
                         smoothness modulus like t^{p} for small t; bounds certified on (0, 1]"
                    )],
                )
            } else {
                (
                    ModulusSpec::bounds(
                        Convexity,
                        BoundSide::small_t(scaled(Coeff::UnknownPositive, p), 1.0),
                        BoundSide::small_t(scaled(Coeff::Known(1.0 / p), p), 1.0),
                    )
                    .with_power_type(p, Coeff::UnknownPositive),
                    ModulusSpec::bounds(
                        Smoothness,
                        BoundSide::small_t(
                            scaled(Coeff::Known(p - 1.0), 2.0),
                            (1.0f64).min(1.0 / (p - 1.0)),
                        ),
                        BoundSide::small_t(scaled(Coeff::UnknownPositive, 2.0), 1.0),
                    ),
                    vec![format!(
                        "for p > 2 the convexity modulus behaves like t^{p} and the \
                         smoothness modulus like t^2 for small t; bounds certified on (0, 1]"
                    )],
                )
            };
            Ok(SpaceDescriptor {
                name: key.clone(),
                display: format!("lp_interval(p={p})"),
                params: SpaceParams { p: Some(p), ..Default::default() },
                flags,
                delta_star: Some({
                    let mut d = delta.clone();
                    d.role = WeakStarConvexity;
                    d
                }),
                delta,
                rho,
                rho_is_renorm_only: false,
                notes,
            })
        }
        "r_oplus_inf_l2" => Ok(SpaceDescriptor {
            name: key.clone(),
            display: "R (+)_inf l2".into(),
            params: SpaceParams::default(),
            flags: SpaceFlags { reflexive: true, ..SpaceFlags::none() },
            delta: kink_exact(Convexity),
            delta_star: Some(kink_exact(WeakStarConvexity)),
            rho: ModulusSpec::unknown(Smoothness),
            rho_is_renorm_only: false,
            notes: vec![
                "reflexive, yet its convexity modulus vanishes on [0, 1] like that of c0".into(),
            ],
        }),
        "p_convexification" => {
            let p = require_p(&key, params)?;
            if !(p >= 1.0) {
                return Err(bad(&key, "requires p >= 1"));
            }
            let base_spec = params
                .base
                .clone()
                .ok_or_else(|| bad(&key, "missing `base` space"))?;
            let base = parse_space(&base_spec)?;
            const UNCONDITIONAL: &[&str] = &["lp", "c0", "ell1_as_c0_dual", "lorentz", "orlicz"];
            if !UNCONDITIONAL.contains(&base.name.as_str()) {
                return Err(bad(
                    &key,
                    format!(
                        "base `{}` is not one of the 1-unconditional-basis families {:?}",
                        base.name, UNCONDITIONAL
                    ),
                ));
            }
            Ok(SpaceDescriptor {
                name: key.clone(),
                display: format!("p_convexification(base={}, p={p})", base.display),
                params: SpaceParams {
                    p: Some(p),
                    base: Some(base_spec),
                    ..Default::default()
                },
                flags: SpaceFlags::none(),
                delta: ModulusSpec::unknown(ModulusRole::Convexity),
                delta_star: None,
                rho: ModulusSpec::bounds(
                    ModulusRole::Smoothness,
                    BoundSide::all_t(ScalarCurve::C0Kink),
                    BoundSide::all_t(ScalarCurve::PowerType { p }),
                )
                .with_power_type(p, Coeff::Known(1.0 / p)),
                rho_is_renorm_only: false,
                notes: vec![
                    "p-convexification of a 1-unconditional basis: upper p-estimate with \
                     constant 1, hence the power-type smoothness bound"
                        .into(),
                    "reflexivity and convexity estimates depend on the base and are left \
                     unrecorded"
                        .into(),
                ],
            })
        }
        "scalar" => Ok(SpaceDescriptor {
            name: key.clone(),
            display: "scalar (R)".into(),
            params: SpaceParams::default(),
            flags: SpaceFlags {
                reflexive: true,
                schur: true,
                dunford_pettis: true,
                weakstar_dunford_pettis: true,
                is_dual_of: Some("scalar".into()),
                subspace_of_c0: true,
            },
            delta: ModulusSpec::exact(ModulusRole::Convexity, ScalarCurve::Identity)
                .expect("identity is fully known"),
            delta_star: Some(
                ModulusSpec::exact(ModulusRole::WeakStarConvexity, ScalarCurve::Identity)
                    .expect("identity is fully known"),
            ),
            rho: kink_exact(ModulusRole::Smoothness),
            rho_is_renorm_only: false,
            notes: vec![
                "finite-dimensional convention: convexity moduli take the maximal value t, \
                 the smoothness modulus the minimal value max(0, t-1)"
                    .into(),
            ],
        }),
        other => Err(ModuliError::UnknownSpace(
            other.to_string(),
            catalog_names().join(", "),
        )),
    }
}

fn require_p(space: &str, params: &SpaceParams) -> Result<f64, ModuliError> {
    let p = params.p.ok_or_else(|| bad(space, "missing exponent `p`"))?;
    if !p.is_finite() {
        return Err(bad(space, "exponent `p` must be finite"));
    }
    Ok(p)
}

pub(crate) fn validate_lorentz_weights(space: &str, w: &[f64]) -> Result<(), ModuliError> {
    if w.is_empty() {
        return Err(bad(space, "weights must be non-empty"));
    }
    if (w[0] - 1.0).abs() > 1e-12 {
        return Err(bad(space, format!("first weight must be 1, got {}", w[0])));
    }
    for pair in w.windows(2) {
        if pair[1] > pair[0] + 1e-12 {
            return Err(bad(space, "weights must be non-increasing"));
        }
    }
    if w.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(bad(space, "weights must be positive and finite"));
    }
    Ok(())
}

/// A representative instantiation of every family, for cross-product tests.
/// Exponents stay small so grid checks keep comfortable margins.
pub fn sample_instances() -> Vec<SpaceDescriptor> {
    [
        "lp:p=1.5",
        "lp:p=2",
        "lp:p=3",
        "c0",
        "ell1_as_c0_dual",
        "ell1_as_comega_dual",
        "ell_infty",
        "sum_finite_dim_p:p=1",
        "sum_finite_dim_p:p=2",
        "lorentz:p=2,w=1 0.5 0.25 0.125",
        "orlicz:phi=pow 2",
        "orlicz:phi=exp",
        "james:p=2",
        "james:p=3",
        "lp_interval:p=1.5",
        "lp_interval:p=2",
        "lp_interval:p=3",
        "r_oplus_inf_l2",
        "p_convexification:base=lp(p=2),p=2",
        "scalar",
    ]
    .iter()
    .map(|s| parse_space(s).expect("sample instance must parse"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::ModulusKind;
    use approx::assert_relative_eq;

    #[test]
    fn lp_descriptor() {
        let d = parse_space("lp:p=2").unwrap();
        assert!(d.flags.reflexive && d.is_dual_space());
        assert_eq!(d.flags.is_dual_of.as_deref(), Some("lp:p=2"));
        for m in [&d.delta, d.delta_star.as_ref().unwrap(), &d.rho] {
            assert_relative_eq!(m.lower_value(1.0), 2f64.sqrt() - 1.0, max_relative = 1e-14);
            assert_relative_eq!(m.upper_value(1.0), 2f64.sqrt() - 1.0, max_relative = 1e-14);
        }
        let d = parse_space("lp:p=3").unwrap();
        assert_eq!(d.resolve_predual().unwrap().params.p, Some(1.5));
        assert!(parse_space("lp:p=1").is_err());
        assert!(parse_space("lp:p=0.5").is_err());
        assert!(parse_space("lp").is_err());
    }

    #[test]
    fn c0_and_ell1_descriptors() {
        let c0 = parse_space("c0").unwrap();
        assert!(!c0.is_dual_space());
        assert!(c0.flags.subspace_of_c0 && c0.flags.dunford_pettis);
        assert_eq!(c0.delta.lower_value(1.0), 0.0);
        assert_eq!(c0.delta.lower_value(2.0), 1.0);
        assert!(c0.delta_star.is_none());

        let l1 = parse_space("ell1_as_c0_dual").unwrap();
        assert!(l1.flags.schur && l1.is_dual_space());
        let predual = l1.resolve_predual().unwrap();
        assert_eq!(predual.name, "c0");
        // Weak* convexity modulus is maximal.
        let ds = l1.delta_star.as_ref().unwrap();
        assert_eq!(ds.lower_value(0.7), 0.7);
        // Norm-level moduli equal t as well (power type 1).
        assert_eq!(l1.delta.lower_value(0.7), 0.7);
        assert_eq!(l1.rho.upper_value(0.7), 0.7);

        let guise = parse_space("ell1_as_comega_dual").unwrap();
        assert!(guise.is_dual_space());
        assert!(guise.resolve_predual().is_none(), "predual must be unresolvable");
        assert!(guise.delta_star.is_none());
    }

    #[test]
    fn james_descriptor() {
        let j2 = parse_space("james:p=2").unwrap();
        assert!(!j2.flags.reflexive && j2.is_dual_space());
        assert!(j2.resolve_predual().is_none());
        assert!(j2.rho_is_renorm_only);
        assert!(matches!(j2.delta.kind, ModulusKind::Exact { .. }));
        let j3 = parse_space("james:p=3").unwrap();
        assert!(matches!(j3.delta.kind, ModulusKind::Bounds { .. }));
        assert_relative_eq!(
            j3.delta_star.unwrap().lower_value(1.0),
            2f64.powf(1.0 / 3.0) - 1.0,
            max_relative = 1e-14
        );
        // delta* <= delta pointwise (more null sequences in the weak* sense).
        for &t in &[0.1, 0.5, 1.0, 2.0] {
            assert!(
                parse_space("james:p=3").unwrap().delta_star.unwrap().upper_value(t)
                    <= j3.delta.upper_value(t) + 1e-12
            );
        }
        assert!(parse_space("james:p=1").is_err());
    }

    #[test]
    fn lp_interval_descriptor() {
        let l2 = parse_space("lp_interval:p=2").unwrap();
        assert!(matches!(l2.delta.kind, ModulusKind::Exact { .. }));

        let l15 = parse_space("lp_interval:p=1.5").unwrap();
        // Certified small-t sides...
        assert_relative_eq!(l15.delta.upper_value(0.5), 0.5 * 0.25, max_relative = 1e-12);
        assert_relative_eq!(
            l15.rho.lower_value(0.5),
            (1.0 / 1.5) * 0.5f64.powf(1.5),
            max_relative = 1e-12
        );
        // ...and envelope fallbacks outside them.
        assert_eq!(l15.delta.upper_value(3.0), 3.0);
        assert_eq!(l15.rho.lower_value(3.0), 2.0);
        // The unknown-constant lower side degrades to the floor.
        assert_eq!(l15.delta.lower_value(0.5), 0.0);

        let l3 = parse_space("lp_interval:p=3").unwrap();
        assert_relative_eq!(l3.rho.lower_value(0.25), 2.0 * 0.0625, max_relative = 1e-12);
        assert_relative_eq!(l3.delta.upper_value(0.5), 0.125 / 3.0, max_relative = 1e-12);
        // rho lower side capped where it would cross the ceiling.
        assert!(l3.rho.lower_value(0.9) <= 0.9);
        assert_eq!(l3.resolve_predual().unwrap().params.p, Some(1.5));
    }

    #[test]
    fn lorentz_orlicz_pconvex_descriptors() {
        let d = parse_space("lorentz:p=2,w=1 0.5 0.25").unwrap();
        assert!(d.flags.reflexive);
        assert_relative_eq!(d.rho.upper_value(1.0), 2f64.sqrt() - 1.0, max_relative = 1e-14);
        assert!(parse_space("lorentz:p=2,w=1 2").is_err());
        assert!(parse_space("lorentz:p=2,w=0.5 0.25").is_err());
        assert!(parse_space("lorentz:p=2").is_err());

        let o = parse_space("orlicz:phi=pow 2").unwrap();
        assert!(o.flags.reflexive);
        // phi(t) = t^2 has both indices 2: power-type bounds on both sides.
        assert_relative_eq!(o.rho.upper_value(1.0), 2f64.sqrt() - 1.0, max_relative = 1e-3);
        assert_relative_eq!(o.delta.lower_value(1.0), 2f64.sqrt() - 1.0, max_relative = 1e-3);

        let z = parse_space("p_convexification:base=lp(p=2),p=2").unwrap();
        assert!(!z.is_dual_space());
        assert_relative_eq!(z.rho.upper_value(1.0), 2f64.sqrt() - 1.0, max_relative = 1e-14);
        assert_eq!(z.delta.lower_value(0.5), 0.0);
        assert!(parse_space("p_convexification:base=james(p=2),p=2").is_err());
        assert!(parse_space("p_convexification:p=2").is_err());
    }

    #[test]
    fn scalar_ell_infty_and_sum_descriptors() {
        let s = parse_space("scalar").unwrap();
        assert!(s.flags.reflexive && s.flags.schur && s.flags.subspace_of_c0);
        assert_eq!(s.resolve_predual().unwrap().name, "scalar");
        assert_eq!(s.delta.lower_value(0.3), 0.3);
        assert_eq!(s.rho.upper_value(0.3), 0.0);

        let li = parse_space("ell_infty").unwrap();
        assert!(li.is_dual_space() && !li.flags.reflexive);
        assert!(li.resolve_predual().unwrap().flags.schur);
        // Fully unknown moduli: envelopes only.
        assert_eq!(li.delta.lower_value(5.0), 0.0);
        assert_eq!(li.rho.upper_value(5.0), 5.0);

        let s1 = parse_space("sum_finite_dim_p:p=1").unwrap();
        assert!(s1.flags.schur && !s1.flags.reflexive && !s1.is_dual_space());
        let s2 = parse_space("sum_finite_dim_p:p=2").unwrap();
        assert!(s2.flags.reflexive && s2.delta_star.is_some());
    }

    #[test]
    fn unknown_space_lists_names() {
        let err = parse_space("banana").unwrap_err().to_string();
        assert!(err.contains("banana") && err.contains("lorentz"), "{err}");
        assert!(parse_space("lp:q=2").is_err());
        assert!(parse_space("lp:p").is_err());
    }

    #[test]
    fn descriptor_invariants_across_samples() {
        for d in sample_instances() {
            // Reflexive spaces carry a weak* convexity modulus.
            if d.flags.reflexive {
                assert!(d.delta_star.is_some(), "{}", d.display);
            }
            // delta* only on dual spaces.
            if d.delta_star.is_some() {
                assert!(d.is_dual_space(), "{}", d.display);
            }
            // Envelope sanity on a few points, all moduli.
            let mut moduli = vec![(&d.delta, "delta"), (&d.rho, "rho")];
            if let Some(ds) = &d.delta_star {
                moduli.push((ds, "delta_star"));
            }
            for (m, label) in moduli {
                for &t in &[1e-3, 0.3, 1.0, 2.0, 50.0] {
                    let lo = m.lower_value(t);
                    let up = m.upper_value(t);
                    assert!(
                        m.role.floor(t) - 1e-12 <= lo && lo <= up + 1e-12 && up <= t + 1e-12,
                        "{} {label} at t={t}: lo={lo} up={up}",
                        d.display
                    );
                }
            }
        }
    }

    #[test]
    fn nested_base_spec_round_trip() {
        let d = parse_space("p_convexification:base=lorentz(p=2;w=1 0.5),p=3").unwrap();
        assert_eq!(d.params.p, Some(3.0));
        let base = parse_space(d.params.base.as_deref().unwrap()).unwrap();
        assert_eq!(base.name, "lorentz");
        assert_eq!(base.params.weights.as_deref(), Some(&[1.0, 0.5][..]));
    }
}
