//! Asymptotic convexity/smoothness moduli as evaluable curves, and the
//! `N_2^phi` absolute norm on the plane.
//!
//! A modulus here is a one-variable curve `t -> value` together with a role:
//!
//! * convexity (`delta`-side): how much the norm of `x + t y` must grow over
//!   far-out directions `y`;
//! * weak* convexity (`delta*`-side): the same against weak*-closed
//!   finite-codimensional subspaces (only meaningful for dual spaces);
//! * smoothness (`rho`-side): how little it can grow.
//!
//! Every admissible curve is trapped in universal envelopes: a convexity-role
//! value lies in `[0, t]` and a smoothness-role value in `[max(0, t-1), t]`.
//! Moduli that are only partially known are stored as `Bounds` with certified
//! sides; evaluation falls back to the universal envelopes outside a side's
//! certified range, so consumers always read a *sound* (possibly weak) bound.

mod catalog;

pub use catalog::{
    catalog_names, lookup_space, parse_space, sample_instances, SpaceDescriptor, SpaceFlags,
    SpaceParams,
};
pub(crate) use catalog::{paren_to_colon, split_top_level, validate_lorentz_weights};

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::grid::geometric;

#[derive(Debug, Error)]
pub enum ModuliError {
    #[error("power-type exponent must satisfy p >= 1, got {0}")]
    ExponentRange(f64),
    #[error("modulus argument must be nonnegative, got {0}")]
    NegativeArgument(f64),
    #[error("invalid phi `{label}`: {reason}")]
    InvalidPhi { label: String, reason: String },
    #[error("curve with an unknown constant cannot be used as `{0}`")]
    UnknownConstant(&'static str),
    #[error("unknown space `{0}` (known: {1})")]
    UnknownSpace(String, String),
    #[error("bad parameters for space `{space}`: {reason}")]
    BadParams { space: String, reason: String },
}

/// `(1 + t^p)^{1/p} - 1`, the exact power-type modulus shared by the
/// `l_p`-like spaces. Stable for tiny and huge `t` (no overflow for large
/// exponents: the `t > 1` branch factors `t` out first).
pub fn power_type_modulus(p: f64, t: f64) -> Result<f64, ModuliError> {
    if !(p >= 1.0) {
        return Err(ModuliError::ExponentRange(p));
    }
    if !(t >= 0.0) {
        return Err(ModuliError::NegativeArgument(t));
    }
    Ok(power_type_value(p, t))
}

pub(crate) fn power_type_value(p: f64, t: f64) -> f64 {
    debug_assert!(p >= 1.0 && t >= 0.0);
    if t == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return t;
    }
    if t <= 1.0 {
        (t.powf(p).ln_1p() / p).exp_m1()
    } else {
        // (1 + t^p)^{1/p} = t * (1 + t^{-p})^{1/p}
        let bump = (t.powf(-p).ln_1p() / p).exp_m1();
        t * bump + (t - 1.0)
    }
}

/// `max(0, t - 1)`: the modulus of the sup-norm kind of asymptotic geometry
/// (no growth at all until the perturbation exceeds the element itself).
pub fn c0_modulus(t: f64) -> Result<f64, ModuliError> {
    if !(t >= 0.0) {
        return Err(ModuliError::NegativeArgument(t));
    }
    Ok(c0_value(t))
}

pub(crate) fn c0_value(t: f64) -> f64 {
    (t - 1.0).max(0.0)
}

/// A positive constant that is either known numerically or known only to
/// exist (e.g. the unnamed constants in the `L_p[0,1]` estimates).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Coeff {
    Known(f64),
    UnknownPositive,
}

/// Closed-form scalar curves out of which every catalog modulus is built.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ScalarCurve {
    /// `(1 + t^p)^{1/p} - 1`
    PowerType { p: f64 },
    /// `max(0, t - 1)`
    C0Kink,
    /// `t`
    Identity,
    /// `0`
    Zero,
    /// `c * t^q`, with `c` possibly an unknown positive constant.
    ScaledPower { coeff: Coeff, exponent: f64 },
}

impl ScalarCurve {
    /// Value at `t >= 0`; `None` when the curve involves an unknown constant.
    pub fn eval(&self, t: f64) -> Option<f64> {
        debug_assert!(t >= 0.0);
        match self {
            ScalarCurve::PowerType { p } => Some(power_type_value(*p, t)),
            ScalarCurve::C0Kink => Some(c0_value(t)),
            ScalarCurve::Identity => Some(t),
            ScalarCurve::Zero => Some(0.0),
            ScalarCurve::ScaledPower { coeff, exponent } => match coeff {
                Coeff::Known(c) => Some(c * t.powf(*exponent)),
                Coeff::UnknownPositive => None,
            },
        }
    }

    /// Whether the curve is the function `t -> t` (the largest admissible
    /// modulus; written either directly or as the `p = 1` power type).
    pub fn is_effectively_identity(&self) -> bool {
        matches!(self, ScalarCurve::Identity) || matches!(self, ScalarCurve::PowerType { p } if *p == 1.0)
    }

    /// The exponent when the curve is an exact power type (`p = 1` included).
    pub fn power_type_exponent(&self) -> Option<f64> {
        match self {
            ScalarCurve::PowerType { p } => Some(*p),
            ScalarCurve::Identity => Some(1.0),
            _ => None,
        }
    }
}

impl fmt::Display for ScalarCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarCurve::PowerType { p } => write!(f, "(1+t^{p})^(1/{p})-1"),
            ScalarCurve::C0Kink => write!(f, "max(0,t-1)"),
            ScalarCurve::Identity => write!(f, "t"),
            ScalarCurve::Zero => write!(f, "0"),
            ScalarCurve::ScaledPower { coeff, exponent } => match coeff {
                Coeff::Known(c) => write!(f, "{c}*t^{exponent}"),
                Coeff::UnknownPositive => write!(f, "C*t^{exponent} (C unknown > 0)"),
            },
        }
    }
}

/// Which geometric quantity a [`ModulusSpec`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusRole {
    Convexity,
    WeakStarConvexity,
    Smoothness,
}

impl ModulusRole {
    /// Universal lower envelope for the role.
    pub fn floor(&self, t: f64) -> f64 {
        match self {
            ModulusRole::Convexity | ModulusRole::WeakStarConvexity => 0.0,
            ModulusRole::Smoothness => c0_value(t),
        }
    }

    /// Universal upper envelope (`t`, from the triangle inequality).
    pub fn ceiling(&self, t: f64) -> f64 {
        t
    }
}

/// One side of a two-sided modulus estimate. `valid_up_to = Some(c)` records
/// that the side is only certified for `t <= c` (small-`t` estimates);
/// evaluation beyond that falls back to the universal envelope.
#[derive(Clone, Debug, Serialize)]
pub struct BoundSide {
    pub curve: ScalarCurve,
    pub valid_up_to: Option<f64>,
}

impl BoundSide {
    pub fn all_t(curve: ScalarCurve) -> Self {
        BoundSide { curve, valid_up_to: None }
    }

    pub fn small_t(curve: ScalarCurve, cap: f64) -> Self {
        BoundSide { curve, valid_up_to: Some(cap) }
    }

    fn value_if_valid(&self, t: f64) -> Option<f64> {
        match self.valid_up_to {
            Some(cap) if t > cap => None,
            _ => self.curve.eval(t),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModulusKind {
    Exact { curve: ScalarCurve },
    Bounds { lower: BoundSide, upper: BoundSide },
}

/// Power-type metadata: records `p` and the constant `C` for which the
/// modulus dominates (convexity roles) or is dominated by (smoothness role)
/// `C t^p` on `[0, 1]`.
#[derive(Clone, Debug, Serialize)]
pub struct PowerType {
    pub exponent: f64,
    pub constant: Coeff,
}

/// An evaluable modulus with a role, exact or two-sided.
#[derive(Clone, Debug, Serialize)]
pub struct ModulusSpec {
    pub role: ModulusRole,
    pub kind: ModulusKind,
    pub power_type: Option<PowerType>,
}

impl ModulusSpec {
    /// Exact modulus. The curve must evaluate everywhere (no unknown
    /// constants in exact moduli).
    pub fn exact(role: ModulusRole, curve: ScalarCurve) -> Result<Self, ModuliError> {
        if curve.eval(1.0).is_none() {
            return Err(ModuliError::UnknownConstant("an exact modulus"));
        }
        Ok(ModulusSpec { role, kind: ModulusKind::Exact { curve }, power_type: None })
    }

    pub fn bounds(role: ModulusRole, lower: BoundSide, upper: BoundSide) -> Self {
        ModulusSpec { role, kind: ModulusKind::Bounds { lower, upper }, power_type: None }
    }

    /// The fully-unknown modulus: only the universal envelopes.
    pub fn unknown(role: ModulusRole) -> Self {
        let lower = match role {
            ModulusRole::Smoothness => BoundSide::all_t(ScalarCurve::C0Kink),
            _ => BoundSide::all_t(ScalarCurve::Zero),
        };
        ModulusSpec::bounds(role, lower, BoundSide::all_t(ScalarCurve::Identity))
    }

    pub fn with_power_type(mut self, exponent: f64, constant: Coeff) -> Self {
        self.power_type = Some(PowerType { exponent, constant });
        self
    }

    /// Certified lower bound at `t`. Falls back to the role's universal
    /// floor where the stored side is unknown or out of its certified range,
    /// so the result is always a true lower bound.
    pub fn lower_value(&self, t: f64) -> f64 {
        let floor = self.role.floor(t);
        match &self.kind {
            ModulusKind::Exact { curve } => curve.eval(t).unwrap_or(floor),
            ModulusKind::Bounds { lower, .. } => match lower.value_if_valid(t) {
                Some(v) => v.max(floor),
                None => floor,
            },
        }
    }

    /// Certified upper bound at `t`, clipped by the universal ceiling `t`.
    pub fn upper_value(&self, t: f64) -> f64 {
        let ceiling = self.role.ceiling(t);
        match &self.kind {
            ModulusKind::Exact { curve } => curve.eval(t).unwrap_or(ceiling),
            ModulusKind::Bounds { upper, .. } => match upper.value_if_valid(t) {
                Some(v) => v.min(ceiling),
                None => ceiling,
            },
        }
    }

    /// The exact curve when the modulus is known exactly.
    pub fn exact_curve(&self) -> Option<&ScalarCurve> {
        match &self.kind {
            ModulusKind::Exact { curve } => Some(curve),
            ModulusKind::Bounds { .. } => None,
        }
    }

    /// Curve certified as a lower bound for *all* `t` (exact curves qualify).
    pub fn lower_curve_all_t(&self) -> Option<&ScalarCurve> {
        match &self.kind {
            ModulusKind::Exact { curve } => Some(curve),
            ModulusKind::Bounds { lower, .. } if lower.valid_up_to.is_none() => Some(&lower.curve),
            _ => None,
        }
    }

    /// Curve certified as an upper bound for *all* `t` (exact curves qualify).
    pub fn upper_curve_all_t(&self) -> Option<&ScalarCurve> {
        match &self.kind {
            ModulusKind::Exact { curve } => Some(curve),
            ModulusKind::Bounds { upper, .. } if upper.valid_up_to.is_none() => Some(&upper.curve),
            _ => None,
        }
    }
}

const PHI_TOL: f64 = 1e-9;

/// A scalar function admissible in the `N_2^phi` construction: convex,
/// 1-Lipschitz and dominating `max(0, t-1)` on `[0, infinity)`. Smoothness
/// moduli of infinite-dimensional spaces are exactly such functions, which is
/// what makes the construction useful here.
///
/// Validation is by finite sampling on a geometric grid in `(1e-6, 1e3)`
/// with tolerance `1e-9`; it rejects wrong shapes, not adversarial ones.
#[derive(Clone)]
pub struct Phi {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    label: String,
}

impl fmt::Debug for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Phi").field("label", &self.label).finish()
    }
}

impl Phi {
    pub fn new<F>(label: impl Into<String>, f: F) -> Result<Self, ModuliError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let label = label.into();
        let invalid = |reason: String| ModuliError::InvalidPhi { label: label.clone(), reason };

        let at_zero = f(0.0);
        if !(at_zero >= -1e-12) || !at_zero.is_finite() {
            return Err(invalid(format!("phi(0) = {at_zero}, must be >= 0")));
        }

        let mut xs = vec![0.0];
        xs.extend(geometric(1e-6, 1e3, 256));
        let mut prev_slope = f64::NEG_INFINITY;
        for w in xs.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (f(a), f(b));
            if !fa.is_finite() || !fb.is_finite() {
                return Err(invalid(format!("non-finite value near t = {b}")));
            }
            let slope = (fb - fa) / (b - a);
            if slope.abs() > 1.0 + PHI_TOL {
                return Err(invalid(format!("not 1-Lipschitz: slope {slope} on [{a}, {b}]")));
            }
            if slope < prev_slope - PHI_TOL {
                return Err(invalid(format!("not convex: slope drops {prev_slope} -> {slope} at t = {a}")));
            }
            prev_slope = prev_slope.max(slope);
            if fb < c0_value(b) - PHI_TOL {
                return Err(invalid(format!("below max(0,t-1) at t = {b}: {fb}")));
            }
        }

        Ok(Phi { f: Arc::new(f), label })
    }

    /// Build from a fully-known catalog curve (smoothness moduli are valid phis).
    pub fn from_curve(curve: &ScalarCurve) -> Result<Self, ModuliError> {
        let c = curve.clone();
        c.eval(1.0).ok_or(ModuliError::UnknownConstant("a phi"))?;
        Phi::new(curve.to_string(), move |t| c.eval(t).unwrap())
    }

    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        (self.f)(t)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// The absolute norm `N_2^phi` on the plane:
/// `N(s, t) = |s| + |s| phi(|t| / |s|)` for `s != 0`, and `N(0, t) = |t|`.
///
/// For `phi(t) = (1+t^p)^{1/p} - 1` this is the `l_p` norm of `(s, t)`, for
/// `phi = max(0, t-1)` the max norm, and for `phi(t) = t` the `l_1` norm.
pub fn n2phi_norm(phi: &Phi, s: f64, t: f64) -> f64 {
    let (s, t) = (s.abs(), t.abs());
    if s == 0.0 {
        return t;
    }
    s + s * phi.eval(t / s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn power_type_small_values() {
        // p = 2, t = 1: sqrt(2) - 1
        assert_relative_eq!(
            power_type_modulus(2.0, 1.0).unwrap(),
            2f64.sqrt() - 1.0,
            max_relative = 1e-15
        );
        // p = 1 is exactly t.
        assert_eq!(power_type_modulus(1.0, 3.0).unwrap(), 3.0);
        assert_eq!(power_type_modulus(2.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn power_type_huge_argument_no_overflow() {
        // For huge t the value sits in [t - 1, t] (it rounds to exactly
        // t - 1 once t^{-p} is below float resolution).
        let v = power_type_modulus(3.0, 1e6).unwrap();
        assert!((1e6 - 1.0..=1e6).contains(&v), "v = {v}");
        // Extreme exponent still finite.
        let v = power_type_modulus(800.0, 1e300).unwrap();
        assert!(v.is_finite() && v >= 1e300 - 1.0);
    }

    #[test]
    fn power_type_monotone_in_exponent() {
        // (1+t^p)^{1/p} decreases in p pointwise.
        for &t in &[0.01, 0.3, 1.0, 2.5, 40.0] {
            let mut prev = f64::INFINITY;
            for &p in &[1.0, 1.5, 2.0, 3.0, 6.0] {
                let v = power_type_modulus(p, t).unwrap();
                assert!(v <= prev + 1e-12, "t={t} p={p}");
                prev = v;
            }
        }
    }

    #[test]
    fn power_type_rejects_bad_arguments() {
        assert!(power_type_modulus(0.5, 1.0).is_err());
        assert!(power_type_modulus(2.0, -0.1).is_err());
        assert!(c0_modulus(-1.0).is_err());
    }

    #[test]
    fn c0_modulus_kink() {
        assert_eq!(c0_modulus(0.5).unwrap(), 0.0);
        assert_eq!(c0_modulus(1.0).unwrap(), 0.0);
        assert_eq!(c0_modulus(2.5).unwrap(), 1.5);
    }

    #[test]
    fn universal_envelopes_hold_for_all_curves() {
        let curves = [
            ScalarCurve::PowerType { p: 1.0 },
            ScalarCurve::PowerType { p: 2.0 },
            ScalarCurve::PowerType { p: 4.0 },
            ScalarCurve::C0Kink,
            ScalarCurve::Identity,
        ];
        for c in &curves {
            for &t in &[1e-4, 0.1, 1.0, 3.0, 1e2] {
                let v = c.eval(t).unwrap();
                assert!(v >= 0.0 && v <= t + 1e-12, "{c} at {t}");
                // Smoothness floor: all these curves are admissible rho's.
                assert!(v >= c0_value(t) - 1e-12, "{c} at {t}");
            }
        }
    }

    #[test]
    fn bounds_fall_back_to_envelopes() {
        // A small-t-only upper side must not be believed at large t.
        let m = ModulusSpec::bounds(
            ModulusRole::Smoothness,
            BoundSide::all_t(ScalarCurve::C0Kink),
            BoundSide::small_t(
                ScalarCurve::ScaledPower { coeff: Coeff::Known(0.25), exponent: 1.4 },
                1.0,
            ),
        );
        assert_relative_eq!(m.upper_value(0.5), 0.25 * 0.5f64.powf(1.4), max_relative = 1e-14);
        // Past the cap: ceiling t.
        assert_eq!(m.upper_value(2.0), 2.0);
        // A side exceeding the universal ceiling is clipped to it.
        let loose = ModulusSpec::bounds(
            ModulusRole::Smoothness,
            BoundSide::all_t(ScalarCurve::C0Kink),
            BoundSide::small_t(
                ScalarCurve::ScaledPower { coeff: Coeff::Known(1.5), exponent: 1.4 },
                1.0,
            ),
        );
        assert_eq!(loose.upper_value(0.5), 0.5);
        // Unknown constants degrade to the floor.
        let m = ModulusSpec::bounds(
            ModulusRole::Convexity,
            BoundSide::all_t(ScalarCurve::ScaledPower {
                coeff: Coeff::UnknownPositive,
                exponent: 2.0,
            }),
            BoundSide::all_t(ScalarCurve::Identity),
        );
        assert_eq!(m.lower_value(0.7), 0.0);
    }

    #[test]
    fn exact_rejects_unknown_constant() {
        assert!(ModulusSpec::exact(
            ModulusRole::Convexity,
            ScalarCurve::ScaledPower { coeff: Coeff::UnknownPositive, exponent: 2.0 }
        )
        .is_err());
    }

    #[test]
    fn phi_accepts_moduli_and_rejects_wrong_shapes() {
        assert!(Phi::from_curve(&ScalarCurve::C0Kink).is_ok());
        assert!(Phi::from_curve(&ScalarCurve::Identity).is_ok());
        assert!(Phi::from_curve(&ScalarCurve::PowerType { p: 2.0 }).is_ok());
        // Not 1-Lipschitz:
        assert!(Phi::new("2t", |t| 2.0 * t).is_err());
        // Not convex:
        assert!(Phi::new("sqrt", |t: f64| t.sqrt()).is_err());
        // Below the floor:
        assert!(Phi::new("t/2", |t| 0.5 * t).is_err());
        // Negative at zero:
        assert!(Phi::new("t-1", |t| t - 1.0).is_err());
    }

    #[test]
    fn n2phi_recovers_the_three_classical_norms() {
        let kink = Phi::from_curve(&ScalarCurve::C0Kink).unwrap();
        let ident = Phi::from_curve(&ScalarCurve::Identity).unwrap();
        let p2 = Phi::from_curve(&ScalarCurve::PowerType { p: 2.0 }).unwrap();
        for &(s, t) in &[(0.0, 0.0), (1.0, 0.0), (0.0, -2.0), (3.0, 4.0), (-1.5, 0.7), (0.2, -9.0)] {
            let (a, b) = (s, t);
            assert_relative_eq!(n2phi_norm(&kink, a, b), a.abs().max(b.abs()), max_relative = 1e-14);
            assert_relative_eq!(n2phi_norm(&ident, a, b), a.abs() + b.abs(), max_relative = 1e-14);
            assert_relative_eq!(n2phi_norm(&p2, a, b), a.hypot(b), max_relative = 1e-13);
        }
    }

    #[test]
    fn n2phi_axes() {
        let p3 = Phi::from_curve(&ScalarCurve::PowerType { p: 3.0 }).unwrap();
        assert_eq!(n2phi_norm(&p3, -2.5, 0.0), 2.5);
        assert_eq!(n2phi_norm(&p3, 0.0, 4.0), 4.0);
    }
}
