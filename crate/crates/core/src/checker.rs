//! Rule-based checker for maximizing properties of space pairs.
//!
//! A pair `(X, Y)` is tested for four properties, ordered by strength:
//!
//! 1. `WMP` — every norm-one operator with a non-weakly-null maximizing
//!    sequence attains its norm;
//! 2. `W*MP` — the same with non-weak*-null witnesses (X must be a dual);
//! 3. `w*-to-w*MP` — restricted to weak*-to-weak*-continuous operators
//!    (X and Y duals);
//! 4. `w*-to-weakMP` — restricted to weak*-to-weak-continuous operators.
//!
//! Non-weak*-null witnesses are non-weakly-null, and each operator class
//! contains the next, so each property implies the next: `Holds` propagates
//! forward along the chain and `Fails` propagates backward.
//!
//! The checker applies a fixed rule list, first match wins per property,
//! and everything else stays `Unknown` — it is deliberately conservative
//! and never extrapolates beyond its certificates. Grid-based certificates
//! are labelled as numerical evidence, not proofs.

use serde::Serialize;
use thiserror::Error;

use crate::grid::{checker_t_grid, GRID_MARGIN};
use crate::moduli::{ModulusRole, ModulusSpec, ScalarCurve, SpaceDescriptor};

/// Relative slack when comparing two certified curve values on the grid:
/// allows equality of exact closed forms up to rounding.
const EVAL_SLACK: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CheckerError {
    #[error("modulus has role {got:?}, expected {expected:?}")]
    WrongRole { expected: ModulusRole, got: ModulusRole },
}

/// The four maximizing properties, strongest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MaximizingProperty {
    #[serde(rename = "WMP")]
    Wmp,
    #[serde(rename = "W*MP")]
    WStarMp,
    #[serde(rename = "w*-to-w*MP")]
    WStarToWStarMp,
    #[serde(rename = "w*-to-weakMP")]
    WStarToWeakMp,
}

impl MaximizingProperty {
    /// Chain order: each property implies the next.
    pub const CHAIN: [MaximizingProperty; 4] = [
        MaximizingProperty::Wmp,
        MaximizingProperty::WStarMp,
        MaximizingProperty::WStarToWStarMp,
        MaximizingProperty::WStarToWeakMp,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            MaximizingProperty::Wmp => "WMP",
            MaximizingProperty::WStarMp => "W*MP",
            MaximizingProperty::WStarToWStarMp => "w*-to-w*MP",
            MaximizingProperty::WStarToWeakMp => "w*-to-weakMP",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Holds,
    Fails,
    Unknown,
}

/// Evidence attached to a claim. `Grid` certificates are explicitly marked
/// as numerical evidence on a finite grid, not proofs.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A closed-form argument about the stored curves.
    Symbolic { statement: String },
    /// A pointwise inequality verified on the checker grid.
    Grid { label: &'static str, points: usize, t_min: f64, t_max: f64, margin: f64, min_slack: f64 },
    /// A grid search that found a violating or inconclusive point.
    GridFailure { points: usize, t: f64, lower: f64, required: f64, reason: String },
    /// A scale at which the smoothness bound drops strictly below the
    /// convexity bound.
    Witness { t: f64, smoothness_upper: f64, convexity_lower: f64, gap: f64 },
    /// An explicit operator from the counterexample gallery.
    KnownCounterexample { operator: String, description: String },
    /// A conclusion drawn from isomorphic flags alone.
    Flags { statement: String },
    /// Propagated along the implication chain.
    Implication { from: MaximizingProperty, relation: String },
    /// The property does not make sense for the pair.
    NotApplicable { reason: String },
    /// No rule matched.
    NotEstablished,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyClaim {
    pub property: MaximizingProperty,
    pub status: ClaimStatus,
    /// The rule that produced the claim, when one did.
    pub rule: Option<&'static str>,
    pub certificate: Certificate,
}

/// The checker's output: one claim per property (chain order) plus notes
/// about rules that were skipped or pairs known to be undecided.
#[derive(Clone, Debug, Serialize)]
pub struct PairVerdict {
    pub x: SpaceDescriptor,
    pub y: SpaceDescriptor,
    pub claims: Vec<PropertyClaim>,
    pub notes: Vec<String>,
}

impl PairVerdict {
    pub fn claim(&self, property: MaximizingProperty) -> &PropertyClaim {
        self.claims
            .iter()
            .find(|c| c.property == property)
            .expect("verdict stores one claim per property")
    }

    pub fn status(&self, property: MaximizingProperty) -> ClaimStatus {
        self.claim(property).status
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationReport {
    pub holds: bool,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompactnessReport {
    /// A scale `t` with a strict smoothness/convexity gap, when one exists.
    pub witness: Option<f64>,
    pub certificate: Certificate,
}

fn expect_role(spec: &ModulusSpec, expected: ModulusRole) -> Result<(), CheckerError> {
    if spec.role != expected {
        return Err(CheckerError::WrongRole { expected, got: spec.role });
    }
    Ok(())
}

/// Domination test: the weak*-convexity lower bound of the domain must
/// dominate the smoothness upper bound of the range at every scale, and must
/// exceed `t - 1` strictly from the kink on. Closed-form curve pairs are
/// decided symbolically; everything else falls to the grid.
pub fn modulus_domination(
    delta_star: &ModulusSpec,
    rho: &ModulusSpec,
) -> Result<DominationReport, CheckerError> {
    expect_role(delta_star, ModulusRole::WeakStarConvexity)?;
    expect_role(rho, ModulusRole::Smoothness)?;

    if let Some(lo) = delta_star.lower_curve_all_t() {
        if lo.is_effectively_identity() {
            return Ok(DominationReport {
                holds: true,
                certificate: Certificate::Symbolic {
                    statement: "the weak*-convexity lower bound is the identity, which \
                                dominates every admissible smoothness modulus and exceeds \
                                t-1 strictly"
                        .into(),
                },
            });
        }
        if matches!(lo, ScalarCurve::C0Kink) {
            return Ok(DominationReport {
                holds: false,
                certificate: Certificate::Symbolic {
                    statement: "the weak*-convexity lower bound is max(0, t-1): the strict \
                                margin over t-1 fails from t = 1 on"
                        .into(),
                },
            });
        }
        if let Some(p) = lo.power_type_exponent() {
            match rho.upper_curve_all_t() {
                Some(ScalarCurve::C0Kink) => {
                    return Ok(DominationReport {
                        holds: true,
                        certificate: Certificate::Symbolic {
                            statement: format!(
                                "the power-type curve with exponent {p} dominates \
                                 max(0, t-1) with strict margin at every scale"
                            ),
                        },
                    });
                }
                Some(up) => {
                    if let Some(q) = up.power_type_exponent() {
                        if p <= q {
                            return Ok(DominationReport {
                                holds: true,
                                certificate: Certificate::Symbolic {
                                    statement: format!(
                                        "power-type curves decrease in the exponent: the \
                                         convexity exponent {p} does not exceed the \
                                         smoothness exponent {q}, and power-type curves \
                                         exceed t-1 strictly"
                                    ),
                                },
                            });
                        }
                    }
                }
                None => {}
            }
        }
    }
    Ok(modulus_domination_grid(delta_star, rho))
}

/// Grid-only variant of [`modulus_domination`] (no symbolic shortcuts).
/// Exposed for the symbolic/grid agreement tests.
#[doc(hidden)]
pub fn modulus_domination_grid_only(
    delta_star: &ModulusSpec,
    rho: &ModulusSpec,
) -> Result<DominationReport, CheckerError> {
    expect_role(delta_star, ModulusRole::WeakStarConvexity)?;
    expect_role(rho, ModulusRole::Smoothness)?;
    Ok(modulus_domination_grid(delta_star, rho))
}

fn modulus_domination_grid(delta_star: &ModulusSpec, rho: &ModulusSpec) -> DominationReport {
    let grid = checker_t_grid();
    let mut min_slack = f64::INFINITY;
    for &t in &grid {
        let lo = delta_star.lower_value(t);
        let up = rho.upper_value(t);
        let slack = lo - up;
        if slack < -EVAL_SLACK * (1.0 + up.abs()) {
            return DominationReport {
                holds: false,
                certificate: Certificate::GridFailure {
                    points: grid.len(),
                    t,
                    lower: lo,
                    required: up,
                    reason: "certified weak*-convexity lower bound drops below the \
                             smoothness upper bound"
                        .into(),
                },
            };
        }
        min_slack = min_slack.min(slack);
        if t >= 1.0 && lo <= (t - 1.0) + GRID_MARGIN {
            return DominationReport {
                holds: false,
                certificate: Certificate::GridFailure {
                    points: grid.len(),
                    t,
                    lower: lo,
                    required: (t - 1.0) + GRID_MARGIN,
                    reason: "no strict margin over t-1 past the kink".into(),
                },
            };
        }
    }
    DominationReport {
        holds: true,
        certificate: Certificate::Grid {
            label: "grid-certified (not a proof)",
            points: grid.len(),
            t_min: grid[0],
            t_max: grid[grid.len() - 1],
            margin: GRID_MARGIN,
            min_slack,
        },
    }
}

/// Gap test: is there a scale where the domain's smoothness upper bound is
/// strictly below the range's convexity lower bound? Such a gap forces the
/// operators between the spaces to be compact-like, which yields maximizing
/// properties. Renormed smoothness bounds are acceptable here (the
/// conclusion is isomorphic).
pub fn compactness_gap(
    rho: &ModulusSpec,
    delta: &ModulusSpec,
) -> Result<CompactnessReport, CheckerError> {
    expect_role(rho, ModulusRole::Smoothness)?;
    expect_role(delta, ModulusRole::Convexity)?;

    let up = rho.upper_curve_all_t();
    let lo = delta.lower_curve_all_t();
    if let (Some(up), Some(lo)) = (up, lo) {
        let up_kink = matches!(up, ScalarCurve::C0Kink);
        let up_exp = up.power_type_exponent();
        let lo_exp = lo.power_type_exponent();
        let fires = match (up_kink, up_exp, lo_exp) {
            // max(0, t-1) sits strictly below every power-type curve at t = 1.
            (true, _, Some(_)) => true,
            // Power-type curves decrease strictly in the exponent.
            (_, Some(p), Some(q)) => p > q,
            _ => false,
        };
        if fires {
            let t = 1.0;
            let smoothness_upper = rho.upper_value(t);
            let convexity_lower = delta.lower_value(t);
            let gap = convexity_lower - smoothness_upper;
            debug_assert!(gap > GRID_MARGIN);
            return Ok(CompactnessReport {
                witness: Some(t),
                certificate: Certificate::Witness { t, smoothness_upper, convexity_lower, gap },
            });
        }
        // Symbolic negatives: the smoothness bound dominates at every scale.
        if let (Some(p), Some(q)) = (up_exp, lo_exp) {
            if p <= q {
                return Ok(CompactnessReport {
                    witness: None,
                    certificate: Certificate::Symbolic {
                        statement: format!(
                            "the smoothness exponent {p} does not exceed the convexity \
                             exponent {q}: the smoothness bound dominates at every scale"
                        ),
                    },
                });
            }
        }
        if up.is_effectively_identity() {
            return Ok(CompactnessReport {
                witness: None,
                certificate: Certificate::Symbolic {
                    statement: "the smoothness upper bound is the universal ceiling t; \
                                no certified gap can exist"
                        .into(),
                },
            });
        }
        if up_kink && matches!(lo, ScalarCurve::C0Kink) {
            return Ok(CompactnessReport {
                witness: None,
                certificate: Certificate::Symbolic {
                    statement: "both bounds equal max(0, t-1); no gap".into(),
                },
            });
        }
    }
    Ok(compactness_gap_grid(rho, delta))
}

/// Grid-only variant of [`compactness_gap`] (no symbolic shortcuts).
#[doc(hidden)]
pub fn compactness_gap_grid_only(
    rho: &ModulusSpec,
    delta: &ModulusSpec,
) -> Result<CompactnessReport, CheckerError> {
    expect_role(rho, ModulusRole::Smoothness)?;
    expect_role(delta, ModulusRole::Convexity)?;
    Ok(compactness_gap_grid(rho, delta))
}

fn compactness_gap_grid(rho: &ModulusSpec, delta: &ModulusSpec) -> CompactnessReport {
    let grid = checker_t_grid();
    let mut best_t = grid[0];
    let mut best_gap = f64::NEG_INFINITY;
    for &t in &grid {
        let gap = delta.lower_value(t) - rho.upper_value(t);
        if gap > best_gap {
            best_gap = gap;
            best_t = t;
        }
    }
    if best_gap > GRID_MARGIN {
        CompactnessReport {
            witness: Some(best_t),
            certificate: Certificate::Witness {
                t: best_t,
                smoothness_upper: rho.upper_value(best_t),
                convexity_lower: delta.lower_value(best_t),
                gap: best_gap,
            },
        }
    } else {
        CompactnessReport {
            witness: None,
            certificate: Certificate::GridFailure {
                points: grid.len(),
                t: best_t,
                lower: delta.lower_value(best_t),
                required: rho.upper_value(best_t) + GRID_MARGIN,
                reason: "largest convexity-over-smoothness gap on the grid is within the \
                         margin"
                    .into(),
            },
        }
    }
}

/// A pair known to fail a property, witnessed by an explicit operator in the
/// gallery (matched by family name and, where it matters, the exponent).
struct KnownFailure {
    x_name: &'static str,
    x_p: Option<f64>,
    y_name: &'static str,
    property: MaximizingProperty,
    operator: &'static str,
    description: &'static str,
}

const KNOWN_FAILURES: [KnownFailure; 4] = [
    KnownFailure {
        x_name: "r_oplus_inf_l2",
        x_p: None,
        y_name: "c0",
        property: MaximizingProperty::Wmp,
        operator: "op_a",
        description: "norm-one diagonal-type operator from the sup-sum of a line with a \
                      separable Hilbert space onto c0: the coordinate directions form a \
                      non-weakly-null maximizing sequence, yet the operator does not attain \
                      its norm",
    },
    KnownFailure {
        x_name: "ell1_as_comega_dual",
        x_p: None,
        y_name: "ell1_as_c0_dual",
        property: MaximizingProperty::WStarToWStarMp,
        operator: "op_b",
        description: "diagonal operator with entries 1 - 1/n on ell1, viewed from the \
                      convergent-sequence predual into the usual c0 predual: it is \
                      weak*-to-weak* continuous and has a non-weak*-null maximizing \
                      sequence, but its norm 1 is not attained",
    },
    KnownFailure {
        x_name: "lp",
        x_p: Some(2.0),
        y_name: "ell_infty",
        property: MaximizingProperty::WStarToWStarMp,
        operator: "op_d",
        description: "operator from the Hilbert sequence space into the bounded-sequence \
                      space with rows e_1 and e_1 + (1 - 1/n) e_n: the coordinate basis is \
                      a non-weak*-null maximizing sequence and the norm sqrt(2) is not \
                      attained",
    },
    KnownFailure {
        x_name: "james",
        x_p: Some(2.0),
        y_name: "scalar",
        property: MaximizingProperty::WStarMp,
        operator: "james-functional",
        description: "a norm-one functional on the quadratic James space with a \
                      non-weak*-null maximizing sequence that does not attain its norm; \
                      the restriction to weak*-to-weak*-continuous operators is essential",
    },
];

fn known_failure(x: &SpaceDescriptor, y: &SpaceDescriptor) -> Option<&'static KnownFailure> {
    KNOWN_FAILURES.iter().find(|k| {
        k.x_name == x.name
            && k.y_name == y.name
            && k.x_p.is_none_or(|p| x.params.p == Some(p))
    })
}

/// Run every rule on the pair and close the result under the implication
/// chain. Rules are tried in a fixed order and the first claim made for a
/// property wins; later rules can only fill other properties.
pub fn check_pair(x: &SpaceDescriptor, y: &SpaceDescriptor) -> PairVerdict {
    use MaximizingProperty::*;
    let x_dual = x.is_dual_space();
    let y_dual = y.is_dual_space();
    let applicable = [
        true,            // WMP
        x_dual,          // W*MP
        x_dual && y_dual, // w*-to-w*MP
        x_dual,          // w*-to-weakMP
    ];
    let mut slots: [Option<PropertyClaim>; 4] = [None, None, None, None];
    let mut notes: Vec<String> = Vec::new();

    let idx = |p: MaximizingProperty| {
        MaximizingProperty::CHAIN.iter().position(|&q| q == p).unwrap()
    };
    let set = |slots: &mut [Option<PropertyClaim>; 4],
               p: MaximizingProperty,
               status: ClaimStatus,
               rule: &'static str,
               certificate: Certificate| {
        let i = idx(p);
        if applicable[i] && slots[i].is_none() {
            slots[i] = Some(PropertyClaim { property: p, status, rule: Some(rule), certificate });
        }
    };

    // Rule: known-counterexample.
    if let Some(k) = known_failure(x, y) {
        set(
            &mut slots,
            k.property,
            ClaimStatus::Fails,
            "known-counterexample",
            Certificate::KnownCounterexample {
                operator: k.operator.into(),
                description: k.description.into(),
            },
        );
    }

    // Rule: schur-range. Part 1: a reflexive domain and a Schur range force
    // attainment along weakly convergent subsequences.
    if x.flags.reflexive && y.flags.schur {
        set(
            &mut slots,
            Wmp,
            ClaimStatus::Holds,
            "schur-range",
            Certificate::Flags {
                statement: format!(
                    "{} is reflexive and {} has the Schur property: a non-weakly-null \
                     maximizing sequence has a weakly convergent subsequence whose image \
                     converges in norm, so the norm is attained",
                    x.display, y.display
                ),
            },
        );
    }
    // Part 2: the adjoint situation. A weak*-to-weak*-continuous operator is
    // an adjoint; if the domain's predual is Schur and the range's predual is
    // reflexive, the pre-adjoint attains, and attainment dualizes.
    if let (Some(px), Some(py)) = (x.resolve_predual(), y.resolve_predual()) {
        if px.flags.schur && py.flags.reflexive {
            set(
                &mut slots,
                WStarToWStarMp,
                ClaimStatus::Holds,
                "schur-range",
                Certificate::Flags {
                    statement: format!(
                        "weak*-to-weak*-continuous operators {} -> {} are adjoints of \
                         operators between the preduals ({} -> {}), a reflexive-to-Schur \
                         pair where every operator attains; attainment passes to the \
                         adjoint",
                        x.display, y.display, py.display, px.display
                    ),
                },
            );
        }
    }

    // Rule: c0-predual-domain. A domain that is the dual of a subspace of c0
    // has weak*-lower-semicontinuous norm with a strong attainment principle.
    if let Some(px) = x.resolve_predual() {
        if px.flags.subspace_of_c0 {
            set(
                &mut slots,
                WStarMp,
                ClaimStatus::Holds,
                "c0-predual-domain",
                Certificate::Flags {
                    statement: format!(
                        "{} is the dual of {}, a subspace of c0: every norm-one operator \
                         with a non-weak*-null maximizing sequence attains its norm",
                        x.display, px.display
                    ),
                },
            );
        }
    }

    // Rule: modulus-domination. Needs a weak* structure on the domain with a
    // certified weak*-convexity estimate, and an honest (not renorm-only)
    // smoothness estimate on the range.
    if x_dual {
        match &x.delta_star {
            Some(ds) => {
                if y.rho_is_renorm_only {
                    notes.push(format!(
                        "modulus-domination not applied: the smoothness bound for {} is \
                         certified only for an equivalent renorming",
                        y.display
                    ));
                } else if let Ok(rep) = modulus_domination(ds, &y.rho) {
                    if rep.holds {
                        set(
                            &mut slots,
                            WStarToWeakMp,
                            ClaimStatus::Holds,
                            "modulus-domination",
                            rep.certificate.clone(),
                        );
                        if y_dual {
                            set(
                                &mut slots,
                                WStarToWStarMp,
                                ClaimStatus::Holds,
                                "modulus-domination",
                                rep.certificate.clone(),
                            );
                        }
                        if x.flags.reflexive {
                            set(
                                &mut slots,
                                Wmp,
                                ClaimStatus::Holds,
                                "modulus-domination",
                                rep.certificate.clone(),
                            );
                        }
                        let identity_lower = ds
                            .lower_curve_all_t()
                            .is_some_and(|c| c.is_effectively_identity());
                        if identity_lower {
                            set(
                                &mut slots,
                                WStarMp,
                                ClaimStatus::Holds,
                                "modulus-domination",
                                rep.certificate.clone(),
                            );
                        }
                    }
                }
            }
            None => notes.push(format!(
                "modulus-domination not applied: no certified weak*-convexity estimate \
                 for {}",
                x.display
            )),
        }
    }

    // Rule: compactness. A strict smoothness/convexity gap at some scale
    // makes every operator between the spaces compact-like; renorm-only
    // smoothness bounds are fine here.
    if x_dual {
        if let Ok(rep) = compactness_gap(&x.rho, &y.delta) {
            if rep.witness.is_some() {
                set(
                    &mut slots,
                    WStarToWeakMp,
                    ClaimStatus::Holds,
                    "compactness",
                    rep.certificate.clone(),
                );
                if y_dual {
                    set(
                        &mut slots,
                        WStarToWStarMp,
                        ClaimStatus::Holds,
                        "compactness",
                        rep.certificate.clone(),
                    );
                }
                if x.flags.reflexive {
                    set(&mut slots, Wmp, ClaimStatus::Holds, "compactness", rep.certificate);
                }
            }
        }
    }

    // The James pair with non-decreasing exponent is genuinely open here.
    if x.name == "james" && y.name == "james" {
        if let (Some(px), Some(py)) = (x.params.p, y.params.p) {
            if px <= py {
                notes.push(format!(
                    "no rule decides the James pair with domain exponent {px} <= range \
                     exponent {py}: the range's smoothness bound is renorm-only and the \
                     compactness gap requires a strictly larger domain exponent"
                ));
            }
        }
    }

    // Close under the implication chain, restricted to applicable slots:
    // Holds flows toward weaker properties, Fails toward stronger ones.
    let order: Vec<usize> = (0..4).filter(|&i| applicable[i]).collect();
    loop {
        let mut changed = false;
        for w in order.windows(2) {
            let (a, b) = (w[0], w[1]);
            let sa = slots[a].as_ref().map(|c| c.status);
            let sb = slots[b].as_ref().map(|c| c.status);
            if sa == Some(ClaimStatus::Holds) && sb.is_none() {
                slots[b] = Some(PropertyClaim {
                    property: MaximizingProperty::CHAIN[b],
                    status: ClaimStatus::Holds,
                    rule: Some("implication"),
                    certificate: Certificate::Implication {
                        from: MaximizingProperty::CHAIN[a],
                        relation: "implied by the stronger property".into(),
                    },
                });
                changed = true;
            }
            if sb == Some(ClaimStatus::Fails) && sa.is_none() {
                slots[a] = Some(PropertyClaim {
                    property: MaximizingProperty::CHAIN[a],
                    status: ClaimStatus::Fails,
                    rule: Some("implication"),
                    certificate: Certificate::Implication {
                        from: MaximizingProperty::CHAIN[b],
                        relation: "fails because the weaker property fails".into(),
                    },
                });
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // Fill the rest.
    let claims = MaximizingProperty::CHAIN
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            slots[i].take().unwrap_or_else(|| PropertyClaim {
                property: p,
                status: ClaimStatus::Unknown,
                rule: None,
                certificate: if applicable[i] {
                    Certificate::NotEstablished
                } else {
                    let reason = if !x_dual {
                        format!("{} carries no weak* structure", x.display)
                    } else {
                        format!("{} carries no weak* structure", y.display)
                    };
                    Certificate::NotApplicable { reason }
                },
            })
        })
        .collect();

    PairVerdict { x: x.clone(), y: y.clone(), claims, notes }
}
