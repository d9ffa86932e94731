//! Numerical toolkit for asymptotic geometry of classical sequence and
//! function spaces: asymptotic convexity/smoothness moduli, exact norm
//! evaluators (James, Lorentz, Luxemburg, convexifications, block norms),
//! Orlicz-function indices, Lipschitz-free-space norms over finite metric
//! spaces, and a conservative rule-based checker that decides maximizing
//! properties of operator pairs from certified modulus estimates.

// Validation deliberately writes `!(p > 1.0)` instead of `p <= 1.0`: the
// negated form also rejects NaN, which must never pass a parameter check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checker;
pub mod gallery;
pub mod grid;
pub mod lipfree;
pub mod moduli;
pub mod norms;
pub mod orlicz;

pub use checker::{check_pair, ClaimStatus, MaximizingProperty, PairVerdict};
pub use gallery::{
    james_remark_analysis, op_a_failing_pair, op_b_weakstar_failure, op_d_l2_linf,
    run_verification, CounterexampleOp, JamesRemarkReport, VerificationReport,
};
pub use lipfree::{
    build_schur_example, free_norm, lipschitz_constant, verify_schur_example, FiniteMetricSpace,
    Molecule,
};
pub use moduli::{
    c0_modulus, lookup_space, n2phi_norm, parse_space, power_type_modulus, ModulusSpec, Phi,
    SpaceDescriptor,
};
pub use norms::{
    james_norm, lorentz_norm, lp_norm, luxemburg_norm, pconvex_norm, prus_block_norm, sup_norm,
    Blocking, FiniteVector, SequenceNorm,
};
pub use orlicz::OrliczFunction;
