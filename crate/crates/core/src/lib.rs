//! Utility-configuration solver library.
//!
//! A principal configures each of `n` independent actions (posting a price,
//! including an action in a delegation set, stocking an item); an agent
//! realizes private utilities and takes their favorite action; the principal
//! collects that action's principal utility. This crate provides:
//!
//! * exact expected-utility evaluation and a seeded Monte Carlo cross-check
//!   ([`eval`]), plus an exhaustive oracle ([`brute`]);
//! * mass splitting and tie-breaking perturbation so the maximum-utility
//!   distribution can be cut into even quantile bins ([`preprocess`]);
//! * the quantile-bin approximation scheme: bin-profile enumeration,
//!   per-action bucket statistics, a bounded multidimensional-knapsack
//!   dynamic program, and the outer search loop ([`scheme`]);
//! * utility-alignment measurement and the scheme's guaranteed
//!   approximation factor as a function of alignment ([`alignment`]);
//! * reductions from delegated choice, unit-demand pricing, and assortment
//!   optimization ([`reductions`]), with seeded generators and worst-case
//!   gadgets ([`generators`]);
//! * canonical JSON interchange for instances and source problems
//!   ([`json`]).
//!
//! Probabilities are exact arbitrary-precision rationals end to end;
//! utilities are `f64`.

pub mod alignment;
pub mod brute;
pub mod error;
pub mod eval;
pub mod generators;
pub mod instance;
pub mod json;
pub mod preprocess;
pub mod rational;
pub mod reductions;
pub mod scheme;

pub use error::{Error, Result};
pub use instance::{
    validate, ActionMenu, ConfigDist, Configuration, Instance, PointMass, Violation, NEG_INF,
};
pub use rational::Rational;

pub use brute::{brute_force_opt, brute_force_opt_capped, BruteForceResult, DEFAULT_BRUTE_CAP};
pub use eval::{evaluate_exact, evaluate_monte_carlo, win_distribution, TieBreak, WinAtom};
pub use preprocess::{
    choose_delta, preprocess, Delta, PieceProvenance, PreprocessParams, Preprocessed,
};
pub use scheme::{
    approx_objective, bins_from_configuration, bucket_stats, constraint_bounds, dp_solve,
    enumerate_bin_profiles, profile_count, run_ptas, weights, BinProfile, BucketStats, DpSolution,
    PtasDiagnostics, PtasResult, SchemeParams,
};

pub use alignment::{
    alignment_coefficients, alignment_profile, approx_ratio, check_alignment,
    empirical_coefficients, local_alignment_check, AlignmentCoefficients, AlignmentPoint,
    AlignmentProfile, AlignmentVerdict,
};
pub use generators::{
    partition_gadget, random_instance, tightness_instance, tightness_optimal_value,
    tightness_worst_ratio, Family, Generated, PartitionGadget, RandomSpec,
};
pub use reductions::{
    assortment_to_uc, delegation_to_uc, outside_option_transform, price_grid, pricing_to_uc,
    AssortmentInstance, AssortmentItem, Bias, DelegationAction, DelegationInstance, DiscreteDist,
    PriceSet, PricingInstance, PricingItem,
};
