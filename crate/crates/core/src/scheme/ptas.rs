//! Outer loop of the scheme: preprocess, enumerate bin profiles, solve the
//! dynamic program per profile, re-score every winner exactly, keep the best.

use serde::Serialize;

use crate::eval::{evaluate_exact, TieBreak};
use crate::instance::{require_valid, Configuration, Instance};
use crate::preprocess::{preprocess, PreprocessParams};
use crate::{Error, Result};

use super::{dp_solve, enumerate_bin_profiles, profile_count, BinProfile, SchemeParams};

/// Run statistics emitted alongside the chosen configuration.
#[derive(Clone, Debug, Serialize)]
pub struct PtasDiagnostics {
    pub profiles_enumerated: u64,
    pub profiles_feasible: u64,
    /// Boundaries of the winning profile, when any profile was feasible.
    pub best_profile: Option<Vec<f64>>,
    /// Surrogate objective of the winning profile's solution.
    pub best_objective: Option<f64>,
    /// Exact expected principal utility of the returned configuration.
    pub best_value: f64,
    /// True when no enumerated profile was feasible and the direct
    /// single-action scan supplied the answer.
    pub fallback_used: bool,
    /// Echo of the configured cap; `None` means the full stream ran and the
    /// approximation guarantee applies.
    pub profile_cap: Option<u64>,
    /// Size of the full profile stream, if it fits in a u128.
    pub total_profiles: Option<u128>,
}

/// Result of [`run_ptas`].
#[derive(Clone, Debug)]
pub struct PtasResult {
    pub configuration: Configuration,
    pub value: f64,
    pub diagnostics: PtasDiagnostics,
}

struct ProfileOutcome {
    index: u64,
    value: f64,
    objective: f64,
    configuration: Configuration,
    profile: BinProfile,
}

/// Preprocesses the instance, sweeps bin profiles, and returns the best
/// exactly-scored configuration found.
///
/// Configuration indices in the result refer to the original instance
/// (preprocessing preserves configuration identity). When a profile cap is
/// set and no enumerated profile is feasible, the result falls back to the
/// best configuration found by a direct scan that varies one action at a
/// time against an all-excluded (or first-config) baseline; diagnostics flag
/// this.
pub fn run_ptas(instance: &Instance, params: &SchemeParams) -> Result<PtasResult> {
    require_valid(instance)?;
    if params.bins < 6 {
        return Err(Error::MTooSmall {
            min: 6,
            got: params.bins,
        });
    }

    let pre = preprocess(instance, &PreprocessParams::auto(params.bins))?;
    let working = &pre.instance;

    let probe = enumerate_bin_profiles(working, params.bins)?;
    let distinct = probe.distinct_utilities();
    let total_profiles = profile_count(distinct, params.bins);

    let workers = if params.parallel {
        let auto = std::thread::available_parallelism().map_or(1, |n| n.get());
        if params.threads == 0 {
            auto
        } else {
            params.threads
        }
    } else {
        1
    }
    .max(1);

    let mut enumerated = 0u64;
    let mut feasible = 0u64;
    let mut best: Option<ProfileOutcome> = None;

    if workers == 1 {
        let (en, fe, b) = sweep_profiles(working, params, 0, 1)?;
        enumerated = en;
        feasible = fe;
        best = b;
    } else {
        let results: Vec<Result<(u64, u64, Option<ProfileOutcome>)>> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| scope.spawn(move || sweep_profiles(working, params, w, workers)))
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
        for r in results {
            let (en, fe, b) = r?;
            enumerated += en;
            feasible += fe;
            best = merge_best(best, b);
        }
    }

    if let Some(found) = best {
        return Ok(PtasResult {
            value: found.value,
            diagnostics: PtasDiagnostics {
                profiles_enumerated: enumerated,
                profiles_feasible: feasible,
                best_profile: Some(found.profile.boundaries.clone()),
                best_objective: Some(found.objective),
                best_value: found.value,
                fallback_used: false,
                profile_cap: params.profile_cap,
                total_profiles,
            },
            configuration: found.configuration,
        });
    }

    // No feasible profile within the cap: direct scan.
    let (configuration, value) = fallback_scan(working)?;
    Ok(PtasResult {
        configuration,
        value,
        diagnostics: PtasDiagnostics {
            profiles_enumerated: enumerated,
            profiles_feasible: 0,
            best_profile: None,
            best_objective: None,
            best_value: value,
            fallback_used: true,
            profile_cap: params.profile_cap,
            total_profiles,
        },
    })
}

/// Processes profile indices congruent to `worker` modulo `stride`, honoring
/// the global profile cap. Returns (enumerated here, feasible here, best).
fn sweep_profiles(
    working: &Instance,
    params: &SchemeParams,
    worker: usize,
    stride: usize,
) -> Result<(u64, u64, Option<ProfileOutcome>)> {
    let cap = params.profile_cap.unwrap_or(u64::MAX);
    let mut enumerated = 0u64;
    let mut feasible = 0u64;
    let mut best: Option<ProfileOutcome> = None;

    for (index, profile) in enumerate_bin_profiles(working, params.bins)?
        .enumerate()
        .take_while(|(i, _)| (*i as u64) < cap)
    {
        if index % stride != worker {
            continue;
        }
        enumerated += 1;
        let Some(solution) = dp_solve(working, &profile, params)? else {
            continue;
        };
        feasible += 1;
        let value = evaluate_exact(working, &solution.configuration, TieBreak::PrincipalFavor)?;
        let candidate = ProfileOutcome {
            index: index as u64,
            value,
            objective: solution.objective,
            configuration: solution.configuration,
            profile,
        };
        best = merge_best(best, Some(candidate));
    }
    Ok((enumerated, feasible, best))
}

/// Deterministic reduction: larger exact value wins, ties go to the earlier
/// profile index, independent of worker count and arrival order.
fn merge_best(a: Option<ProfileOutcome>, b: Option<ProfileOutcome>) -> Option<ProfileOutcome> {
    match (a, b) {
        (None, x) => x,
        (x, None) => x,
        (Some(x), Some(y)) => {
            if y.value > x.value || (y.value == x.value && y.index < x.index) {
                Some(y)
            } else {
                Some(x)
            }
        }
    }
}

/// Evaluates the baseline configuration (every action on its first
/// all-sentinel configuration when one exists, else configuration 0) and
/// every single-action deviation from it; returns the best.
fn fallback_scan(working: &Instance) -> Result<(Configuration, f64)> {
    let baseline: Vec<usize> = working
        .actions
        .iter()
        .map(|a| a.configs.iter().position(|c| c.is_excluded()).unwrap_or(0))
        .collect();

    let mut best: Option<(f64, Configuration)> = None;
    let consider = |choices: Vec<usize>, best: &mut Option<(f64, Configuration)>| -> Result<()> {
        let config = Configuration::new(choices);
        let value = evaluate_exact(working, &config, TieBreak::PrincipalFavor)?;
        if best.as_ref().map_or(true, |(bv, _)| value > *bv) {
            *best = Some((value, config));
        }
        Ok(())
    };

    consider(baseline.clone(), &mut best)?;
    for (i, action) in working.actions.iter().enumerate() {
        for choice in 0..action.configs.len() {
            let mut choices = baseline.clone();
            choices[i] = choice;
            consider(choices, &mut best)?;
        }
    }
    let (value, configuration) = best.expect("fallback scan always evaluates at least one config");
    Ok((configuration, value))
}
