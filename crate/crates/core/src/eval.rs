//! Exact and Monte Carlo evaluation of a configuration's expected principal
//! utility.
//!
//! The exact evaluator runs a single sweep over all atoms of the chosen
//! distributions, sorted by the agent's preference order. Walking atoms from
//! least to most preferred while tracking each action's cumulative "already
//! passed" mass gives every atom's exact win probability as a product of
//! rationals; the expected principal utility is the win-probability-weighted
//! sum of principal utilities. An atom carrying the [`NEG_INF`] sentinel
//! never wins; the joint outcome where every action realizes the sentinel
//! contributes zero.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

use crate::instance::{require_valid, Configuration, Instance, NEG_INF};
use crate::rational::{to_f64, Rational};
use crate::{Error, Result};
use num_traits::Zero;

/// How to resolve equal finite agent utilities across actions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// The agent picks the atom with the larger principal utility, then the
    /// lower action index. This matches the direction in which preprocessing
    /// perturbs utilities, so raw and preprocessed evaluations agree.
    PrincipalFavor,
    /// Refuse to evaluate when two actions can realize the same finite agent
    /// utility.
    Forbid,
}

/// One atom of the joint outcome distribution of the agent's choice: the
/// winning atom's utilities together with the exact probability that it is
/// realized and preferred over every other action's realization.
#[derive(Clone, Debug)]
pub struct WinAtom {
    pub action: usize,
    pub agent_utility: f64,
    pub principal_utility: f64,
    pub win_probability: Rational,
}

struct SweepAtom<'a> {
    action: usize,
    agent_utility: f64,
    principal_utility: f64,
    probability: &'a Rational,
}

/// Exact joint distribution over the agent's chosen atom.
///
/// Returns the win probability of every finite atom (zero-probability wins
/// included) in preference order, plus the probability that every action
/// realizes the sentinel. The rational win probabilities and the sentinel
/// mass sum to exactly one.
pub fn win_distribution(
    instance: &Instance,
    config: &Configuration,
    tie: TieBreak,
) -> Result<(Vec<WinAtom>, Rational)> {
    require_valid(instance)?;
    let chosen = config.chosen(instance).map_err(Error::InvalidInstance)?;
    let n = chosen.len();

    let mut atoms: Vec<SweepAtom> = Vec::new();
    // Cumulative mass of each action that the current sweep position already
    // passed; seeded with the sentinel mass, which loses to everything.
    let mut below: Vec<Rational> = Vec::with_capacity(n);
    for (i, dist) in chosen.iter().enumerate() {
        below.push(dist.excluded_mass());
        for m in &dist.masses {
            if !m.is_excluded() {
                atoms.push(SweepAtom {
                    action: i,
                    agent_utility: m.agent_utility,
                    principal_utility: m.principal_utility,
                    probability: &m.probability,
                });
            }
        }
    }

    // Ascending preference order. Atoms earlier in this order lose to atoms
    // later in it; atoms of the same action are never compared at runtime
    // since each action realizes exactly one of its atoms.
    atoms.sort_by(|a, b| preference_order(a, b));

    if tie == TieBreak::Forbid {
        for pair in atoms.windows(2) {
            if pair[0].agent_utility == pair[1].agent_utility && pair[0].action != pair[1].action {
                return Err(Error::UnresolvedTie {
                    first: pair[0].action.min(pair[1].action),
                    second: pair[0].action.max(pair[1].action),
                    utility: pair[0].agent_utility,
                });
            }
        }
    }

    let mut wins = Vec::with_capacity(atoms.len());
    for atom in &atoms {
        let mut p = atom.probability.clone();
        for (i, mass_below) in below.iter().enumerate() {
            if i != atom.action {
                if mass_below.is_zero() {
                    p = Rational::zero();
                    break;
                }
                p *= mass_below;
            }
        }
        wins.push(WinAtom {
            action: atom.action,
            agent_utility: atom.agent_utility,
            principal_utility: atom.principal_utility,
            win_probability: p,
        });
        below[atom.action] += atom.probability;
    }

    let none_finite = chosen
        .iter()
        .fold(Rational::from_integer(1.into()), |acc, dist| {
            acc * dist.excluded_mass()
        });
    Ok((wins, none_finite))
}

fn preference_order(a: &SweepAtom, b: &SweepAtom) -> Ordering {
    // Finite utilities only; NaN was rejected by validation.
    a.agent_utility
        .partial_cmp(&b.agent_utility)
        .unwrap()
        .then_with(|| {
            a.principal_utility
                .partial_cmp(&b.principal_utility)
                .unwrap()
        })
        // On full ties the lower action index wins, i.e. sorts later.
        .then_with(|| b.action.cmp(&a.action))
}

/// Expected principal utility of `config`, computed exactly.
pub fn evaluate_exact(instance: &Instance, config: &Configuration, tie: TieBreak) -> Result<f64> {
    let (wins, _) = win_distribution(instance, config, tie)?;
    Ok(wins
        .iter()
        .map(|w| to_f64(&w.win_probability) * w.principal_utility)
        .sum())
}

/// Monte Carlo estimate of the expected principal utility.
///
/// Samples each action's chosen distribution independently, applies the same
/// preference order as [`evaluate_exact`], and returns the sample mean with
/// its standard error. Deterministic for a fixed seed. The standard error is
/// zero when `samples == 1`.
pub fn evaluate_monte_carlo(
    instance: &Instance,
    config: &Configuration,
    samples: u64,
    seed: u64,
    tie: TieBreak,
) -> Result<(f64, f64)> {
    require_valid(instance)?;
    if samples == 0 {
        return Err(Error::BadSpec("samples must be positive".into()));
    }
    let chosen = config.chosen(instance).map_err(Error::InvalidInstance)?;

    if tie == TieBreak::Forbid {
        // Static support check, mirroring the exact evaluator.
        let _ = win_distribution(instance, config, tie)?;
    }

    // Per-action cumulative sampling tables in f64.
    let tables: Vec<Vec<(f64, f64, f64)>> = chosen
        .iter()
        .map(|dist| {
            let mut cum = 0.0;
            dist.masses
                .iter()
                .map(|m| {
                    cum += to_f64(&m.probability);
                    (cum, m.agent_utility, m.principal_utility)
                })
                .collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..samples {
        // (agent utility, principal utility, action) of the current best.
        let mut best: Option<(f64, f64, usize)> = None;
        for (i, table) in tables.iter().enumerate() {
            let u: f64 = rng.gen();
            let &(_, ua, up) = table
                .iter()
                .find(|&&(cum, _, _)| u < cum)
                .unwrap_or_else(|| table.last().unwrap());
            if ua == NEG_INF {
                continue;
            }
            let better = match best {
                None => true,
                Some((bu, bp, bi)) => match ua.partial_cmp(&bu).unwrap() {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => up > bp || (up == bp && i < bi),
                },
            };
            if better {
                best = Some((ua, up, i));
            }
        }
        let value = best.map_or(0.0, |(_, up, _)| up);
        sum += value;
        sum_sq += value * value;
    }

    let nf = samples as f64;
    let mean = sum / nf;
    let std_error = if samples > 1 {
        let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
        (var / nf).sqrt()
    } else {
        0.0
    };
    Ok((mean, std_error))
}
