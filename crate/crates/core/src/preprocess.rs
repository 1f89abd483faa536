//! Mass splitting and utility perturbation.
//!
//! The quantile-bin scheme needs two guarantees the raw input does not give:
//! every atom's probability is at most `1/M^2`, and all finite agent
//! utilities across the whole instance are pairwise distinct. This module
//! establishes both while preserving the expected principal utility of every
//! configuration:
//!
//! 1. Every atom of probability `p` is split into `floor(p * M^2)` pieces of
//!    probability exactly `1/M^2` plus one remainder piece (dropped when the
//!    remainder is zero). Pieces keep the original principal utility.
//! 2. Atoms are processed in a single global pass sorted by ascending
//!    principal utility; the `l`-th emitted piece gets agent utility
//!    `u + delta * l` for a global counter `l`. Sorting by principal utility
//!    makes the perturbation resolve agent-utility ties in the principal's
//!    favor.
//!
//! `delta` is chosen small enough that no piece crosses the next larger
//! original utility, so every strict preference of the raw instance is
//! preserved.

use num_traits::Zero;

use crate::instance::{require_valid, ActionMenu, ConfigDist, Instance, PointMass};
use crate::rational::{floor_u64, ratio_u, Rational};
use crate::{Error, Result};

/// Perturbation size: explicit, or derived by [`choose_delta`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Delta {
    Auto,
    Fixed(f64),
}

/// Parameters for [`preprocess`].
#[derive(Clone, Copy, Debug)]
pub struct PreprocessParams {
    /// Fineness parameter; also the bin count of the scheme. Must be >= 2.
    pub bins: u32,
    pub delta: Delta,
}

impl PreprocessParams {
    pub fn auto(bins: u32) -> Self {
        PreprocessParams {
            bins,
            delta: Delta::Auto,
        }
    }
}

/// Where the pieces of one original atom ended up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceProvenance {
    pub action: usize,
    pub config: usize,
    pub atom: usize,
    /// Indices into the new mass list of the same `(action, config)`.
    pub pieces: Vec<usize>,
}

/// Output of [`preprocess`].
#[derive(Clone, Debug)]
pub struct Preprocessed {
    pub instance: Instance,
    pub delta: f64,
    pub provenance: Vec<PieceProvenance>,
}

/// Picks a perturbation `delta = g / (2 L)`, where `g` is the minimum gap
/// between distinct finite agent utilities anywhere in the instance (`1` if
/// fewer than two distinct finite utilities exist) and `L` is the number of
/// pieces the split will emit. The largest perturbation applied is
/// `delta * (L - 1) < g / 2`, so every strict preference survives.
pub fn choose_delta(instance: &Instance, bins: u32) -> Result<f64> {
    require_valid(instance)?;
    check_bins(bins)?;
    let gap = min_finite_gap(instance);
    let pieces = count_pieces(instance, bins);
    Ok(gap / (2.0 * pieces.max(1) as f64))
}

fn check_bins(bins: u32) -> Result<()> {
    if bins < 2 {
        return Err(Error::MTooSmall { min: 2, got: bins });
    }
    Ok(())
}

fn min_finite_gap(instance: &Instance) -> f64 {
    let mut utilities: Vec<f64> = instance
        .iter_configs()
        .flat_map(|(_, _, c)| c.masses.iter())
        .filter(|m| !m.is_excluded())
        .map(|m| m.agent_utility)
        .collect();
    utilities.sort_by(|a, b| a.partial_cmp(b).unwrap());
    utilities.dedup();
    if utilities.len() < 2 {
        return 1.0;
    }
    utilities
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

fn count_pieces(instance: &Instance, bins: u32) -> u64 {
    let cell = ratio_u(1, (bins as u64) * (bins as u64));
    instance
        .iter_configs()
        .flat_map(|(_, _, c)| c.masses.iter())
        .map(|m| {
            let wholes = floor_u64(&(&m.probability / &cell));
            let remainder = &m.probability - &cell * Rational::from_integer(wholes.into());
            wholes + u64::from(!remainder.is_zero())
        })
        .sum()
}

/// Splits and perturbs every atom as described in the module docs.
///
/// Postconditions: every output probability is at most `1/bins^2`; all finite
/// agent utilities are pairwise distinct across the whole instance; each
/// configuration still sums to exactly one; and the expected principal
/// utility of every configuration is unchanged up to float round-off.
pub fn preprocess(instance: &Instance, params: &PreprocessParams) -> Result<Preprocessed> {
    require_valid(instance)?;
    check_bins(params.bins)?;
    let delta = match params.delta {
        Delta::Fixed(d) if d > 0.0 && d.is_finite() => d,
        Delta::Fixed(d) => {
            return Err(Error::InvalidInstance(format!(
                "perturbation must be positive and finite, got {d}"
            )))
        }
        Delta::Auto => choose_delta(instance, params.bins)?,
    };

    let cell = ratio_u(1, (params.bins as u64) * (params.bins as u64));

    // Global mass list, sorted by ascending principal utility; the stable
    // tie rule (action, config, atom) makes outputs reproducible.
    let mut entries: Vec<(usize, usize, usize, &PointMass)> = instance
        .iter_configs()
        .flat_map(|(i, j, c)| c.masses.iter().enumerate().map(move |(k, m)| (i, j, k, m)))
        .collect();
    entries.sort_by(|a, b| {
        a.3.principal_utility
            .partial_cmp(&b.3.principal_utility)
            .unwrap()
            .then(a.0.cmp(&b.0))
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut new_masses: Vec<Vec<Vec<PointMass>>> = instance
        .actions
        .iter()
        .map(|a| vec![Vec::new(); a.configs.len()])
        .collect();
    let mut provenance = Vec::with_capacity(entries.len());

    let mut counter: u64 = 0;
    for (action, config, atom, mass) in entries {
        let mut pieces = Vec::new();
        let mut emit = |probability: Rational, counter: &mut u64| {
            let target = &mut new_masses[action][config];
            target.push(PointMass::new(
                mass.agent_utility + delta * (*counter as f64),
                mass.principal_utility,
                probability,
            ));
            pieces.push(target.len() - 1);
            *counter += 1;
        };
        let wholes = floor_u64(&(&mass.probability / &cell));
        for _ in 0..wholes {
            emit(cell.clone(), &mut counter);
        }
        let remainder = &mass.probability - &cell * Rational::from_integer(wholes.into());
        if !remainder.is_zero() {
            emit(remainder, &mut counter);
        }
        provenance.push(PieceProvenance {
            action,
            config,
            atom,
            pieces,
        });
    }

    let actions = new_masses
        .into_iter()
        .map(|configs| ActionMenu::new(configs.into_iter().map(ConfigDist::new).collect()))
        .collect();
    Ok(Preprocessed {
        instance: Instance::new(instance.label.clone(), actions),
        delta,
        provenance,
    })
}
