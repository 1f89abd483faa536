//! Multiple-choice knapsack dynamic program with per-bin lower and upper
//! bounds.
//!
//! States are `(action index, increment vector)`, where the increment vector
//! counts, per bin, how many `1/(M^2 n)` units the actions assigned so far
//! contribute to the rounded additive probability estimate. Transitions pick
//! one configuration for the current action and add its increments; a state
//! is pruned as soon as any component exceeds its bin's upper bound, since
//! increments only grow. At the final layer the accumulated vector must lie
//! inside every bin's feasibility interval.

use std::collections::HashMap;

use crate::instance::{Configuration, Instance};
use crate::rational::{ceil_at_least_zero, floor_u64, int};
use crate::{Error, Result};

use super::{
    bucket_stats, constraint_bounds, ensure_scheme_ready, BinProfile, BucketStats, SchemeParams,
};

/// A feasible maximizer of the surrogate objective.
#[derive(Clone, Debug)]
pub struct DpSolution {
    pub configuration: Configuration,
    /// Surrogate-objective value (sum of per-action `psi`).
    pub objective: f64,
}

/// Memo table: state -> best (value, first choice), `None` when infeasible.
type Memo = HashMap<(usize, Vec<u64>), Option<(f64, usize)>>;

/// Integer feasibility window per bin, in increment units.
struct Window {
    lo: Vec<u64>,
    hi: Vec<Option<u64>>,
}

impl Window {
    fn new(bins: u32, n_actions: usize) -> Self {
        let unit = int((bins as i64) * (bins as i64) * n_actions as i64);
        let mut lo = Vec::with_capacity(bins as usize);
        let mut hi = Vec::with_capacity(bins as usize);
        for j in 1..=bins {
            let (lower, upper) = constraint_bounds(j, bins);
            lo.push(ceil_at_least_zero(&(lower * &unit)));
            hi.push(upper.map(|u| floor_u64(&(u * &unit))));
        }
        Window { lo, hi }
    }

    fn over_cap(&self, k: &[u64]) -> bool {
        k.iter()
            .zip(&self.hi)
            .any(|(&kj, hj)| hj.is_some_and(|h| kj > h))
    }

    fn feasible(&self, k: &[u64]) -> bool {
        !self.over_cap(k) && k.iter().zip(&self.lo).all(|(&kj, &lj)| kj >= lj)
    }
}

/// Maximizes the surrogate objective subject to the rounded additive
/// estimates of every bin landing in their feasibility interval.
///
/// Returns `None` when no configuration is feasible for this profile. Ties
/// break toward the lexicographically smallest choice vector. The instance
/// must satisfy the preprocessing guarantees for `params.bins`.
pub fn dp_solve(
    instance: &Instance,
    profile: &BinProfile,
    params: &SchemeParams,
) -> Result<Option<DpSolution>> {
    let bins = params.bins;
    if bins < 6 {
        return Err(Error::MTooSmall { min: 6, got: bins });
    }
    ensure_scheme_ready(instance, bins)?;
    if profile.bins() != bins {
        return Err(Error::InvalidInstance(format!(
            "profile has {} bins, scheme expects {}",
            profile.bins(),
            bins
        )));
    }

    let n = instance.num_actions();
    let stats: Vec<Vec<BucketStats>> = instance
        .actions
        .iter()
        .map(|a| {
            a.configs
                .iter()
                .map(|c| bucket_stats(c, profile, bins, n))
                .collect()
        })
        .collect();
    let window = Window::new(bins, n);

    let mut memo: Memo = HashMap::new();
    let root = best_from(0, vec![0; bins as usize], &stats, &window, &mut memo);

    let Some((objective, _)) = root else {
        return Ok(None);
    };

    // Replay the memoized choices to recover the witness.
    let mut choices = Vec::with_capacity(n);
    let mut k = vec![0u64; bins as usize];
    for (i, action_stats) in stats.iter().enumerate() {
        let (_, choice) = memo
            .get(&(i, k.clone()))
            .copied()
            .flatten()
            .ok_or_else(|| Error::InternalInvariant("missing memo entry on replay".into()))?;
        for (slot, &inc) in k.iter_mut().zip(&action_stats[choice].increments) {
            *slot += inc;
        }
        choices.push(choice);
    }
    Ok(Some(DpSolution {
        configuration: Configuration::new(choices),
        objective,
    }))
}

/// Best surrogate value attainable by actions `i..n` given the increments
/// `k` already contributed by earlier actions, with the first maximizing
/// configuration choice. `None` when no completion is feasible.
fn best_from(
    i: usize,
    k: Vec<u64>,
    stats: &[Vec<BucketStats>],
    window: &Window,
    memo: &mut Memo,
) -> Option<(f64, usize)> {
    if i == stats.len() {
        return window.feasible(&k).then_some((0.0, usize::MAX));
    }
    if let Some(hit) = memo.get(&(i, k.clone())) {
        return *hit;
    }
    let mut best: Option<(f64, usize)> = None;
    for (choice, stat) in stats[i].iter().enumerate() {
        let mut k2 = k.clone();
        for (slot, &inc) in k2.iter_mut().zip(&stat.increments) {
            *slot += inc;
        }
        if window.over_cap(&k2) {
            continue;
        }
        if let Some((tail, _)) = best_from(i + 1, k2, stats, window, memo) {
            let value = stat.psi + tail;
            // Strict improvement keeps the smallest choice index on ties.
            if best.map_or(true, |(bv, _)| value > bv) {
                best = Some((value, choice));
            }
        }
    }
    memo.insert((i, k), best);
    best
}
