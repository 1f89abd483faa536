//! The quantile-bin approximation scheme.
//!
//! The solver guesses how the optimal configuration's maximum agent utility
//! distributes over `M` probability bins, then for each guess solves a
//! knapsack-style dynamic program: maximize a surrogate objective built from
//! per-action conditional bin statistics, subject to the rounded per-bin
//! probability estimates landing in a fixed interval around `1/j`. The best
//! configuration over all guesses, re-scored by the exact evaluator, is the
//! answer.
//!
//! Bin indexing is 1-based in the math and throughout the doc comments
//! (`j` in `1..=M`); vectors store index `j` at position `j - 1`.
//!
//! The top bin is open-ended: a profile stores boundaries `u_1 <= ... <=
//! u_{M-1}` and bin `M` is `(u_{M-1}, +inf)`, so any candidate
//! configuration's mass is fully covered no matter how the guess relates to
//! its support.

mod dp;
mod ptas;

pub use dp::{dp_solve, DpSolution};
pub use ptas::{run_ptas, PtasDiagnostics, PtasResult};

use num_traits::Zero;

use crate::eval::{win_distribution, TieBreak};
use crate::instance::{require_valid, ConfigDist, Configuration, Instance};
use crate::rational::{floor_u64, int, ratio_u, to_f64, Rational};
use crate::{Error, Result};

/// Parameters of the scheme.
#[derive(Clone, Debug)]
pub struct SchemeParams {
    /// Bin count `M`; must be at least 6 (the surrogate objective sums bins
    /// 6 through `M`).
    pub bins: u32,
    /// Truncates the bin-profile stream for benchmarking. The approximation
    /// guarantee only applies to uncapped runs; diagnostics record the mode.
    pub profile_cap: Option<u64>,
    /// Fan the profile loop out across worker threads.
    pub parallel: bool,
    /// Worker count when `parallel` is set; 0 picks the available
    /// parallelism.
    pub threads: usize,
}

impl SchemeParams {
    pub fn new(bins: u32) -> Self {
        SchemeParams {
            bins,
            profile_cap: None,
            parallel: false,
            threads: 0,
        }
    }
}

/// Guessed bin boundaries `u_1 <= ... <= u_{M-1}` (finite agent utilities).
///
/// Implicitly `u_0 = -inf`; bin `j < M` is `(u_{j-1}, u_j]` and bin `M` is
/// `(u_{M-1}, +inf)`. Boundaries are chosen as the smallest utilities whose
/// cumulative probability reaches `j/M`, so the boundary utility itself must
/// count toward bin `j` for the cumulative mass to land in
/// `[j/M, j/M + 1/M^2]`. The sentinel agent utility lies in no bin.
#[derive(Clone, Debug, PartialEq)]
pub struct BinProfile {
    pub boundaries: Vec<f64>,
}

impl BinProfile {
    /// Validates monotonicity and finiteness; `boundaries.len()` must be
    /// `bins - 1`.
    pub fn new(boundaries: Vec<f64>, bins: u32) -> Result<Self> {
        if boundaries.len() + 1 != bins as usize {
            return Err(Error::InvalidInstance(format!(
                "profile has {} boundaries for {} bins",
                boundaries.len(),
                bins
            )));
        }
        if boundaries.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidInstance(
                "profile boundaries must be finite".into(),
            ));
        }
        if boundaries.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInstance(
                "profile boundaries must be non-decreasing".into(),
            ));
        }
        Ok(BinProfile { boundaries })
    }

    /// Number of bins `M`.
    pub fn bins(&self) -> u32 {
        self.boundaries.len() as u32 + 1
    }

    /// 1-based bin index of a finite utility; `None` for the sentinel.
    pub fn bin_of(&self, agent_utility: f64) -> Option<usize> {
        if agent_utility == f64::NEG_INFINITY {
            return None;
        }
        let strictly_below = self.boundaries.partition_point(|b| *b < agent_utility);
        Some(strictly_below + 1)
    }
}

/// Surrogate objective weights `c_j = (j - 5) / (M - 1)` for `j = 6..=M`.
pub fn weights(bins: u32) -> Result<Vec<f64>> {
    if bins < 6 {
        return Err(Error::MTooSmall { min: 6, got: bins });
    }
    Ok((6..=bins)
        .map(|j| (j - 5) as f64 / (bins - 1) as f64)
        .collect())
}

/// Feasibility interval for the rounded additive estimate of bin `j`:
/// lower bound `(1 - 1/M)/j - 1/M^2`, upper bound `(1 + 1/M)/(j - 1)` for
/// `j >= 2` and unbounded for `j = 1`.
pub fn constraint_bounds(j: u32, bins: u32) -> (Rational, Option<Rational>) {
    assert!(j >= 1 && j <= bins, "bin index {j} out of range 1..={bins}");
    let m = bins as i64;
    let lower = crate::rational::ratio(m - 1, m * j as i64) - crate::rational::ratio(1, m * m);
    let upper = if j >= 2 {
        Some(crate::rational::ratio(m + 1, m * (j as i64 - 1)))
    } else {
        None
    };
    (lower, upper)
}

/// Errors unless all finite agent utilities in the instance are pairwise
/// distinct.
fn ensure_distinct_utilities(instance: &Instance, bins: u32) -> Result<()> {
    let mut utilities: Vec<f64> = instance
        .iter_configs()
        .flat_map(|(_, _, c)| c.masses.iter())
        .filter(|m| !m.is_excluded())
        .map(|m| m.agent_utility)
        .collect();
    utilities.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if let Some(w) = utilities.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::NotPreprocessed {
            bins,
            reason: format!("duplicate finite agent utility {}", w[0]),
        });
    }
    Ok(())
}

/// Errors unless the instance satisfies both preprocessing guarantees for
/// `bins`: atom masses at most `1/bins^2` and distinct finite utilities.
pub(crate) fn ensure_scheme_ready(instance: &Instance, bins: u32) -> Result<()> {
    require_valid(instance)?;
    let cell = ratio_u(1, bins as u64 * bins as u64);
    for (i, j, config) in instance.iter_configs() {
        for (k, mass) in config.masses.iter().enumerate() {
            if mass.probability > cell {
                return Err(Error::NotPreprocessed {
                    bins,
                    reason: format!(
                        "actions[{i}].configs[{j}].masses[{k}] has probability {} > 1/{}",
                        mass.probability,
                        bins * bins
                    ),
                });
            }
        }
    }
    ensure_distinct_utilities(instance, bins)
}

/// Bin boundaries induced by a configuration: `u_j` is the smallest realized
/// utility of the maximum whose cumulative probability reaches `j / bins`.
///
/// The cumulative distribution counts the all-sentinel joint outcome as mass
/// below every finite utility. On instances that satisfy the preprocessing
/// guarantees, the resulting cumulative bin masses land in
/// `[j/M, j/M + 1/M^2]`. Requires distinct finite agent utilities; the mass
/// cap is not needed to compute boundaries and is not enforced here.
pub fn bins_from_configuration(
    instance: &Instance,
    config: &Configuration,
    bins: u32,
) -> Result<BinProfile> {
    if bins < 2 {
        return Err(Error::MTooSmall { min: 2, got: bins });
    }
    ensure_distinct_utilities(instance, bins)?;
    let (wins, none_mass) = win_distribution(instance, config, TieBreak::PrincipalFavor)?;
    if wins.is_empty() {
        return Err(Error::NoFiniteSupport);
    }

    let mut boundaries = Vec::with_capacity(bins as usize - 1);
    let mut cum = none_mass;
    let mut pos = 0usize;
    for j in 1..bins {
        let target = ratio_u(j as u64, bins as u64);
        while cum < target && pos < wins.len() {
            cum += &wins[pos].win_probability;
            pos += 1;
        }
        // pos == 0 only when the sentinel mass alone reaches the target; the
        // smallest support utility is then the smallest qualifying boundary.
        let at = pos.saturating_sub(1);
        boundaries.push(wins[at].agent_utility);
    }
    BinProfile::new(boundaries, bins)
}

/// Per-bin statistics of one action's configuration against a profile.
///
/// `q_raw[j-1]` is the exact conditional probability that the action's
/// utility lands in bin `j` given it lands in bins `1..=j` (zero when the
/// conditioning event has probability zero). `increments[j-1]` is
/// `floor(q_raw * M^2 n)`, the action's contribution to the rounded additive
/// estimate in units of `1/(M^2 n)`. `psi` is the action's contribution to
/// the surrogate objective.
#[derive(Clone, Debug)]
pub struct BucketStats {
    pub q_raw: Vec<Rational>,
    pub increments: Vec<u64>,
    pub psi: f64,
}

/// Computes [`BucketStats`] for one configuration of one action.
pub fn bucket_stats(
    dist: &ConfigDist,
    profile: &BinProfile,
    bins: u32,
    n_actions: usize,
) -> BucketStats {
    let b = bins as usize;
    let mut bin_mass = vec![Rational::zero(); b];
    let mut bin_weighted_principal = vec![0.0f64; b];
    for m in &dist.masses {
        if let Some(j) = profile.bin_of(m.agent_utility) {
            bin_mass[j - 1] += &m.probability;
            bin_weighted_principal[j - 1] += to_f64(&m.probability) * m.principal_utility;
        }
    }

    let unit = int((bins as i64) * (bins as i64) * n_actions as i64);
    let mut q_raw = Vec::with_capacity(b);
    let mut increments = Vec::with_capacity(b);
    let mut psi = 0.0f64;
    let mut cum = Rational::zero();
    for j in 1..=b {
        cum += &bin_mass[j - 1];
        let q = if cum.is_zero() {
            Rational::zero()
        } else {
            &bin_mass[j - 1] / &cum
        };
        increments.push(floor_u64(&(&q * &unit)));
        if j >= 6 && !cum.is_zero() {
            // c_j * E[principal | bin j] * q = c_j * (weighted mass) / cum.
            let c = (j as f64 - 5.0) / (bins as f64 - 1.0);
            psi += c * bin_weighted_principal[j - 1] / to_f64(&cum);
        }
        q_raw.push(q);
    }
    BucketStats {
        q_raw,
        increments,
        psi,
    }
}

/// Surrogate objective of a full configuration: the sum of its actions'
/// `psi` contributions (equal to the weighted sum of per-bin additive
/// utility estimates after swapping summation order).
pub fn approx_objective(stats: &[BucketStats]) -> f64 {
    stats.iter().map(|s| s.psi).sum()
}

/// Streams every non-decreasing `(bins - 1)`-tuple of candidate boundaries,
/// drawn from the distinct finite agent utilities of the instance, in
/// lexicographic order. The count is `C(S + bins - 2, bins - 1)` for `S`
/// distinct utilities.
pub fn enumerate_bin_profiles(instance: &Instance, bins: u32) -> Result<BinProfileIter> {
    ensure_scheme_ready(instance, bins)?;
    if bins < 2 {
        return Err(Error::MTooSmall { min: 2, got: bins });
    }
    let mut utilities: Vec<f64> = instance
        .iter_configs()
        .flat_map(|(_, _, c)| c.masses.iter())
        .filter(|m| !m.is_excluded())
        .map(|m| m.agent_utility)
        .collect();
    utilities.sort_by(|a, b| a.partial_cmp(b).unwrap());
    utilities.dedup();
    if utilities.is_empty() {
        return Err(Error::NoFiniteSupport);
    }
    Ok(BinProfileIter {
        utilities,
        next: Some(vec![0; bins as usize - 1]),
    })
}

/// Iterator produced by [`enumerate_bin_profiles`].
pub struct BinProfileIter {
    utilities: Vec<f64>,
    next: Option<Vec<usize>>,
}

impl BinProfileIter {
    /// Candidate boundary values the iterator draws from.
    pub fn distinct_utilities(&self) -> usize {
        self.utilities.len()
    }
}

impl Iterator for BinProfileIter {
    type Item = BinProfile;

    fn next(&mut self) -> Option<BinProfile> {
        let idx = self.next.take()?;
        let profile = BinProfile {
            boundaries: idx.iter().map(|&i| self.utilities[i]).collect(),
        };
        // Advance the non-decreasing odometer.
        let mut next = idx;
        let s = self.utilities.len();
        let mut pos = next.len();
        while pos > 0 {
            if next[pos - 1] + 1 < s {
                let v = next[pos - 1] + 1;
                for slot in next.iter_mut().skip(pos - 1) {
                    *slot = v;
                }
                self.next = Some(next);
                return Some(profile);
            }
            pos -= 1;
        }
        self.next = None;
        Some(profile)
    }
}

/// Number of profiles [`enumerate_bin_profiles`] yields for `distinct`
/// utilities: the multiset coefficient `C(distinct + bins - 2, bins - 1)`.
/// `None` on overflow.
pub fn profile_count(distinct: usize, bins: u32) -> Option<u128> {
    let k = bins as u128 - 1;
    let n = distinct as u128 + bins as u128 - 2;
    let mut result: u128 = 1;
    for i in 1..=k {
        result = result.checked_mul(n - k + i)?;
        result /= i;
    }
    Some(result)
}
