//! Utility-alignment measurement.
//!
//! For a solved instance, the alignment profile records, at every realized
//! value of the agent's maximum utility, the principal's expected utility
//! conditioned on the agent doing no better than that value, relative to the
//! unconditional expectation. An instance is `f(q)`-aligned when the
//! conditional never exceeds `f(q)` times the base at the quantile `q` of
//! the threshold. Low ratios mean principal and agent profit from the same
//! realizations.
//!
//! The module also evaluates the scheme's guaranteed approximation factor
//! for a given bin count from per-quantile alignment coefficients.

use crate::eval::{win_distribution, TieBreak};
use crate::instance::{require_valid, ConfigDist, Configuration, Instance};
use crate::rational::{ratio_u, to_f64, Rational};
use crate::{Error, Result};
use num_traits::Zero;

/// Relative slack used when comparing measured ratios against `f(q)`;
/// absorbs float round-off in the conditional expectations.
pub const ALIGNMENT_SLACK: f64 = 1e-9;

/// One recorded threshold of an alignment profile.
#[derive(Clone, Debug)]
pub struct AlignmentPoint {
    /// Threshold `U`: a realized value of the maximum agent utility.
    pub threshold: f64,
    /// Exact `Pr[max utility <= U]` (the all-sentinel outcome counts as
    /// below every finite threshold).
    pub q: Rational,
    /// `E[principal | max utility <= U]`.
    pub cond: f64,
    /// `cond / base`.
    pub ratio: f64,
}

/// Empirical alignment curve of one configuration.
#[derive(Clone, Debug)]
pub struct AlignmentProfile {
    pub points: Vec<AlignmentPoint>,
    /// Unconditional expected principal utility; positive.
    pub base: f64,
}

/// Per-bin alignment coefficients `r_j = f(j / M)`.
#[derive(Clone, Debug)]
pub struct AlignmentCoefficients {
    /// `r[j - 1]` holds `r_j` for `j = 1..=M`.
    pub r: Vec<f64>,
}

/// Measures the alignment profile of `config`, one point per realized value
/// of the maximum agent utility.
///
/// Thresholds between support points give the same conditional expectation
/// as the nearest support point below, so only support points are recorded.
/// Errors with [`Error::ZeroBaseUtility`] when the configuration's expected
/// principal utility is zero.
pub fn alignment_profile(
    instance: &Instance,
    config: &Configuration,
    tie: TieBreak,
) -> Result<AlignmentProfile> {
    require_valid(instance)?;
    let (wins, none_mass) = win_distribution(instance, config, tie)?;

    let base: f64 = wins
        .iter()
        .map(|w| to_f64(&w.win_probability) * w.principal_utility)
        .sum();
    if base <= 0.0 {
        return Err(Error::ZeroBaseUtility);
    }

    // Wins arrive in ascending utility order; group by distinct utility.
    let mut points = Vec::new();
    let mut cum_p = none_mass;
    let mut cum_up = 0.0f64;
    let mut i = 0usize;
    while i < wins.len() {
        let u = wins[i].agent_utility;
        while i < wins.len() && wins[i].agent_utility == u {
            cum_p += &wins[i].win_probability;
            cum_up += to_f64(&wins[i].win_probability) * wins[i].principal_utility;
            i += 1;
        }
        if cum_p.is_zero() {
            continue;
        }
        let cond = cum_up / to_f64(&cum_p);
        points.push(AlignmentPoint {
            threshold: u,
            q: cum_p.clone(),
            cond,
            ratio: cond / base,
        });
    }
    Ok(AlignmentProfile { points, base })
}

/// Verdict of [`check_alignment`].
#[derive(Clone, Debug)]
pub struct AlignmentVerdict {
    pub holds: bool,
    /// `(q, ratio, f(q))` at the point maximizing `ratio / f(q)`.
    pub worst: Option<(f64, f64, f64)>,
}

/// Checks `ratio <= f(q) * (1 + slack)` at every recorded point.
pub fn check_alignment(profile: &AlignmentProfile, f: impl Fn(f64) -> f64) -> AlignmentVerdict {
    let mut holds = true;
    let mut worst: Option<(f64, (f64, f64, f64))> = None;
    for p in &profile.points {
        let q = to_f64(&p.q);
        let bound = f(q);
        let score = p.ratio / bound;
        if p.ratio > bound * (1.0 + ALIGNMENT_SLACK) {
            holds = false;
        }
        if worst.as_ref().map_or(true, |(s, _)| score > *s) {
            worst = Some((score, (q, p.ratio, bound)));
        }
    }
    AlignmentVerdict {
        holds,
        worst: worst.map(|(_, w)| w),
    }
}

/// Checks the per-action form of alignment: for every action, every
/// configuration, and every support threshold `U` with `Pr[utility <= U] =
/// q > 0` and positive expected principal utility,
/// `E[principal | utility <= U] <= f(q) * E[principal]`. All-sentinel
/// configurations pass vacuously; sentinel mass counts as below every finite
/// threshold.
pub fn local_alignment_check(instance: &Instance, f: impl Fn(f64) -> f64) -> Result<bool> {
    require_valid(instance)?;
    for (_, _, dist) in instance.iter_configs() {
        if !config_locally_aligned(dist, &f) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn config_locally_aligned(dist: &ConfigDist, f: &impl Fn(f64) -> f64) -> bool {
    let base = dist.expected_principal();
    if base <= 0.0 || dist.is_excluded() {
        return true;
    }
    let mut atoms: Vec<(&Rational, f64, f64)> = dist
        .masses
        .iter()
        .filter(|m| !m.is_excluded())
        .map(|m| (&m.probability, m.agent_utility, m.principal_utility))
        .collect();
    atoms.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());

    let mut cum_p = dist.excluded_mass();
    let mut cum_up = 0.0f64;
    let mut i = 0usize;
    while i < atoms.len() {
        let u = atoms[i].1;
        while i < atoms.len() && atoms[i].1 == u {
            cum_p += atoms[i].0;
            cum_up += to_f64(atoms[i].0) * atoms[i].2;
            i += 1;
        }
        if cum_p.is_zero() {
            continue;
        }
        let q = to_f64(&cum_p);
        let cond = cum_up / q;
        if cond > f(q) * base * (1.0 + ALIGNMENT_SLACK) {
            return false;
        }
    }
    true
}

/// Samples a non-increasing alignment function at the bin quantiles:
/// `r_j = f(j / M)`.
pub fn alignment_coefficients(f: impl Fn(f64) -> f64, bins: u32) -> AlignmentCoefficients {
    AlignmentCoefficients {
        r: (1..=bins).map(|j| f(j as f64 / bins as f64)).collect(),
    }
}

/// The tightest coefficients certified by a measured profile: `r_j` is the
/// largest recorded ratio at quantiles `>= j / M` (at least 1, since the
/// full-mass point always has ratio 1).
pub fn empirical_coefficients(profile: &AlignmentProfile, bins: u32) -> AlignmentCoefficients {
    let r = (1..=bins)
        .map(|j| {
            let quantile = ratio_u(j as u64, bins as u64);
            profile
                .points
                .iter()
                .filter(|p| p.q >= quantile)
                .map(|p| p.ratio)
                .fold(1.0f64, f64::max)
        })
        .collect();
    AlignmentCoefficients { r }
}

/// Guaranteed approximation factor of the scheme for bin count `M` and
/// alignment coefficients `r`:
///
/// `alpha = (M-1)/(M+1) * ((M-5)/(M-1) - (5/6) r_5/(M-1)
///          - 5/(M-1) * sum_{j=6..M} r_j/(j-1))`.
///
/// May be negative for small `M`, in which case the guarantee is vacuous.
pub fn approx_ratio(bins: u32, r: &AlignmentCoefficients) -> Result<f64> {
    if bins < 6 {
        return Err(Error::MTooSmall { min: 6, got: bins });
    }
    if r.r.len() < bins as usize {
        return Err(Error::BadSpec(format!(
            "need {} alignment coefficients, got {}",
            bins,
            r.r.len()
        )));
    }
    let m = bins as f64;
    let tail: f64 = (6..=bins)
        .map(|j| r.r[j as usize - 1] / (j as f64 - 1.0))
        .sum();
    let inner = (m - 5.0) / (m - 1.0) - (5.0 / 6.0) * r.r[4] / (m - 1.0) - 5.0 / (m - 1.0) * tail;
    Ok((m - 1.0) / (m + 1.0) * inner)
}
