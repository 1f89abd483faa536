//! Exhaustive search over all configuration vectors.
//!
//! This is the ground-truth oracle the rest of the crate is tested against:
//! every approximation guarantee and alignment measurement is certified by
//! comparing against an optimum found here on instances small enough to
//! enumerate.

use crate::eval::{evaluate_exact, TieBreak};
use crate::instance::{require_valid, Configuration, Instance};
use crate::{Error, Result};

/// Default cap on the number of enumerated configurations.
pub const DEFAULT_BRUTE_CAP: u128 = 1_000_000;

/// Result of an exhaustive search.
#[derive(Clone, Debug)]
pub struct BruteForceResult {
    pub configuration: Configuration,
    pub value: f64,
    pub configurations_evaluated: u64,
}

/// Exhaustively maximizes the expected principal utility.
///
/// Ties are broken toward the lexicographically smallest choice vector.
/// Uses the principal-favoring tie rule, so raw instances with coinciding
/// agent utilities are handled the same way preprocessing would.
pub fn brute_force_opt(instance: &Instance) -> Result<BruteForceResult> {
    brute_force_opt_capped(instance, DEFAULT_BRUTE_CAP)
}

/// Same as [`brute_force_opt`] with an explicit cap on the search space.
pub fn brute_force_opt_capped(instance: &Instance, cap: u128) -> Result<BruteForceResult> {
    require_valid(instance)?;
    let sizes: Vec<usize> = instance.actions.iter().map(|a| a.configs.len()).collect();
    let mut space: u128 = 1;
    for &s in &sizes {
        space = space
            .checked_mul(s as u128)
            .ok_or(Error::SearchSpaceTooLarge {
                size: u128::MAX,
                cap,
            })?;
    }
    if space > cap {
        return Err(Error::SearchSpaceTooLarge { size: space, cap });
    }

    let mut choices = vec![0usize; sizes.len()];
    let mut best: Option<(f64, Configuration)> = None;
    let mut evaluated = 0u64;
    loop {
        let candidate = Configuration::new(choices.clone());
        let value = evaluate_exact(instance, &candidate, TieBreak::PrincipalFavor)?;
        evaluated += 1;
        // Strict improvement keeps the lexicographically first maximizer.
        if best.as_ref().map_or(true, |(bv, _)| value > *bv) {
            best = Some((value, candidate));
        }
        if !advance(&mut choices, &sizes) {
            break;
        }
    }
    let (value, configuration) = best.expect("search space is nonempty for a valid instance");
    Ok(BruteForceResult {
        configuration,
        value,
        configurations_evaluated: evaluated,
    })
}

/// Lexicographic odometer step; returns false once the space is exhausted.
fn advance(choices: &mut [usize], sizes: &[usize]) -> bool {
    for i in (0..choices.len()).rev() {
        choices[i] += 1;
        if choices[i] < sizes[i] {
            return true;
        }
        choices[i] = 0;
    }
    false
}
