//! Shared helpers for the integration suites: seeded generation shortcuts
//! and an exact-rational oracle for per-bin quantities that deliberately
//! avoids the library's sweep. Masses come from products of per-action
//! cumulative distributions and win probabilities from direct per-atom
//! products, so agreement with the library is a two-route check.

#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uc_core::{random_instance, Configuration, Family, Generated, Instance, RandomSpec, Rational};

pub fn rat(x: f64) -> Rational {
    uc_core::rational::from_f64(x).expect("finite utility")
}

pub fn to_f(r: &Rational) -> f64 {
    uc_core::rational::to_f64(r)
}

/// Seeded generic instance with the given shape.
pub fn generic(seed: u64, n: usize, m: usize, k: usize) -> Instance {
    let spec = RandomSpec {
        n,
        m,
        k,
        ..RandomSpec::new(Family::GenericUc, seed)
    };
    match random_instance(&spec).unwrap() {
        Generated::Uc(inst) => inst,
        _ => unreachable!("generic family"),
    }
}

/// Seeded generic instance with shape drawn from the seed itself
/// (n, m, k each in 1..=3).
pub fn generic_varied(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=3);
    let k = rng.gen_range(1..=3);
    generic(seed, n, m, k)
}

/// Seeded uniformly random configuration for the instance.
pub fn random_config(instance: &Instance, seed: u64) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0f1);
    Configuration::new(
        instance
            .actions
            .iter()
            .map(|a| rng.gen_range(0..a.configs.len()))
            .collect(),
    )
}

/// Seeded non-decreasing profile over the instance's distinct finite
/// utilities.
pub fn random_profile(instance: &Instance, bins: u32, seed: u64) -> uc_core::BinProfile {
    let mut utilities: Vec<f64> = instance
        .iter_configs()
        .flat_map(|(_, _, c)| c.masses.iter())
        .filter(|m| !m.is_excluded())
        .map(|m| m.agent_utility)
        .collect();
    utilities.sort_by(|a, b| a.partial_cmp(b).unwrap());
    utilities.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb135);
    let mut picks: Vec<f64> = (0..bins - 1)
        .map(|_| utilities[rng.gen_range(0..utilities.len())])
        .collect();
    picks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    uc_core::BinProfile::new(picks, bins).unwrap()
}

/// Independent bin-membership rule (duplicating the library's convention on
/// purpose): 1-based, left-open right-closed bins with an open-ended top
/// bin, sentinel in no bin.
pub fn oracle_bin_of(boundaries: &[f64], u: f64) -> Option<usize> {
    if u == f64::NEG_INFINITY {
        return None;
    }
    Some(boundaries.iter().filter(|b| **b < u).count() + 1)
}

/// Exact per-bin masses and principal-utility contributions of the
/// maximum-utility distribution, plus the same per action.
pub struct OracleBinStats {
    pub bins: usize,
    /// `Pr[max in bin j]`, exact.
    pub max_mass: Vec<Rational>,
    /// `E[principal * 1[max in bin j]]`, exact (utilities rationalized).
    pub max_principal: Vec<Rational>,
    /// Probability that every action realizes the sentinel.
    pub none_mass: Rational,
    /// Per action: `Pr[action utility in bin j]`.
    pub action_mass: Vec<Vec<Rational>>,
    /// Per action: `E[action principal * 1[action utility in bin j]]`.
    pub action_principal: Vec<Vec<Rational>>,
}

impl OracleBinStats {
    /// `Pr[max in bins 1..=j]`.
    pub fn max_cum(&self, j: usize) -> Rational {
        self.max_mass[..j]
            .iter()
            .fold(Rational::zero(), |acc, m| acc + m)
    }

    /// Conditional `q_j = Pr[max in bin j | max in bins 1..=j]`, zero when
    /// the conditioning event is null.
    pub fn q_le(&self, j: usize) -> Rational {
        let cum = self.max_cum(j);
        if cum.is_zero() {
            Rational::zero()
        } else {
            &self.max_mass[j - 1] / cum
        }
    }

    /// Conditional utility contribution
    /// `u_j = E[principal | max in bin j] * q_j`.
    pub fn u_le(&self, j: usize) -> Rational {
        let cum = self.max_cum(j);
        if cum.is_zero() {
            Rational::zero()
        } else {
            &self.max_principal[j - 1] / cum
        }
    }

    /// Additive estimate `sum_i Pr[u_i in bin j | u_i in bins 1..=j]`.
    pub fn q_est(&self, j: usize) -> Rational {
        self.action_mass
            .iter()
            .map(|mass| {
                let cum = mass[..j].iter().fold(Rational::zero(), |acc, m| acc + m);
                if cum.is_zero() {
                    Rational::zero()
                } else {
                    &mass[j - 1] / cum
                }
            })
            .fold(Rational::zero(), |acc, q| acc + q)
    }

    /// Additive estimate `sum_i E[p_i | u_i in bin j] Pr[u_i in bin j | u_i
    /// in bins 1..=j]`.
    pub fn u_est(&self, j: usize) -> Rational {
        self.action_mass
            .iter()
            .zip(&self.action_principal)
            .map(|(mass, principal)| {
                let cum = mass[..j].iter().fold(Rational::zero(), |acc, m| acc + m);
                if cum.is_zero() {
                    Rational::zero()
                } else {
                    &principal[j - 1] / cum
                }
            })
            .fold(Rational::zero(), |acc, u| acc + u)
    }
}

/// Computes [`OracleBinStats`] directly from the chosen distributions.
///
/// Max bin masses use products of per-action CDFs at the boundaries; the
/// principal contributions use per-atom win probabilities built from
/// per-action "loses to this atom" masses under the principal-favoring tie
/// rule. The two routes are cross-checked against each other before
/// returning.
pub fn oracle_bin_stats(
    instance: &Instance,
    config: &Configuration,
    boundaries: &[f64],
) -> OracleBinStats {
    let bins = boundaries.len() + 1;
    let chosen: Vec<&uc_core::ConfigDist> = config
        .choices
        .iter()
        .zip(&instance.actions)
        .map(|(&c, a)| &a.configs[c])
        .collect();
    let n = chosen.len();

    // Per-action sentinel masses and per-bin masses.
    let sentinel: Vec<Rational> = chosen.iter().map(|d| d.excluded_mass()).collect();
    let mut action_mass = vec![vec![Rational::zero(); bins]; n];
    let mut action_principal = vec![vec![Rational::zero(); bins]; n];
    for (i, dist) in chosen.iter().enumerate() {
        for m in &dist.masses {
            if let Some(j) = oracle_bin_of(boundaries, m.agent_utility) {
                action_mass[i][j - 1] += &m.probability;
                action_principal[i][j - 1] += &m.probability * rat(m.principal_utility);
            }
        }
    }

    // Route 1: max-mass per bin from CDF products. Bins are right-closed,
    // so "in bins 1..=j" means "at most boundary j" (sentinel included).
    let below = |i: usize, b: f64| -> Rational {
        chosen[i]
            .masses
            .iter()
            .filter(|m| m.is_excluded() || m.agent_utility <= b)
            .fold(Rational::zero(), |acc, m| acc + &m.probability)
    };
    let none_mass = sentinel.iter().fold(Rational::one(), |acc, z| acc * z);
    let mut cum_below = Vec::with_capacity(bins + 1);
    cum_below.push(Rational::zero());
    for b in boundaries {
        let product = (0..n).fold(Rational::one(), |acc, i| acc * below(i, *b));
        cum_below.push(product - &none_mass);
    }
    cum_below.push(Rational::one() - &none_mass); // everything finite
    let max_mass: Vec<Rational> = (0..bins)
        .map(|j| &cum_below[j + 1] - &cum_below[j])
        .collect();

    // Route 2: per-atom win probabilities. Atom b of another action loses to
    // atom a when (u, principal, reversed action index) compares lower.
    let mut max_principal = vec![Rational::zero(); bins];
    let mut max_mass_check = vec![Rational::zero(); bins];
    for (i, dist) in chosen.iter().enumerate() {
        for a in &dist.masses {
            if a.is_excluded() {
                continue;
            }
            let mut win = a.probability.clone();
            for (other, other_dist) in chosen.iter().enumerate() {
                if other == i {
                    continue;
                }
                let loses = other_dist
                    .masses
                    .iter()
                    .filter(|b| {
                        b.is_excluded()
                            || b.agent_utility < a.agent_utility
                            || (b.agent_utility == a.agent_utility
                                && (b.principal_utility < a.principal_utility
                                    || (b.principal_utility == a.principal_utility && other > i)))
                    })
                    .fold(Rational::zero(), |acc, b| acc + &b.probability);
                win *= loses;
            }
            let j = oracle_bin_of(boundaries, a.agent_utility).unwrap();
            max_principal[j - 1] += &win * rat(a.principal_utility);
            max_mass_check[j - 1] += win;
        }
    }

    assert_eq!(
        max_mass, max_mass_check,
        "CDF-product and per-atom-win routes disagree on max bin masses"
    );

    OracleBinStats {
        bins,
        max_mass,
        max_principal,
        none_mass,
        action_mass,
        action_principal,
    }
}

/// Exact expected principal utility via the oracle's per-atom win route.
pub fn oracle_expected_principal(instance: &Instance, config: &Configuration) -> Rational {
    let stats = oracle_bin_stats(instance, config, &[]);
    stats
        .max_principal
        .iter()
        .fold(Rational::zero(), |a, b| a + b)
}
