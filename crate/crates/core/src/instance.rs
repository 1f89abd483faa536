//! Domain types for discrete utility-configuration instances.
//!
//! An instance consists of `n` actions. Each action offers a menu of
//! configurations, and each configuration is a finite joint distribution over
//! (agent utility, principal utility) pairs. A solution picks one
//! configuration per action; the agent then realizes one atom per action
//! independently and takes the action with the highest realized agent
//! utility, handing the principal that atom's principal utility.
//!
//! Agent utilities are finite `f64`s or the sentinel [`NEG_INF`], meaning the
//! atom can never be chosen. Probabilities are exact rationals and must sum
//! to exactly one per configuration.

use num_traits::{One, Zero};
use std::fmt;

use crate::rational::Rational;

/// Sentinel agent utility for atoms that are never chosen.
pub const NEG_INF: f64 = f64::NEG_INFINITY;

/// One atom of a configuration's joint distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMass {
    /// Realized agent utility: a finite number or [`NEG_INF`].
    pub agent_utility: f64,
    /// Realized principal utility; nonnegative and finite.
    pub principal_utility: f64,
    /// Probability of this atom, in (0, 1].
    pub probability: Rational,
}

impl PointMass {
    /// Builds an atom, normalizing `-0.0` utilities to `0.0` so that equal
    /// utilities compare equal under bitwise-aware orderings.
    pub fn new(agent_utility: f64, principal_utility: f64, probability: Rational) -> Self {
        PointMass {
            agent_utility: normalize_zero(agent_utility),
            principal_utility: normalize_zero(principal_utility),
            probability,
        }
    }

    /// Whether the agent utility is the "never chosen" sentinel.
    pub fn is_excluded(&self) -> bool {
        self.agent_utility == NEG_INF
    }
}

fn normalize_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// A single configuration: a nonempty list of atoms whose probabilities sum
/// to exactly one.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigDist {
    pub masses: Vec<PointMass>,
}

impl ConfigDist {
    pub fn new(masses: Vec<PointMass>) -> Self {
        ConfigDist { masses }
    }

    /// Total probability mass (should be exactly one for a valid config).
    pub fn total_probability(&self) -> Rational {
        self.masses
            .iter()
            .fold(Rational::zero(), |acc, m| acc + &m.probability)
    }

    /// True when every atom carries the [`NEG_INF`] sentinel, i.e. choosing
    /// this configuration removes the action from the agent's choice.
    pub fn is_excluded(&self) -> bool {
        self.masses.iter().all(PointMass::is_excluded)
    }

    /// Probability mass on the [`NEG_INF`] sentinel.
    pub fn excluded_mass(&self) -> Rational {
        self.masses
            .iter()
            .filter(|m| m.is_excluded())
            .fold(Rational::zero(), |acc, m| acc + &m.probability)
    }

    /// Expected principal utility of this distribution in isolation.
    pub fn expected_principal(&self) -> f64 {
        self.masses
            .iter()
            .map(|m| crate::rational::to_f64(&m.probability) * m.principal_utility)
            .sum()
    }
}

/// The configuration menu of one action.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionMenu {
    pub configs: Vec<ConfigDist>,
}

impl ActionMenu {
    pub fn new(configs: Vec<ConfigDist>) -> Self {
        ActionMenu { configs }
    }
}

/// A full problem instance: the actions with their menus.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub label: String,
    pub actions: Vec<ActionMenu>,
}

impl Instance {
    pub fn new(label: impl Into<String>, actions: Vec<ActionMenu>) -> Self {
        Instance {
            label: label.into(),
            actions,
        }
    }

    /// Number of actions.
    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    /// Largest configuration menu across actions.
    pub fn max_configs(&self) -> usize {
        self.actions
            .iter()
            .map(|a| a.configs.len())
            .max()
            .unwrap_or(0)
    }

    /// Total atom count across all configurations of all actions.
    pub fn num_atoms(&self) -> usize {
        self.actions
            .iter()
            .flat_map(|a| &a.configs)
            .map(|c| c.masses.len())
            .sum()
    }

    /// Iterates `(action index, config index, &ConfigDist)`.
    pub fn iter_configs(&self) -> impl Iterator<Item = (usize, usize, &ConfigDist)> {
        self.actions
            .iter()
            .enumerate()
            .flat_map(|(i, a)| a.configs.iter().enumerate().map(move |(j, c)| (i, j, c)))
    }
}

/// One configuration choice per action (0-based indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub choices: Vec<usize>,
}

impl Configuration {
    pub fn new(choices: Vec<usize>) -> Self {
        Configuration { choices }
    }

    /// The chosen distributions, or an error message if indices are bad.
    pub(crate) fn chosen<'a>(&self, instance: &'a Instance) -> Result<Vec<&'a ConfigDist>, String> {
        if self.choices.len() != instance.actions.len() {
            return Err(format!(
                "configuration has {} choices for {} actions",
                self.choices.len(),
                instance.actions.len()
            ));
        }
        self.choices
            .iter()
            .zip(instance.actions.iter())
            .enumerate()
            .map(|(i, (&c, action))| {
                action.configs.get(c).ok_or_else(|| {
                    format!(
                        "choice {c} for action {i} out of range ({} configs)",
                        action.configs.len()
                    )
                })
            })
            .collect()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.choices.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A single invariant violation, with a path to the offending field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Checks every instance invariant and returns all violations found.
///
/// Violations are data, not errors: an empty list means the instance is
/// well-formed.
pub fn validate(instance: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    if instance.actions.is_empty() {
        out.push(Violation {
            path: "actions".into(),
            message: "instance must have at least one action".into(),
        });
    }
    for (i, action) in instance.actions.iter().enumerate() {
        if action.configs.is_empty() {
            out.push(Violation {
                path: format!("actions[{i}].configs"),
                message: "action must have at least one configuration".into(),
            });
        }
        for (j, config) in action.configs.iter().enumerate() {
            let cpath = format!("actions[{i}].configs[{j}]");
            if config.masses.is_empty() {
                out.push(Violation {
                    path: format!("{cpath}.masses"),
                    message: "configuration must have at least one mass".into(),
                });
                continue;
            }
            for (k, mass) in config.masses.iter().enumerate() {
                let mpath = format!("{cpath}.masses[{k}]");
                if mass.probability <= Rational::zero() {
                    out.push(Violation {
                        path: format!("{mpath}.probability"),
                        message: format!("probability must be positive, got {}", mass.probability),
                    });
                }
                if mass.probability > Rational::one() {
                    out.push(Violation {
                        path: format!("{mpath}.probability"),
                        message: format!("probability must be at most 1, got {}", mass.probability),
                    });
                }
                if !(mass.principal_utility.is_finite() && mass.principal_utility >= 0.0) {
                    out.push(Violation {
                        path: format!("{mpath}.principal_utility"),
                        message: format!(
                            "principal utility must be finite and nonnegative, got {}",
                            mass.principal_utility
                        ),
                    });
                }
                if !(mass.agent_utility.is_finite() || mass.agent_utility == NEG_INF) {
                    out.push(Violation {
                        path: format!("{mpath}.agent_utility"),
                        message: format!(
                            "agent utility must be finite or -inf, got {}",
                            mass.agent_utility
                        ),
                    });
                }
            }
            let total = config.total_probability();
            if !total.is_one() {
                out.push(Violation {
                    path: cpath,
                    message: format!("probabilities sum to {total}, expected 1"),
                });
            }
        }
    }
    out
}

/// Validates and converts the violation list into an error.
pub(crate) fn require_valid(instance: &Instance) -> crate::Result<()> {
    let violations = validate(instance);
    if violations.is_empty() {
        Ok(())
    } else {
        let mut msg = violations
            .iter()
            .take(3)
            .map(Violation::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        if violations.len() > 3 {
            msg.push_str(&format!(" (+{} more)", violations.len() - 3));
        }
        Err(crate::Error::InvalidInstance(msg))
    }
}
