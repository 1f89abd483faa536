//! JSON interchange formats.
//!
//! Canonical instance schema:
//!
//! ```json
//! {"label": "x", "actions": [{"configs": [{"masses": [
//!     {"ua": 1.5, "up": 2.0, "p": "1/3"},
//!     {"ua": "-inf", "up": 0.0, "p": "2/3"}
//! ]}]}]}
//! ```
//!
//! Probabilities are exact rational strings `"num/den"`, or JSON numbers
//! taken at their exact binary value (so `0.25` is `1/4`, while `0.1` is the
//! nearest dyadic and will fail the sum-to-one check in a config that
//! expects exactly `1/10`). Agent utilities are numbers or the string
//! `"-inf"`. Parsing validates the full instance and rejects configurations
//! whose probabilities do not sum to one.
//!
//! Source problems use the same conventions; distributions are arrays of
//! `[value, probability]` pairs.

use serde::{Deserialize, Serialize};

use crate::instance::{ActionMenu, ConfigDist, Instance, PointMass, NEG_INF};
use crate::rational::{self, Rational};
use crate::reductions::{
    AssortmentInstance, AssortmentItem, Bias, DelegationAction, DelegationInstance, DiscreteDist,
    PriceSet, PricingInstance, PricingItem,
};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct WireInstance {
    label: String,
    actions: Vec<WireAction>,
}

#[derive(Serialize, Deserialize)]
struct WireAction {
    configs: Vec<WireConfig>,
}

#[derive(Serialize, Deserialize)]
struct WireConfig {
    masses: Vec<WireMass>,
}

#[derive(Serialize, Deserialize)]
struct WireMass {
    ua: WireUtility,
    up: f64,
    p: WireProb,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireUtility {
    Number(f64),
    Tag(String),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireProb {
    Text(String),
    Number(f64),
}

fn parse_probability(p: &WireProb, at: &str) -> Result<Rational> {
    match p {
        WireProb::Text(s) => rational::parse(s)
            .ok_or_else(|| Error::InvalidInstance(format!("{at}: bad rational {s:?}"))),
        WireProb::Number(x) => rational::from_f64(*x)
            .ok_or_else(|| Error::InvalidInstance(format!("{at}: bad probability {x}"))),
    }
}

fn parse_agent_utility(u: &WireUtility, at: &str) -> Result<f64> {
    match u {
        WireUtility::Number(x) => Ok(*x),
        WireUtility::Tag(s) if s == "-inf" => Ok(NEG_INF),
        WireUtility::Tag(s) => Err(Error::InvalidInstance(format!(
            "{at}: unknown agent utility {s:?} (only \"-inf\" is allowed)"
        ))),
    }
}

/// Parses and validates an instance from canonical JSON.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    let instance = instance_from_json_unvalidated(text)?;
    crate::instance::require_valid(&instance)?;
    Ok(instance)
}

/// Parses the canonical JSON structure without checking instance
/// invariants, so callers can report the full violation list themselves.
pub fn instance_from_json_unvalidated(text: &str) -> Result<Instance> {
    let wire: WireInstance =
        serde_json::from_str(text).map_err(|e| Error::InvalidInstance(format!("json: {e}")))?;
    let mut actions = Vec::with_capacity(wire.actions.len());
    for (i, action) in wire.actions.iter().enumerate() {
        let mut configs = Vec::with_capacity(action.configs.len());
        for (j, config) in action.configs.iter().enumerate() {
            let mut masses = Vec::with_capacity(config.masses.len());
            for (k, mass) in config.masses.iter().enumerate() {
                let at = format!("actions[{i}].configs[{j}].masses[{k}]");
                masses.push(PointMass::new(
                    parse_agent_utility(&mass.ua, &at)?,
                    mass.up,
                    parse_probability(&mass.p, &at)?,
                ));
            }
            configs.push(ConfigDist::new(masses));
        }
        actions.push(ActionMenu::new(configs));
    }
    Ok(Instance::new(wire.label, actions))
}

/// Serializes an instance to canonical JSON (probabilities as `"num/den"`).
pub fn instance_to_json(instance: &Instance) -> String {
    let wire = WireInstance {
        label: instance.label.clone(),
        actions: instance
            .actions
            .iter()
            .map(|a| WireAction {
                configs: a
                    .configs
                    .iter()
                    .map(|c| WireConfig {
                        masses: c
                            .masses
                            .iter()
                            .map(|m| WireMass {
                                ua: if m.is_excluded() {
                                    WireUtility::Tag("-inf".into())
                                } else {
                                    WireUtility::Number(m.agent_utility)
                                },
                                up: m.principal_utility,
                                p: WireProb::Text(rational::render(&m.probability)),
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&wire).expect("instance serialization cannot fail")
}

type WirePair = (f64, WireProb);

fn parse_dist(pairs: &[WirePair], at: &str) -> Result<DiscreteDist> {
    let support = pairs
        .iter()
        .map(|(v, p)| Ok((*v, parse_probability(p, at)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscreteDist::new(support))
}

fn render_dist(dist: &DiscreteDist) -> Vec<WirePair> {
    dist.support
        .iter()
        .map(|(v, p)| (*v, WireProb::Text(rational::render(p))))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct WireDelegation {
    actions: Vec<WireDelegationAction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    outside_bias: Option<Vec<WirePair>>,
}

#[derive(Serialize, Deserialize)]
struct WireDelegationAction {
    bias: WireBias,
    values: Vec<WirePair>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireBias {
    Constant(f64),
    Random(Vec<WirePair>),
}

/// Parses a delegation instance from JSON.
pub fn delegation_from_json(text: &str) -> Result<DelegationInstance> {
    let wire: WireDelegation =
        serde_json::from_str(text).map_err(|e| Error::BadSpec(format!("delegation json: {e}")))?;
    let actions = wire
        .actions
        .iter()
        .enumerate()
        .map(|(i, a)| {
            Ok(DelegationAction {
                bias: match &a.bias {
                    WireBias::Constant(b) => Bias::Constant(*b),
                    WireBias::Random(pairs) => {
                        Bias::Random(parse_dist(pairs, &format!("actions[{i}].bias"))?)
                    }
                },
                values: parse_dist(&a.values, &format!("actions[{i}].values"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let outside_bias = wire
        .outside_bias
        .as_ref()
        .map(|pairs| parse_dist(pairs, "outside_bias"))
        .transpose()?;
    Ok(DelegationInstance {
        actions,
        outside_bias,
    })
}

/// Serializes a delegation instance to JSON.
pub fn delegation_to_json(d: &DelegationInstance) -> String {
    let wire = WireDelegation {
        actions: d
            .actions
            .iter()
            .map(|a| WireDelegationAction {
                bias: match &a.bias {
                    Bias::Constant(b) => WireBias::Constant(*b),
                    Bias::Random(dist) => WireBias::Random(render_dist(dist)),
                },
                values: render_dist(&a.values),
            })
            .collect(),
        outside_bias: d.outside_bias.as_ref().map(render_dist),
    };
    serde_json::to_string_pretty(&wire).expect("serialization cannot fail")
}

#[derive(Serialize, Deserialize)]
struct WirePricing {
    items: Vec<WirePricingItem>,
}

#[derive(Serialize, Deserialize)]
struct WirePricingItem {
    values: Vec<WirePair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prices: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<WireGrid>,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
struct WireGrid {
    u_min: f64,
    u_max: f64,
    eps: f64,
}

/// Parses a pricing instance from JSON. Each item carries either explicit
/// `prices` or a `grid` request.
pub fn pricing_from_json(text: &str) -> Result<PricingInstance> {
    let wire: WirePricing =
        serde_json::from_str(text).map_err(|e| Error::BadSpec(format!("pricing json: {e}")))?;
    let items = wire
        .items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let prices = match (&item.prices, item.grid) {
                (Some(list), None) => PriceSet::Explicit(list.clone()),
                (None, Some(g)) => PriceSet::Grid {
                    u_min: g.u_min,
                    u_max: g.u_max,
                    eps: g.eps,
                },
                _ => {
                    return Err(Error::BadSpec(format!(
                        "item {i} must have exactly one of `prices` or `grid`"
                    )))
                }
            };
            Ok(PricingItem {
                values: parse_dist(&item.values, &format!("items[{i}].values"))?,
                prices,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PricingInstance { items })
}

/// Serializes a pricing instance to JSON.
pub fn pricing_to_json(pr: &PricingInstance) -> String {
    let wire = WirePricing {
        items: pr
            .items
            .iter()
            .map(|item| {
                let (prices, grid) = match &item.prices {
                    PriceSet::Explicit(list) => (Some(list.clone()), None),
                    PriceSet::Grid { u_min, u_max, eps } => (
                        None,
                        Some(WireGrid {
                            u_min: *u_min,
                            u_max: *u_max,
                            eps: *eps,
                        }),
                    ),
                };
                WirePricingItem {
                    values: render_dist(&item.values),
                    prices,
                    grid,
                }
            })
            .collect(),
    };
    serde_json::to_string_pretty(&wire).expect("serialization cannot fail")
}

#[derive(Serialize, Deserialize)]
struct WireAssortment {
    items: Vec<WireAssortmentItem>,
    outside: Vec<WirePair>,
}

#[derive(Serialize, Deserialize)]
struct WireAssortmentItem {
    price: f64,
    values: Vec<WirePair>,
}

/// Parses an assortment instance from JSON.
pub fn assortment_from_json(text: &str) -> Result<AssortmentInstance> {
    let wire: WireAssortment =
        serde_json::from_str(text).map_err(|e| Error::BadSpec(format!("assortment json: {e}")))?;
    let items = wire
        .items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            Ok(AssortmentItem {
                price: item.price,
                values: parse_dist(&item.values, &format!("items[{i}].values"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AssortmentInstance {
        items,
        outside_utility: parse_dist(&wire.outside, "outside")?,
    })
}

/// Serializes an assortment instance to JSON.
pub fn assortment_to_json(a: &AssortmentInstance) -> String {
    let wire = WireAssortment {
        items: a
            .items
            .iter()
            .map(|item| WireAssortmentItem {
                price: item.price,
                values: render_dist(&item.values),
            })
            .collect(),
        outside: render_dist(&a.outside_utility),
    };
    serde_json::to_string_pretty(&wire).expect("serialization cannot fail")
}
