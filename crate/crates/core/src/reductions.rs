//! Translations of source problems into utility-configuration instances.
//!
//! Three problem families reduce to the same template:
//!
//! * **Delegated choice** — each action is either offered ("in") or withheld
//!   ("out"). In: agent gets value plus bias, principal gets the value.
//!   Out: the sentinel.
//! * **Unit-demand pricing** — each allowed price of an item is one
//!   configuration; buying at price `p` with value `v >= p` gives the buyer
//!   `v - p` and the seller `p`; values below the price pool into a single
//!   zero-utility atom. A "don't sell" configuration is always appended.
//! * **Assortment** — stocking decisions for fixed-price items with a
//!   no-purchase option; rewritten as delegation with constant value `p_i`,
//!   random bias `v_i - 2 p_i`, and the no-purchase utility as an outside
//!   option, which is then absorbed into the principal utilities.
//!
//! An agent outside option the principal cannot remove is handled by
//! rescaling principal utilities: an atom with agent utility `u` keeps
//! `Pr[outside <= u]` of its principal value, because that is the chance the
//! agent does not defect. Equality stays in-set.

use num_traits::{One, Zero};
use std::collections::HashMap;

use crate::instance::{ActionMenu, ConfigDist, Instance, PointMass, NEG_INF};
use crate::rational::{to_f64, Rational};
use crate::{Error, Result};

/// A finite distribution given as `(value, probability)` support points.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDist {
    pub support: Vec<(f64, Rational)>,
}

impl DiscreteDist {
    pub fn new(support: Vec<(f64, Rational)>) -> Self {
        DiscreteDist { support }
    }

    pub fn constant(value: f64) -> Self {
        DiscreteDist {
            support: vec![(value, Rational::one())],
        }
    }

    fn check(&self, what: &str, nonnegative: bool) -> Result<()> {
        if self.support.is_empty() {
            return Err(Error::BadSpec(format!("{what} has empty support")));
        }
        let mut total = Rational::zero();
        for &(v, ref p) in &self.support {
            if !v.is_finite() {
                return Err(Error::BadSpec(format!("{what} has non-finite value {v}")));
            }
            if nonnegative && v < 0.0 {
                return Err(Error::BadSpec(format!("{what} has negative value {v}")));
            }
            if *p <= Rational::zero() {
                return Err(Error::BadSpec(format!(
                    "{what} has non-positive probability"
                )));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(Error::BadSpec(format!(
                "{what} probabilities sum to {total}"
            )));
        }
        Ok(())
    }

    /// Exact `Pr[X <= x]`.
    pub fn cdf(&self, x: f64) -> Rational {
        self.support
            .iter()
            .filter(|(v, _)| *v <= x)
            .fold(Rational::zero(), |acc, (_, p)| acc + p)
    }
}

/// Bias of a delegation action: a known constant or an independent
/// distribution.
#[derive(Clone, Debug, PartialEq)]
pub enum Bias {
    Constant(f64),
    Random(DiscreteDist),
}

impl Bias {
    fn support(&self) -> Vec<(f64, Rational)> {
        match self {
            Bias::Constant(b) => vec![(*b, Rational::one())],
            Bias::Random(d) => d.support.clone(),
        }
    }

    fn check(&self, what: &str) -> Result<()> {
        match self {
            Bias::Constant(b) if b.is_finite() => Ok(()),
            Bias::Constant(b) => Err(Error::BadSpec(format!("{what} bias {b} is not finite"))),
            Bias::Random(d) => d.check(what, false),
        }
    }
}

/// One delegation action: nonnegative random value, constant or random bias.
#[derive(Clone, Debug, PartialEq)]
pub struct DelegationAction {
    pub bias: Bias,
    pub values: DiscreteDist,
}

/// Delegated choice: the principal offers a subset of actions; the agent
/// takes the offered action maximizing value plus bias, or the outside
/// option (worth nothing to the principal) when present and better.
#[derive(Clone, Debug, PartialEq)]
pub struct DelegationInstance {
    pub actions: Vec<DelegationAction>,
    /// Agent utility of the outside option; `Some` means the agent has an
    /// alternative the principal cannot remove.
    pub outside_bias: Option<DiscreteDist>,
}

impl DelegationInstance {
    fn check(&self) -> Result<()> {
        if self.actions.is_empty() {
            return Err(Error::BadSpec("delegation instance has no actions".into()));
        }
        for (i, a) in self.actions.iter().enumerate() {
            a.bias.check(&format!("action {i}"))?;
            a.values.check(&format!("action {i} values"), true)?;
        }
        if let Some(outside) = &self.outside_bias {
            outside.check("outside option", false)?;
        }
        Ok(())
    }
}

/// Unit-demand pricing: per item, a value distribution and the prices the
/// seller may post.
#[derive(Clone, Debug, PartialEq)]
pub struct PricingInstance {
    pub items: Vec<PricingItem>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PricingItem {
    pub values: DiscreteDist,
    pub prices: PriceSet,
}

/// Allowed prices: an explicit list, or a multiplicative grid request.
#[derive(Clone, Debug, PartialEq)]
pub enum PriceSet {
    Explicit(Vec<f64>),
    Grid { u_min: f64, u_max: f64, eps: f64 },
}

/// Assortment optimization: fixed-price items to stock for a buyer with a
/// random no-purchase utility.
#[derive(Clone, Debug, PartialEq)]
pub struct AssortmentInstance {
    pub items: Vec<AssortmentItem>,
    pub outside_utility: DiscreteDist,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssortmentItem {
    pub price: f64,
    pub values: DiscreteDist,
}

impl AssortmentInstance {
    fn check(&self) -> Result<()> {
        if self.items.is_empty() {
            return Err(Error::BadSpec("assortment instance has no items".into()));
        }
        for (i, item) in self.items.iter().enumerate() {
            if !(item.price.is_finite() && item.price >= 0.0) {
                return Err(Error::BadSpec(format!(
                    "item {i} price must be finite and nonnegative, got {}",
                    item.price
                )));
            }
            item.values.check(&format!("item {i} values"), true)?;
        }
        self.outside_utility.check("outside utility", false)
    }
}

/// Accumulates atoms, merging equal (agent, principal) pairs by adding
/// probability. Keeps first-seen order for reproducible output.
struct AtomMerger {
    order: Vec<(u64, u64)>,
    atoms: HashMap<(u64, u64), (f64, f64, Rational)>,
}

impl AtomMerger {
    fn new() -> Self {
        AtomMerger {
            order: Vec::new(),
            atoms: HashMap::new(),
        }
    }

    fn push(&mut self, agent: f64, principal: f64, p: Rational) {
        let agent = if agent == 0.0 { 0.0 } else { agent };
        let principal = if principal == 0.0 { 0.0 } else { principal };
        let key = (agent.to_bits(), principal.to_bits());
        match self.atoms.get_mut(&key) {
            Some(entry) => entry.2 += p,
            None => {
                self.order.push(key);
                self.atoms.insert(key, (agent, principal, p));
            }
        }
    }

    fn into_config(mut self) -> ConfigDist {
        ConfigDist::new(
            self.order
                .iter()
                .map(|key| {
                    let (a, up, p) = self.atoms.remove(key).unwrap();
                    PointMass::new(a, up, p)
                })
                .collect(),
        )
    }
}

fn excluded_config() -> ConfigDist {
    ConfigDist::new(vec![PointMass::new(NEG_INF, 0.0, Rational::one())])
}

/// Reduces delegation without an outside option. Configuration 0 of each
/// action is "in", configuration 1 is "out"; delegation sets correspond to
/// configurations one-to-one, with equal expected principal utility.
pub fn delegation_to_uc(d: &DelegationInstance) -> Result<Instance> {
    if d.outside_bias.is_some() {
        return Err(Error::HasOutsideOption);
    }
    d.check()?;
    let actions = d
        .actions
        .iter()
        .map(|action| {
            let mut merger = AtomMerger::new();
            for (v, pv) in &action.values.support {
                for (b, pb) in action.bias.support() {
                    merger.push(*v + b, *v, pv * &pb);
                }
            }
            ActionMenu::new(vec![merger.into_config(), excluded_config()])
        })
        .collect();
    Ok(Instance::new("delegation", actions))
}

/// Reduces delegation with an outside option by folding the option into the
/// principal utilities: an in-atom with agent utility `u` keeps its value
/// scaled by `Pr[outside <= u]` (the agent stays in-set on equality).
pub fn outside_option_transform(d: &DelegationInstance) -> Result<Instance> {
    let Some(outside) = &d.outside_bias else {
        return Err(Error::NoOutsideOption);
    };
    d.check()?;
    let actions = d
        .actions
        .iter()
        .map(|action| {
            let mut merger = AtomMerger::new();
            for (v, pv) in &action.values.support {
                for (b, pb) in action.bias.support() {
                    let agent = *v + b;
                    let keep = to_f64(&outside.cdf(agent));
                    merger.push(agent, *v * keep, pv * &pb);
                }
            }
            ActionMenu::new(vec![merger.into_config(), excluded_config()])
        })
        .collect();
    Ok(Instance::new("delegation-outside", actions))
}

/// Reduces unit-demand pricing. Per item, configuration `l` posts the
/// `l`-th allowed price; the final configuration is "don't sell". Values
/// below the posted price pool into one `(0, 0)` atom, and the
/// principal-favoring tie rule resolves zero-utility ties toward a purchase.
pub fn pricing_to_uc(pr: &PricingInstance) -> Result<Instance> {
    if pr.items.is_empty() {
        return Err(Error::BadSpec("pricing instance has no items".into()));
    }
    let mut actions = Vec::with_capacity(pr.items.len());
    for (i, item) in pr.items.iter().enumerate() {
        item.values.check(&format!("item {i} values"), true)?;
        let prices = match &item.prices {
            PriceSet::Explicit(list) => {
                if list.is_empty() {
                    return Err(Error::EmptyPriceSet { item: i });
                }
                if let Some(bad) = list.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
                    return Err(Error::BadSpec(format!("item {i} has invalid price {bad}")));
                }
                list.clone()
            }
            PriceSet::Grid { u_min, u_max, eps } => {
                let grid = price_grid(*u_min, *u_max, *eps)?;
                if grid.is_empty() {
                    return Err(Error::EmptyPriceSet { item: i });
                }
                grid
            }
        };
        let mut configs: Vec<ConfigDist> = prices
            .iter()
            .map(|&price| {
                let mut merger = AtomMerger::new();
                let mut no_buy = Rational::zero();
                for (v, pv) in &item.values.support {
                    if *v >= price {
                        merger.push(*v - price, price, pv.clone());
                    } else {
                        no_buy += pv;
                    }
                }
                if !no_buy.is_zero() {
                    merger.push(0.0, 0.0, no_buy);
                }
                merger.into_config()
            })
            .collect();
        configs.push(excluded_config());
        actions.push(ActionMenu::new(configs));
    }
    Ok(Instance::new("pricing", actions))
}

/// Multiplicative price grid covering `[u_min, u_max]`:
/// `p_i = (1 + eps^2 - eps) / (1 - eps^2)^i * u_min` for
/// `i = 0..=floor(log_{1/(1-eps^2)}(u_max / u_min))`.
///
/// For every `p` in the range, some grid price lies within
/// `[1 - eps, 1 + eps^2 - eps] * p`: the anchor `p_0` sits exactly at the
/// top of `u_min`'s window and consecutive prices grow by `1/(1-eps^2)`,
/// which is smaller than the window width `(1+eps^2-eps)/(1-eps)`.
pub fn price_grid(u_min: f64, u_max: f64, eps: f64) -> Result<Vec<f64>> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::BadEpsilon(eps));
    }
    if !(u_min > 0.0 && u_min.is_finite() && u_max >= u_min && u_max.is_finite()) {
        return Err(Error::BadRange { u_min, u_max });
    }
    let growth = 1.0 / (1.0 - eps * eps);
    let ratio = u_max / u_min;
    // floor of log_growth(ratio), robust to round-off at exact powers.
    let mut steps = (ratio.ln() / growth.ln()).floor().max(0.0) as u32;
    while growth.powi(steps as i32 + 1) <= ratio * (1.0 + 1e-12) {
        steps += 1;
    }
    while steps > 0 && growth.powi(steps as i32) > ratio * (1.0 + 1e-12) {
        steps -= 1;
    }
    let anchor = (1.0 + eps * eps - eps) * u_min;
    Ok((0..=steps)
        .map(|i| anchor * growth.powi(i as i32))
        .collect())
}

/// Reduces assortment optimization: item `i` becomes a delegation action
/// with constant value `p_i` and bias distributed as `v_i - 2 p_i`, and the
/// no-purchase utility becomes the outside option, which
/// [`outside_option_transform`] then absorbs. Configuration 0 stocks the
/// item, configuration 1 does not.
pub fn assortment_to_uc(a: &AssortmentInstance) -> Result<Instance> {
    a.check()?;
    let delegation = DelegationInstance {
        actions: a
            .items
            .iter()
            .map(|item| DelegationAction {
                bias: Bias::Random(DiscreteDist::new(
                    item.values
                        .support
                        .iter()
                        .map(|(v, p)| (*v - 2.0 * item.price, p.clone()))
                        .collect(),
                )),
                values: DiscreteDist::constant(item.price),
            })
            .collect(),
        outside_bias: Some(a.outside_utility.clone()),
    };
    let mut instance = outside_option_transform(&delegation)?;
    instance.label = "assortment".into();
    Ok(instance)
}
