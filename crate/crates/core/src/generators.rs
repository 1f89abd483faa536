//! Seeded instance factories: random instances per problem family, the
//! two-action worst-case alignment gadget, and the integer-partition
//! assortment gadget.
//!
//! All generators are pure functions of their parameters; the same seed
//! always produces the same instance. Random utilities land on a coarse
//! dyadic lattice so that cross-action ties actually occur and affine
//! transformations of utilities stay exact in floating point.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::instance::{ActionMenu, ConfigDist, Instance, PointMass};
use crate::rational::{ratio_u, Rational};
use crate::reductions::{
    AssortmentInstance, AssortmentItem, Bias, DelegationAction, DelegationInstance, DiscreteDist,
    PriceSet, PricingInstance, PricingItem,
};
use crate::{Error, Result};

/// Problem family to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    GenericUc,
    Delegation,
    DelegationRandomBias,
    DelegationOutside,
    Pricing,
    Assortment,
}

/// Parameters of [`random_instance`].
#[derive(Clone, Debug)]
pub struct RandomSpec {
    /// Actions (or items).
    pub n: usize,
    /// Configurations per action; for pricing this counts the posted-price
    /// configurations plus the always-present "don't sell".
    pub m: usize,
    /// Support points per distribution.
    pub k: usize,
    /// Agent utilities (and biases) are drawn from this range.
    pub utility_range: (f64, f64),
    /// Probabilities are multiples of `1/probability_grid`; must be >= k.
    pub probability_grid: u32,
    pub family: Family,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        RandomSpec {
            n: 3,
            m: 2,
            k: 2,
            utility_range: (0.0, 8.0),
            probability_grid: 12,
            family,
            seed,
        }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 || self.k == 0 {
            return Err(Error::BadSpec("n, m, k must all be at least 1".into()));
        }
        if (self.probability_grid as usize) < self.k {
            return Err(Error::BadSpec(format!(
                "probability grid {} is finer than the support size {}",
                self.probability_grid, self.k
            )));
        }
        let (lo, hi) = self.utility_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::BadSpec(format!("bad utility range ({lo}, {hi})")));
        }
        Ok(())
    }
}

/// A generated instance in its native form.
#[derive(Clone, Debug)]
pub enum Generated {
    Uc(Instance),
    Delegation(DelegationInstance),
    Pricing(PricingInstance),
    Assortment(AssortmentInstance),
}

/// Steps of the dyadic utility lattice within the configured range.
const LATTICE_STEPS: u32 = 16;

struct Draw {
    rng: ChaCha8Rng,
}

impl Draw {
    fn new(seed: u64) -> Self {
        Draw {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A lattice point in `[lo, hi]`.
    fn utility(&mut self, lo: f64, hi: f64) -> f64 {
        let step = (hi - lo) / LATTICE_STEPS as f64;
        lo + step * self.rng.gen_range(0..=LATTICE_STEPS) as f64
    }

    /// A nonnegative lattice point in `[0, hi]`.
    fn value(&mut self, hi: f64) -> f64 {
        self.utility(0.0, hi)
    }

    /// `k` positive rationals on the `1/grid` lattice summing to one:
    /// a uniform composition of `grid` into `k` parts.
    fn probabilities(&mut self, k: usize, grid: u32) -> Vec<Rational> {
        if k == 1 {
            return vec![Rational::one()];
        }
        let mut cuts = Vec::with_capacity(k - 1);
        while cuts.len() < k - 1 {
            let c = self.rng.gen_range(1..grid);
            if !cuts.contains(&c) {
                cuts.push(c);
            }
        }
        cuts.sort_unstable();
        let mut parts = Vec::with_capacity(k);
        let mut prev = 0u32;
        for &c in &cuts {
            parts.push(ratio_u((c - prev) as u64, grid as u64));
            prev = c;
        }
        parts.push(ratio_u((grid - prev) as u64, grid as u64));
        parts
    }

    /// A `k`-point distribution with distinct lattice values in `[lo, hi]`.
    fn dist(&mut self, k: usize, grid: u32, lo: f64, hi: f64) -> DiscreteDist {
        let probs = self.probabilities(k, grid);
        let mut values = Vec::with_capacity(k);
        while values.len() < k {
            let v = self.utility(lo, hi);
            if !values.contains(&v) {
                values.push(v);
            }
        }
        DiscreteDist::new(values.into_iter().zip(probs).collect())
    }
}

/// Draws one instance of the requested family. Deterministic per seed;
/// problem families come back in native form (reduce separately).
pub fn random_instance(spec: &RandomSpec) -> Result<Generated> {
    spec.check()?;
    let mut draw = Draw::new(spec.seed);
    let (lo, hi) = spec.utility_range;
    let principal_hi = hi.abs().max(1.0);
    let grid = spec.probability_grid;

    let generated = match spec.family {
        Family::GenericUc => {
            let actions = (0..spec.n)
                .map(|_| {
                    let configs = (0..spec.m)
                        .map(|_| {
                            let probs = draw.probabilities(spec.k, grid);
                            ConfigDist::new(
                                probs
                                    .into_iter()
                                    .map(|p| {
                                        PointMass::new(
                                            draw.utility(lo, hi),
                                            draw.value(principal_hi),
                                            p,
                                        )
                                    })
                                    .collect(),
                            )
                        })
                        .collect();
                    ActionMenu::new(configs)
                })
                .collect();
            Generated::Uc(Instance::new(format!("generic-{}", spec.seed), actions))
        }
        Family::Delegation => Generated::Delegation(DelegationInstance {
            actions: (0..spec.n)
                .map(|_| DelegationAction {
                    bias: Bias::Constant(draw.utility(lo, hi)),
                    values: draw.dist(spec.k, grid, 0.0, principal_hi),
                })
                .collect(),
            outside_bias: None,
        }),
        Family::DelegationRandomBias => Generated::Delegation(DelegationInstance {
            actions: (0..spec.n)
                .map(|_| DelegationAction {
                    bias: Bias::Random(draw.dist(spec.k.min(3), grid, lo, hi)),
                    values: draw.dist(spec.k, grid, 0.0, principal_hi),
                })
                .collect(),
            outside_bias: None,
        }),
        Family::DelegationOutside => {
            let actions = (0..spec.n)
                .map(|_| DelegationAction {
                    bias: Bias::Random(draw.dist(spec.k.min(3), grid, lo, hi)),
                    values: draw.dist(spec.k, grid, 0.0, principal_hi),
                })
                .collect();
            // Outside support overlaps the agent-utility range so defection
            // is possible but not certain.
            let outside = draw.dist(spec.k.min(3), grid, lo, hi + principal_hi);
            Generated::Delegation(DelegationInstance {
                actions,
                outside_bias: Some(outside),
            })
        }
        Family::Pricing => Generated::Pricing(PricingInstance {
            items: (0..spec.n)
                .map(|_| {
                    let values = draw.dist(spec.k, grid, 0.0, principal_hi);
                    let prices =
                        draw_prices(&mut draw, spec.m.saturating_sub(1).max(1), principal_hi);
                    PricingItem {
                        values,
                        prices: PriceSet::Explicit(prices),
                    }
                })
                .collect(),
        }),
        Family::Assortment => Generated::Assortment(AssortmentInstance {
            items: (0..spec.n)
                .map(|_| AssortmentItem {
                    price: positive_lattice(&mut draw, principal_hi),
                    values: draw.dist(spec.k, grid, 0.0, principal_hi),
                })
                .collect(),
            outside_utility: draw.dist(spec.k.min(3), grid, 0.0, principal_hi / 2.0),
        }),
    };
    Ok(generated)
}

/// Distinct positive posted prices within the value range.
fn draw_prices(draw: &mut Draw, count: usize, hi: f64) -> Vec<f64> {
    let mut prices = Vec::with_capacity(count);
    while prices.len() < count {
        let p = positive_lattice(draw, hi);
        if !prices.contains(&p) {
            prices.push(p);
        }
    }
    prices
}

fn positive_lattice(draw: &mut Draw, hi: f64) -> f64 {
    let step = hi / LATTICE_STEPS as f64;
    step * draw.rng.gen_range(1..=LATTICE_STEPS) as f64
}

/// The two-action delegation instance whose optimal alignment ratio
/// approaches 2 as `T` grows: a safe action with a large bias and a
/// lottery-like action with no bias.
pub fn tightness_instance(t: u32) -> Result<DelegationInstance> {
    if t < 3 {
        return Err(Error::TTooSmall(t));
    }
    let tf = t as f64;
    Ok(DelegationInstance {
        actions: vec![
            DelegationAction {
                bias: Bias::Constant(tf - 1.0 + 1.0 / tf),
                values: DiscreteDist::new(vec![
                    (1.0, ratio_u(t as u64 - 1, t as u64)),
                    (1.0 - 2.0 / tf, ratio_u(1, t as u64)),
                ]),
            },
            DelegationAction {
                bias: Bias::Constant(0.0),
                values: DiscreteDist::new(vec![
                    (tf, ratio_u(1, t as u64)),
                    (0.0, ratio_u(t as u64 - 1, t as u64)),
                ]),
            },
        ],
        outside_bias: None,
    })
}

/// Expected principal utility of the full tightness instance in closed form:
/// `1 + (1 - 1/T)(1 - 2/T)/T`.
pub fn tightness_optimal_value(t: u32) -> f64 {
    let tf = t as f64;
    1.0 + (1.0 - 1.0 / tf) * (1.0 - 2.0 / tf) / tf
}

/// Worst alignment ratio of the tightness instance in closed form:
/// `(1 + (1 - 1/T)(1 - 2/T)) / (1 + (1 - 1/T)(1 - 2/T)/T)`.
pub fn tightness_worst_ratio(t: u32) -> f64 {
    let tf = t as f64;
    let s = (1.0 - 1.0 / tf) * (1.0 - 2.0 / tf);
    (1.0 + s) / (1.0 + s / tf)
}

/// Integer-partition gadget: assortment instance plus the delegation
/// counterpart with pairwise-matching principal utilities.
#[derive(Clone, Debug)]
pub struct PartitionGadget {
    pub assortment: AssortmentInstance,
    pub delegation: DelegationInstance,
    /// Gadget scale `G = 128 n^3 c_max^3`.
    pub scale: u64,
    /// Tie-breaking offset applied to utilities.
    pub delta: f64,
}

/// Builds the gadget for integers `c`, scaled by `G = 128 n^3 c_max^3`.
///
/// `delta` orders otherwise-tied agent utilities; any value in `(0, 1/4)`
/// preserves the intended preference order. The default is large enough to
/// survive rounding at the gadget's utility magnitude (about `G^2`), where a
/// perturbation much below one unit in the last place would vanish.
pub fn partition_gadget(c: &[u64], delta: Option<f64>) -> Result<PartitionGadget> {
    if c.is_empty() || c.contains(&0) {
        return Err(Error::BadIntegers(format!("{c:?}")));
    }
    let n = c.len() as u64;
    let c_max = *c.iter().max().unwrap();
    let scale = n
        .checked_pow(3)
        .and_then(|n3| c_max.checked_pow(3).and_then(|c3| n3.checked_mul(c3)))
        .and_then(|p| p.checked_mul(128))
        .ok_or_else(|| Error::BadIntegers(format!("{c:?} overflows the gadget scale")))?;
    let total: u64 = c.iter().sum();

    // High bias B = G^2 (1 - C / 2G) = G^2 - C G / 2, exact in rationals.
    let g = Rational::from_integer(BigInt::from(scale));
    let big_bias = &g * &g * (Rational::one() - ratio_u(total, 2 * scale));
    let big_bias_f = crate::rational::to_f64(&big_bias);

    let delta = match delta {
        Some(d) if d > 0.0 && d < 0.25 => d,
        Some(d) => {
            return Err(Error::BadSpec(format!(
                "delta must lie in (0, 1/4), got {d}"
            )))
        }
        None => default_gadget_delta(scale, big_bias_f),
    };

    // Per-item branch probabilities: q_hi = c_i/G - c_i^2 / (2 G^4 (1 - C/2G)),
    // q_lo = c_i/G, remainder on zero.
    let correction_denom = {
        let g4 = &g * &g * &g * &g;
        g4 * (Rational::one() - ratio_u(total, 2 * scale)) * Rational::from_integer(BigInt::from(2))
    };
    let mut items = Vec::with_capacity(c.len() + 1);
    let mut delegation_actions = Vec::with_capacity(c.len() + 1);
    for &ci in c {
        let q_lo = ratio_u(ci, scale);
        let q_hi = &q_lo - Rational::from_integer(BigInt::from(ci * ci)) / correction_denom.clone();
        let q_zero = Rational::one() - &q_hi - &q_lo;
        if q_hi <= Rational::zero() || q_zero <= Rational::zero() {
            return Err(Error::BadIntegers(format!(
                "integers {c:?} make a degenerate gadget"
            )));
        }
        items.push(AssortmentItem {
            price: 1.0,
            values: DiscreteDist::new(vec![
                (2.0 + delta, q_hi.clone()),
                (2.0 - delta, q_lo.clone()),
                (0.0, q_zero.clone()),
            ]),
        });
        delegation_actions.push(DelegationAction {
            bias: Bias::Constant(big_bias_f),
            values: DiscreteDist::new(vec![(1.0 + 2.0 * delta, q_hi), (1.0, q_lo), (0.0, q_zero)]),
        });
    }
    // The large item: price B + 1 + delta, value B + 2 + delta or nothing.
    let half = ratio_u(1, 2);
    items.push(AssortmentItem {
        price: big_bias_f + 1.0 + delta,
        values: DiscreteDist::new(vec![
            (big_bias_f + 2.0 + delta, half.clone()),
            (0.0, half.clone()),
        ]),
    });
    delegation_actions.push(DelegationAction {
        bias: Bias::Constant(0.0),
        values: DiscreteDist::new(vec![(big_bias_f + 1.0 + delta, half.clone()), (0.0, half)]),
    });

    Ok(PartitionGadget {
        assortment: AssortmentInstance {
            items,
            outside_utility: DiscreteDist::constant(0.0),
        },
        delegation: DelegationInstance {
            actions: delegation_actions,
            outside_bias: None,
        },
        scale,
        delta,
    })
}

/// Smallest power of two at least `128` units in the last place at the
/// gadget's agent-utility magnitude, so perturbed utilities stay distinct
/// after rounding to `f64`.
fn default_gadget_delta(scale: u64, big_bias: f64) -> f64 {
    let magnitude = big_bias.max(2.0) + 2.0;
    let ulp_scale = 2.0f64.powi(magnitude.log2().ceil() as i32 - 52);
    let from_rounding = ulp_scale * 128.0;
    let from_scale = 1.0 / (10.0 * (scale as f64).powi(4));
    from_rounding.max(from_scale).min(0.125)
}
