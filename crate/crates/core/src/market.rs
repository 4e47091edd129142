//! Domain types shared by the auction, metrics and experiment layers.
//!
//! Quantities are whole goods units and money is fixed-point: every cost
//! parameter is an integer number of minor units, so spending, valuation
//! and utility values are exact.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Whole goods units (by default 1 unit = 1 kt P2O5).
pub type Quantity = u64;

/// Minor money units per relative cost unit.
pub const DEFAULT_MONEY_SCALE: i64 = 100;

/// Fixed-point amount in minor cost units.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(pub i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub fn minor(self) -> i64 {
        self.0
    }

    /// Rounds a relative-unit value to the nearest minor unit at `scale`.
    pub fn from_relative(value: f64, scale: i64) -> Money {
        Money((value * scale as f64).round() as i64)
    }

    pub fn to_relative(self, scale: i64) -> f64 {
        self.0 as f64 / scale as f64
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl SubAssign for Money {
    fn sub_assign(&mut self, rhs: Money) {
        self.0 -= rhs.0;
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Mul<i64> for Money {
    type Output = Money;
    fn mul(self, rhs: i64) -> Money {
        Money(self.0 * rhs)
    }
}

impl Mul<Quantity> for Money {
    type Output = Money;
    fn mul(self, rhs: Quantity) -> Money {
        Money(self.0 * rhs as i64)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        Money(iter.map(|m| m.0).sum())
    }
}

/// One fully calibrated auction problem.
///
/// `trade_costs[i][j]` must be `Some` exactly where `mask[i][j]` is true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarketInstance {
    pub capacities: Vec<Quantity>,
    pub demands: Vec<Quantity>,
    /// Inventory/congestion cost constant `a`, per unit squared.
    pub congestion: Money,
    pub local_costs: Vec<Money>,
    pub trade_costs: Vec<Vec<Option<Money>>>,
    pub mask: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.violations.join("; "))
    }
}

impl MarketInstance {
    /// Builds an instance from a full cost table, deriving the mask from
    /// which cells are present.
    pub fn from_costs(
        capacities: Vec<Quantity>,
        demands: Vec<Quantity>,
        congestion: Money,
        local_costs: Vec<Money>,
        trade_costs: Vec<Vec<Option<Money>>>,
    ) -> Result<Self> {
        let mask = trade_costs
            .iter()
            .map(|row| row.iter().map(Option::is_some).collect())
            .collect();
        let inst = MarketInstance {
            capacities,
            demands,
            congestion,
            local_costs,
            trade_costs,
            mask,
        };
        inst.ensure_valid()?;
        Ok(inst)
    }

    pub fn suppliers(&self) -> usize {
        self.capacities.len()
    }

    pub fn markets(&self) -> usize {
        self.demands.len()
    }

    pub fn allowed(&self, supplier: usize, market: usize) -> bool {
        self.mask[supplier][market]
    }

    /// Trade cost of an allowed pair.
    pub fn trade_cost(&self, supplier: usize, market: usize) -> Option<Money> {
        if self.mask[supplier][market] {
            self.trade_costs[supplier][market]
        } else {
            None
        }
    }

    /// Largest marginal cost of a local unit over all markets,
    /// `max_j c_oj + a(2 d_j - 1)`. No buyer ever pays more for a unit.
    pub fn max_local_marginal(&self) -> Money {
        (0..self.markets())
            .map(|j| self.local_costs[j] + self.congestion * (2 * self.demands[j] as i64 - 1))
            .max()
            .unwrap_or(Money::ZERO)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_instance(self)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(report))
        }
    }
}

/// Lists every violated instance invariant; empty when the instance is valid.
pub fn validate_instance(inst: &MarketInstance) -> ValidationReport {
    let mut v = Vec::new();
    let m = inst.capacities.len();
    let n = inst.demands.len();

    for (i, &s) in inst.capacities.iter().enumerate() {
        if s < 1 {
            v.push(format!("supplier {i}: capacity must be ≥ 1"));
        }
    }
    for (j, &d) in inst.demands.iter().enumerate() {
        if d < 1 {
            v.push(format!("market {j}: demand must be ≥ 1"));
        }
    }
    if inst.congestion < Money::ZERO {
        v.push("congestion cost a must be ≥ 0".to_string());
    }
    if inst.local_costs.len() != n {
        v.push(format!(
            "local cost vector has length {}, expected {n}",
            inst.local_costs.len()
        ));
    }
    for (j, c) in inst.local_costs.iter().enumerate() {
        if *c <= Money::ZERO {
            v.push(format!("market {j}: local cost must be > 0"));
        }
    }
    if inst.trade_costs.len() != m || inst.trade_costs.iter().any(|r| r.len() != n) {
        v.push(format!("trade cost table must be {m}×{n}"));
    }
    if inst.mask.len() != m || inst.mask.iter().any(|r| r.len() != n) {
        v.push(format!("trade mask must be {m}×{n}"));
    }
    if !v.iter().any(|s| s.contains('×')) {
        for i in 0..m {
            for j in 0..n {
                match (inst.mask[i][j], inst.trade_costs[i][j]) {
                    (true, None) => {
                        v.push(format!("supplier {i} → market {j}: missing cost on allowed pair"))
                    }
                    (false, Some(_)) => {
                        v.push(format!("supplier {i} → market {j}: cost on masked pair"))
                    }
                    (true, Some(t)) if t < Money::ZERO => {
                        v.push(format!("supplier {i} → market {j}: trade cost must be ≥ 0"))
                    }
                    _ => {}
                }
            }
        }
    }
    ValidationReport { violations: v }
}

/// Integer goods flows `flows[i][j]` from supplier `i` to market `j`.
/// Local supply is derived from the demands, never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowMatrix {
    pub flows: Vec<Vec<Quantity>>,
}

impl FlowMatrix {
    pub fn zeros(suppliers: usize, markets: usize) -> Self {
        FlowMatrix {
            flows: vec![vec![0; markets]; suppliers],
        }
    }

    pub fn get(&self, supplier: usize, market: usize) -> Quantity {
        self.flows[supplier][market]
    }

    /// Column `x^j` as a per-supplier bundle.
    pub fn column(&self, market: usize) -> Vec<Quantity> {
        self.flows.iter().map(|row| row[market]).collect()
    }

    pub fn imports(&self, market: usize) -> Quantity {
        self.flows.iter().map(|row| row[market]).sum()
    }

    pub fn sold(&self, supplier: usize) -> Quantity {
        self.flows[supplier].iter().sum()
    }

    /// `x_o^j = d_j - Σ_i x_i^j`; `None` when imports exceed demand.
    pub fn local(&self, market: usize, inst: &MarketInstance) -> Option<Quantity> {
        inst.demands[market].checked_sub(self.imports(market))
    }

    /// Structural checks: capacity, demand cap and mask.
    pub fn violations(&self, inst: &MarketInstance) -> Vec<String> {
        let mut v = Vec::new();
        for i in 0..inst.suppliers() {
            let sold = self.sold(i);
            if sold > inst.capacities[i] {
                v.push(format!(
                    "supplier {i} sells {sold} above capacity {}",
                    inst.capacities[i]
                ));
            }
            for j in 0..inst.markets() {
                if !inst.allowed(i, j) && self.flows[i][j] > 0 {
                    v.push(format!("flow {} on masked pair {i} → {j}", self.flows[i][j]));
                }
            }
        }
        for j in 0..inst.markets() {
            if self.local(j, inst).is_none() {
                v.push(format!(
                    "market {j} imports {} above demand {}",
                    self.imports(j),
                    inst.demands[j]
                ));
            }
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkupVector(pub Vec<Money>);

impl MarkupVector {
    pub fn zeros(suppliers: usize) -> Self {
        MarkupVector(vec![Money::ZERO; suppliers])
    }

    pub fn get(&self, supplier: usize) -> Money {
        self.0[supplier]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise `self ≤ other`.
    pub fn le_componentwise(&self, other: &MarkupVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equilibrium {
    pub markups: MarkupVector,
    pub flows: FlowMatrix,
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Two suppliers, two markets, full mask.
    pub fn two_by_two() -> MarketInstance {
        MarketInstance::from_costs(
            vec![2, 3],
            vec![3, 2],
            Money(1),
            vec![Money(10), Money(12)],
            vec![
                vec![Some(Money(2)), Some(Money(4))],
                vec![Some(Money(3)), Some(Money(1))],
            ],
        )
        .unwrap()
    }
}
