use std::fmt;

use crate::auction::spend::{bundle_utility, demand_bundle};
use crate::market::{Equilibrium, MarketInstance, Money};

/// Per-condition outcome of an equilibrium check. Each list holds
/// human-readable witnesses; empty means the condition holds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    /// Shape, mask and demand-cap problems that make the flows meaningless.
    pub structure: Vec<String>,
    /// Condition 1: `Σ_j x_i^j ≤ s_i`.
    pub capacity: Vec<String>,
    /// Condition 2: every `x^j` attains the buyer's maximum utility.
    pub utility: Vec<String>,
    /// Condition 3: unsold suppliers carry zero markup.
    pub clearance: Vec<String>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.structure.is_empty()
            && self.capacity.is_empty()
            && self.utility.is_empty()
            && self.clearance.is_empty()
    }

    /// One flag per condition (capacity, utility, clearance), structure
    /// folded into all three.
    pub fn status(&self) -> [bool; 3] {
        let s = self.structure.is_empty();
        [
            s && self.capacity.is_empty(),
            s && self.utility.is_empty(),
            s && self.clearance.is_empty(),
        ]
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all: Vec<&String> = self
            .structure
            .iter()
            .chain(&self.capacity)
            .chain(&self.utility)
            .chain(&self.clearance)
            .collect();
        if all.is_empty() {
            write!(f, "ok")
        } else {
            let joined: Vec<&str> = all.iter().map(|s| s.as_str()).collect();
            write!(f, "{}", joined.join("; "))
        }
    }
}

pub fn verify_equilibrium(inst: &MarketInstance, eq: &Equilibrium) -> VerificationReport {
    let mut report = VerificationReport::default();
    let (m, n) = (inst.suppliers(), inst.markets());
    if eq.markups.len() != m
        || eq.flows.flows.len() != m
        || eq.flows.flows.iter().any(|r| r.len() != n)
    {
        report
            .structure
            .push(format!("equilibrium shape does not match {m} suppliers × {n} markets"));
        return report;
    }
    for i in 0..m {
        if eq.markups.get(i) < Money::ZERO {
            report.structure.push(format!("supplier {i}: negative markup"));
        }
        for j in 0..n {
            if !inst.allowed(i, j) && eq.flows.get(i, j) > 0 {
                report
                    .structure
                    .push(format!("flow on masked pair {i} → {j}"));
            }
        }
    }
    for j in 0..n {
        if eq.flows.local(j, inst).is_none() {
            report.structure.push(format!(
                "market {j}: imports {} exceed demand {}",
                eq.flows.imports(j),
                inst.demands[j]
            ));
        }
    }
    if !report.structure.is_empty() {
        return report;
    }

    for i in 0..m {
        let sold = eq.flows.sold(i);
        if sold > inst.capacities[i] {
            report.capacity.push(format!(
                "supplier {i}: sells {sold} above capacity {}",
                inst.capacities[i]
            ));
        }
        if sold == 0 && eq.markups.get(i) > Money::ZERO {
            report.clearance.push(format!(
                "supplier {i}: unsold at markup {}",
                eq.markups.get(i)
            ));
        }
    }
    for j in 0..n {
        let column = eq.flows.column(j);
        if column.iter().zip(&inst.capacities).any(|(z, s)| z > s) {
            report
                .utility
                .push(format!("market {j}: bundle exceeds supplier capacity"));
            continue;
        }
        let attained = bundle_utility(inst, j, &column, &eq.markups);
        let best = demand_bundle(inst, j, &eq.markups).map(|b| b.utility);
        match (attained, best) {
            (Ok(u), Ok(b)) if u == b => {}
            (Ok(u), Ok(b)) => report
                .utility
                .push(format!("market {j}: utility {u} below maximum {b}")),
            (Err(e), _) | (_, Err(e)) => report.utility.push(format!("market {j}: {e}")),
        }
    }
    report
}
