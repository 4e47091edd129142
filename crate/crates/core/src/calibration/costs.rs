//! Trade-cost inversion and sampling, and the local cost calibration.

use rand::Rng;

use crate::calibration::regression::{fit_trade_cost_regression, ols_slope, TradeCostFit};
use crate::calibration::rng::rademacher;
use crate::error::{Error, Result};
use crate::market::{Money, Quantity};

/// Observed yearly flows in one volume unit. `flows[y][i][j]` is the
/// import of market `j` from supplier `i`, `local[y][j]` the domestic
/// supply of market `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedHistory {
    pub years: Vec<i32>,
    pub flows: Vec<Vec<Vec<f64>>>,
    pub local: Vec<Vec<f64>>,
}

impl ObservedHistory {
    pub fn suppliers(&self) -> usize {
        self.flows.first().map_or(0, |f| f.len())
    }

    pub fn markets(&self) -> usize {
        self.local.first().map_or(0, |l| l.len())
    }

    fn check(&self) -> Result<()> {
        let (m, n) = (self.suppliers(), self.markets());
        if self.years.is_empty() || m == 0 || n == 0 {
            return Err(Error::Data("trade history is empty".into()));
        }
        let shaped = self.flows.len() == self.years.len()
            && self.local.len() == self.years.len()
            && self.flows.iter().all(|f| f.len() == m && f.iter().all(|r| r.len() == n))
            && self.local.iter().all(|l| l.len() == n);
        if !shaped {
            return Err(Error::Data("trade history tables have inconsistent shapes".into()));
        }
        let finite = self
            .flows
            .iter()
            .flatten()
            .flatten()
            .chain(self.local.iter().flatten())
            .all(|v| v.is_finite() && *v >= 0.0);
        if !finite {
            return Err(Error::Data("trade history values must be finite and ≥ 0".into()));
        }
        Ok(())
    }

    /// Total consumption (local plus imports) per market in year index `y`.
    pub fn market_demand(&self, y: usize) -> Vec<f64> {
        (0..self.markets())
            .map(|j| self.local[y][j] + self.flows[y].iter().map(|r| r[j]).sum::<f64>())
            .collect()
    }

    /// Pairs with a positive flow in at least one observed year.
    pub fn trade_mask(&self) -> Vec<Vec<bool>> {
        (0..self.suppliers())
            .map(|i| {
                (0..self.markets())
                    .map(|j| self.flows.iter().any(|f| f[i][j] > 0.0))
                    .collect()
            })
            .collect()
    }
}

/// Regression inputs and base values recovered from the history.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeCostInputs {
    /// Change of each active relative cost versus the reference year,
    /// one entry per (year, supplier, market) with the market not the
    /// reference.
    pub w: Vec<f64>,
    /// Matching change of the market's real share.
    pub v: Vec<f64>,
    /// Base trade costs in relative units, absent on masked pairs.
    pub base_costs: Vec<Vec<Option<f64>>>,
    /// Nominal market shares of global demand in the reference year.
    pub base_shares: Vec<f64>,
    pub mask: Vec<Vec<bool>>,
    pub reference_market: usize,
    pub reference_year: i32,
}

/// Market shares deflated by the reference market's share growth.
pub fn real_shares(shares: &[f64], base_shares: &[f64], reference_market: usize) -> Vec<f64> {
    let growth = shares[reference_market] / base_shares[reference_market];
    shares.iter().map(|s| s / growth).collect()
}

fn shares(demand: &[f64]) -> Vec<f64> {
    let total: f64 = demand.iter().sum();
    demand.iter().map(|d| d / total).collect()
}

/// Relative cost of each active flow per year. With `a_y = θ / D_y` and
/// `c_oj = 1 − a_y·d_j`, the market price is `π_j = a_y·x_o^j + c_oj`,
/// a flow's cost is `π_j − a_y·x_ij`, and costs are taken relative to the
/// reference market price `π_ref`.
fn relative_costs(
    history: &ObservedHistory,
    reference_market: usize,
    theta: f64,
) -> Result<Vec<Vec<Vec<Option<f64>>>>> {
    let (m, n) = (history.suppliers(), history.markets());
    (0..history.years.len())
        .map(|y| {
            if history.local[y][reference_market] <= 0.0 {
                return Err(Error::Data(format!(
                    "reference market {reference_market} has no local supply in {}",
                    history.years[y]
                )));
            }
            let demand = history.market_demand(y);
            let global: f64 = demand.iter().sum();
            let a = theta / global;
            let price: Vec<f64> = (0..n)
                .map(|j| a * history.local[y][j] + 1.0 - a * demand[j])
                .collect();
            Ok((0..m)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let x = history.flows[y][i][j];
                            (x > 0.0).then(|| price[j] - a * x - price[reference_market])
                        })
                        .collect()
                })
                .collect())
        })
        .collect()
}

pub fn infer_relative_trade_costs(
    history: &ObservedHistory,
    reference_market: usize,
    reference_year: i32,
    theta: f64,
) -> Result<TradeCostInputs> {
    history.check()?;
    let (m, n) = (history.suppliers(), history.markets());
    if reference_market >= n {
        return Err(Error::InvalidArgument(format!(
            "reference market {reference_market} out of range"
        )));
    }
    let y0 = history
        .years
        .iter()
        .position(|&y| y == reference_year)
        .ok_or_else(|| Error::Data(format!("reference year {reference_year} not observed")))?;
    let rel = relative_costs(history, reference_market, theta)?;
    let base_shares = shares(&history.market_demand(y0));

    let mut w = Vec::new();
    let mut v = Vec::new();
    for y in (0..history.years.len()).filter(|&y| y != y0) {
        let real = real_shares(&shares(&history.market_demand(y)), &base_shares, reference_market);
        for i in 0..m {
            for j in (0..n).filter(|&j| j != reference_market) {
                if let (Some(now), Some(then)) = (rel[y][i][j], rel[y0][i][j]) {
                    w.push(now - then);
                    v.push(real[j] - base_shares[j]);
                }
            }
        }
    }

    // Base level: the reference-year cost where the flow was active, else
    // the mean over active years, shifted so each supplier's cheapest
    // destination costs zero.
    let mask = history.trade_mask();
    let base_costs = (0..m)
        .map(|i| {
            let raw: Vec<Option<f64>> = (0..n)
                .map(|j| {
                    rel[y0][i][j].or_else(|| {
                        let seen: Vec<f64> = rel.iter().filter_map(|r| r[i][j]).collect();
                        (!seen.is_empty()).then(|| seen.iter().sum::<f64>() / seen.len() as f64)
                    })
                })
                .collect();
            let floor = raw.iter().flatten().copied().fold(f64::INFINITY, f64::min);
            raw.into_iter().map(|r| r.map(|r| r - floor)).collect()
        })
        .collect();

    Ok(TradeCostInputs {
        w,
        v,
        base_costs,
        base_shares,
        mask,
        reference_market,
        reference_year,
    })
}

impl TradeCostInputs {
    pub fn fit(&self) -> Result<TradeCostFit> {
        fit_trade_cost_regression(&self.w, &self.v, self.reference_market, self.reference_year)
    }
}

/// Change of each market's real share from the reference year to a
/// scenario with demands `scenario_demand` (any common unit).
pub fn scenario_share_changes(
    scenario_demand: &[f64],
    base_shares: &[f64],
    reference_market: usize,
) -> Result<Vec<f64>> {
    if scenario_demand.len() != base_shares.len() || reference_market >= base_shares.len() {
        return Err(Error::InvalidArgument("scenario demand does not match markets".into()));
    }
    if scenario_demand.iter().sum::<f64>() <= 0.0 || base_shares[reference_market] <= 0.0 {
        return Err(Error::Degenerate("zero demand in share computation"));
    }
    let real = real_shares(&shares(scenario_demand), base_shares, reference_market);
    Ok(real.iter().zip(base_shares).map(|(r, b)| r - b).collect())
}

/// One bootstrap draw of the cost table in minor units: `γ*` from a wild
/// re-fit, then `t = base + γ*·Δshare_j + w·ε` per allowed pair with `ε`
/// drawn from the residual pool. Negative costs are clamped to zero.
pub fn sample_trade_costs<R: Rng + ?Sized>(
    base_costs: &[Vec<Option<f64>>],
    share_changes: &[f64],
    fit: &TradeCostFit,
    money_scale: i64,
    rng: &mut R,
) -> Result<Vec<Vec<Option<Money>>>> {
    if base_costs.iter().any(|r| r.len() != share_changes.len()) {
        return Err(Error::InvalidArgument("base costs do not match markets".into()));
    }
    let w_star: Vec<f64> = fit
        .regressor
        .iter()
        .zip(&fit.residuals)
        .map(|(v, e)| fit.gamma * v + rademacher(rng) * e)
        .collect();
    let gamma = ols_slope(&w_star, &fit.regressor)?;
    Ok(base_costs
        .iter()
        .map(|row| {
            row.iter()
                .zip(share_changes)
                .map(|(base, ds)| {
                    base.map(|b| {
                        let noise = if fit.residuals.is_empty() {
                            0.0
                        } else {
                            let e = fit.residuals[rng.gen_range(0..fit.residuals.len())];
                            rademacher(rng) * e
                        };
                        Money::from_relative((b + gamma * ds + noise).max(0.0), money_scale)
                    })
                })
                .collect()
        })
        .collect())
}

/// `a = θ / D` and `c_oj = 1 − a·d_j` in minor units of a unit price of
/// `money_scale`. `a` is rounded to the minor unit and `c_oj` takes up the
/// remainder, so `a·d_j + c_oj` equals the unit price exactly.
pub fn calibrate_local_costs(
    demands: &[Quantity],
    theta: f64,
    money_scale: i64,
) -> Result<(Money, Vec<Money>)> {
    if demands.is_empty() || demands.contains(&0) {
        return Err(Error::InvalidArgument("every demand must be ≥ 1".into()));
    }
    if !(theta >= 0.0) || money_scale <= 0 {
        return Err(Error::Config("θ must be ≥ 0 and the money scale positive".into()));
    }
    let total: Quantity = demands.iter().sum();
    let a = Money((theta * money_scale as f64 / total as f64).round() as i64);
    let unit = Money(money_scale);
    let costs: Vec<Money> = demands.iter().map(|&d| unit - a * d).collect();
    if let Some(j) = costs.iter().position(|c| c.minor() <= 0) {
        return Err(Error::Config(format!(
            "θ = {theta} leaves a nonpositive local cost on market {j}"
        )));
    }
    Ok((a, costs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::rng::replication_stream;

    #[test]
    fn local_cost_examples() {
        let (a, c) = calibrate_local_costs(&[20, 30, 50], 0.5, 10_000).unwrap();
        assert_eq!(a, Money(50));
        assert_eq!(c[0], Money(9_000));
        for (&d, &c) in [20u64, 30, 50].iter().zip(&c) {
            assert_eq!(a * d + c, Money(10_000));
        }
        let (a, c) = calibrate_local_costs(&[3, 7], 0.0, 100).unwrap();
        assert_eq!(a, Money(0));
        assert!(c.iter().all(|&c| c == Money(100)));
        assert!(matches!(
            calibrate_local_costs(&[40], 1.5, 100),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn larger_market_has_lower_local_cost() {
        let (_, c) = calibrate_local_costs(&[5, 40, 12], 0.5, 10_000).unwrap();
        assert!(c[1] < c[2] && c[2] < c[0]);
    }

    /// Two suppliers, three markets, two years, θ = 0.5, reference market 0
    /// and reference year 2015.
    pub(crate) fn two_year_history() -> ObservedHistory {
        ObservedHistory {
            years: vec![2015, 2016],
            flows: vec![
                vec![vec![10.0, 20.0, 0.0], vec![0.0, 10.0, 10.0]],
                vec![vec![10.0, 30.0, 0.0], vec![0.0, 10.0, 20.0]],
            ],
            local: vec![vec![40.0, 20.0, 50.0], vec![50.0, 20.0, 40.0]],
        }
    }

    #[test]
    fn hand_computed_two_year_inversion() {
        // 2015: d = (50, 50, 60), D = 160, a = 1/320.
        //   π = 1 − a·imports = (1 − 10a, 1 − 30a, 1 − 10a); π_ref = π_0.
        //   r_01 = −20a − 20a = −40a, r_11 = −20a − 10a = −30a,
        //   r_12 = 0 − 10a = −10a.
        // 2016: d = (60, 60, 60), D = 180, a = 1/360.
        //   π = (1 − 10a, 1 − 40a, 1 − 20a).
        //   r_01 = −30a − 30a = −60a, r_11 = −30a − 10a = −40a,
        //   r_12 = −10a − 20a = −30a.
        // Shares 2015 = (5/16, 5/16, 6/16), 2016 = (1/3, 1/3, 1/3).
        // Reference growth (1/3)/(5/16) = 16/15, so real 2016 shares are
        // (5/16, 5/16, 5/16) and v = (0, −1/16).
        let h = two_year_history();
        let t = infer_relative_trade_costs(&h, 0, 2015, 0.5).unwrap();
        let (a0, a1) = (1.0 / 320.0, 1.0 / 360.0);
        let w = [-60.0 * a1 + 40.0 * a0, -40.0 * a1 + 30.0 * a0, -30.0 * a1 + 10.0 * a0];
        let v = [0.0, 0.0, -1.0 / 16.0];
        assert_eq!(t.w.len(), 3);
        for k in 0..3 {
            assert!((t.w[k] - w[k]).abs() < 1e-12, "w[{k}]");
            assert!((t.v[k] - v[k]).abs() < 1e-12, "v[{k}]");
        }
        assert_eq!(t.mask, vec![vec![true, true, false], vec![false, true, true]]);
        // Supplier 0: r_00 = −10a0, r_01 = −40a0; shifted by the minimum.
        let b = &t.base_costs;
        assert!((b[0][0].unwrap() - 30.0 * a0).abs() < 1e-12);
        assert!(b[0][1].unwrap().abs() < 1e-12);
        assert_eq!(b[0][2], None);
        assert!((b[1][1].unwrap()).abs() < 1e-12);
        assert!((b[1][2].unwrap() - 20.0 * a0).abs() < 1e-12);
        assert_eq!(b[1][0], None);
    }

    #[test]
    fn single_year_gives_empty_regression_inputs() {
        let mut h = two_year_history();
        h.years.truncate(1);
        h.flows.truncate(1);
        h.local.truncate(1);
        let t = infer_relative_trade_costs(&h, 0, 2015, 0.5).unwrap();
        assert!(t.w.is_empty() && t.v.is_empty());
    }

    #[test]
    fn uniform_growth_gives_zero_v() {
        let mut h = two_year_history();
        h.flows[1] = h.flows[0].iter().map(|r| r.iter().map(|x| 2.0 * x).collect()).collect();
        h.local[1] = h.local[0].iter().map(|x| 2.0 * x).collect();
        let t = infer_relative_trade_costs(&h, 0, 2015, 0.5).unwrap();
        assert!(t.v.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn inactive_reference_market_fails() {
        let mut h = two_year_history();
        h.local[1][0] = 0.0;
        assert!(infer_relative_trade_costs(&h, 0, 2015, 0.5).is_err());
        assert!(infer_relative_trade_costs(&two_year_history(), 0, 2014, 0.5).is_err());
    }

    fn noiseless_fit(gamma: f64) -> TradeCostFit {
        let v = vec![0.1, -0.2, 0.3];
        let w: Vec<f64> = v.iter().map(|v| gamma * v).collect();
        fit_trade_cost_regression(&w, &v, 0, 2015).unwrap()
    }

    #[test]
    fn cost_draw_identity_and_sign() {
        let base = vec![vec![Some(0.10), None], vec![Some(0.05), Some(0.20)]];
        let mut rng = replication_stream(1, 0);
        let fit = noiseless_fit(-0.5);
        let t = sample_trade_costs(&base, &[0.0, 0.0], &fit, 100, &mut rng).unwrap();
        assert_eq!(
            t,
            vec![vec![Some(Money(10)), None], vec![Some(Money(5)), Some(Money(20))]]
        );
        let t = sample_trade_costs(&base, &[0.02, 0.1], &fit, 10_000, &mut rng).unwrap();
        assert!(t[0][0].unwrap() < Money(1_000));
        assert!(t[1][1].unwrap() < Money(2_000));
        assert_eq!(t[0][1], None);
    }

    #[test]
    fn cost_draws_are_clamped_at_zero() {
        let base = vec![vec![Some(0.0)]];
        let mut rng = replication_stream(1, 0);
        let t = sample_trade_costs(&base, &[1.0], &noiseless_fit(-0.5), 100, &mut rng).unwrap();
        assert_eq!(t[0][0], Some(Money(0)));
    }

    #[test]
    fn scenario_changes_are_zero_on_reference_market() {
        let base = [0.25, 0.25, 0.5];
        let ds = scenario_share_changes(&[30.0, 20.0, 50.0], &base, 0).unwrap();
        assert!(ds[0].abs() < 1e-15);
        let same = scenario_share_changes(&[10.0, 10.0, 20.0], &base, 1).unwrap();
        assert!(same.iter().all(|d| d.abs() < 1e-15));
    }
}
