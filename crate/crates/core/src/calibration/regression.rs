//! No-intercept regressions behind the demand and trade-cost samplers.

use crate::error::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `y = βx + u1`, `x = αz + u2`, estimated with `z` as the instrument.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoStageFit {
    pub alpha: f64,
    pub beta: f64,
    /// Residuals of the demand equation, `y − βx`.
    pub u1: Vec<f64>,
    /// Residuals of the first stage, `x − αz`.
    pub u2: Vec<f64>,
}

impl TwoStageFit {
    /// Point prediction of `y` for a scenario value of `z`.
    pub fn predict(&self, z: f64) -> f64 {
        self.beta * self.alpha * z
    }
}

/// `α = z·x / z·z`, `β = z·y / z·x`.
pub fn fit_two_stage(y: &[f64], x: &[f64], z: &[f64]) -> Result<TwoStageFit> {
    if y.len() != x.len() || x.len() != z.len() {
        return Err(Error::InvalidArgument("series lengths differ".into()));
    }
    let zz = dot(z, z);
    if zz == 0.0 {
        return Err(Error::Degenerate("instrument series is all zero"));
    }
    let zx = dot(z, x);
    if zx == 0.0 {
        return Err(Error::Degenerate("instrument is orthogonal to the covariate"));
    }
    let alpha = zx / zz;
    let beta = dot(z, y) / zx;
    Ok(TwoStageFit {
        alpha,
        beta,
        u1: y.iter().zip(x).map(|(y, x)| y - beta * x).collect(),
        u2: x.iter().zip(z).map(|(x, z)| x - alpha * z).collect(),
    })
}

/// `w = γv + ε` fitted by least squares without intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeCostFit {
    pub gamma: f64,
    pub residuals: Vec<f64>,
    /// Regressor values `v`, kept for bootstrap re-fits.
    pub regressor: Vec<f64>,
    pub reference_market: usize,
    pub reference_year: i32,
}

impl TradeCostFit {
    /// Fitted values plus residuals give back the observed `w`.
    pub fn observed(&self) -> Vec<f64> {
        self.regressor
            .iter()
            .zip(&self.residuals)
            .map(|(v, e)| self.gamma * v + e)
            .collect()
    }
}

/// Least-squares slope through the origin, `γ = v·w / v·v`.
pub fn ols_slope(w: &[f64], v: &[f64]) -> Result<f64> {
    if w.len() != v.len() {
        return Err(Error::InvalidArgument("w and v lengths differ".into()));
    }
    let vv = dot(v, v);
    if vv == 0.0 {
        return Err(Error::Degenerate("market-share changes are all zero"));
    }
    Ok(dot(v, w) / vv)
}

pub fn fit_trade_cost_regression(
    w: &[f64],
    v: &[f64],
    reference_market: usize,
    reference_year: i32,
) -> Result<TradeCostFit> {
    let gamma = ols_slope(w, v)?;
    Ok(TradeCostFit {
        gamma,
        residuals: w.iter().zip(v).map(|(w, v)| w - gamma * v).collect(),
        regressor: v.to_vec(),
        reference_market,
        reference_year,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_identification() {
        let z = [1.0, 2.0, 4.0, 3.0];
        let x: Vec<f64> = z.iter().map(|z| 3.0 * z).collect();
        let y: Vec<f64> = x.iter().map(|x| 2.0 * x).collect();
        let fit = fit_two_stage(&y, &x, &z).unwrap();
        assert!((fit.alpha - 3.0).abs() < 1e-12);
        assert!((fit.beta - 2.0).abs() < 1e-12);
        assert!(fit.u1.iter().chain(&fit.u2).all(|u| u.abs() < 1e-12));
    }

    #[test]
    fn closed_form_ratios() {
        let fit = fit_two_stage(&[3.0, 6.0], &[2.0, 4.0], &[1.0, 2.0]).unwrap();
        assert!((fit.alpha - 2.0).abs() < 1e-12);
        assert!((fit.beta - 1.5).abs() < 1e-12);
    }

    #[test]
    fn zero_instrument_fails() {
        assert!(matches!(
            fit_two_stage(&[1.0, 2.0], &[1.0, 2.0], &[0.0, 0.0]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn trade_cost_slope_cases() {
        let v = [0.5, -1.0, 2.0];
        let w: Vec<f64> = v.iter().map(|v| -2.0 * v).collect();
        let fit = fit_trade_cost_regression(&w, &v, 0, 2013).unwrap();
        assert!((fit.gamma + 2.0).abs() < 1e-12);
        assert!(fit.residuals.iter().all(|e| e.abs() < 1e-12));

        let fit = fit_trade_cost_regression(&[-1.0, 1.0], &[1.0, -1.0], 0, 2013).unwrap();
        assert!((fit.gamma + 1.0).abs() < 1e-12);

        assert!(fit_trade_cost_regression(&[1.0], &[0.0], 0, 2013).is_err());
    }

    #[test]
    fn fit_reproduces_observations() {
        let w = [0.3, -0.1, 0.05, 0.2];
        let v = [0.1, 0.2, -0.3, 0.05];
        let fit = fit_trade_cost_regression(&w, &v, 1, 2015).unwrap();
        for (a, b) in fit.observed().iter().zip(&w) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
