//! Scenario demand by wild residual bootstrap of the two-stage model.

use rand::Rng;

use crate::calibration::regression::{fit_two_stage, TwoStageFit};
use crate::calibration::rng::rademacher;
use crate::calibration::smoothing::smooth_cma3;
use crate::calibration::REDRAW_LIMIT;
use crate::error::{Error, Result};
use crate::market::Quantity;

/// Smoothed history of one region: `y` DAP/MAP apparent consumption, `x`
/// total P2O5 fertilizer consumption, `z` P2O5 applied to crops. Years
/// refer to the centers of the smoothing windows.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSeries {
    pub region: String,
    pub years: Vec<i32>,
    pub y: Vec<f64>,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
}

impl RegionSeries {
    /// Smooths raw yearly observations with the span-3 moving average.
    pub fn from_raw(
        region: impl Into<String>,
        years: &[i32],
        y: &[f64],
        x: &[f64],
        z: &[f64],
    ) -> Result<Self> {
        let region = region.into();
        if years.len() != y.len() || y.len() != x.len() || x.len() != z.len() {
            return Err(Error::Data(format!("{region}: series lengths differ")));
        }
        if years.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(Error::Data(format!("{region}: years must be consecutive")));
        }
        let series = RegionSeries {
            years: years[1..years.len().saturating_sub(1)].to_vec(),
            y: smooth_cma3(y)?,
            x: smooth_cma3(x)?,
            z: smooth_cma3(z)?,
            region,
        };
        series.check()?;
        Ok(series)
    }

    fn check(&self) -> Result<()> {
        if self.y.len() < 3 {
            return Err(Error::Data(format!(
                "{}: need at least 3 smoothed observations",
                self.region
            )));
        }
        if self.y.iter().chain(&self.x).chain(&self.z).any(|v| !(*v > 0.0)) {
            return Err(Error::Data(format!("{}: series values must be > 0", self.region)));
        }
        Ok(())
    }

    pub fn fit(&self) -> Result<TwoStageFit> {
        fit_two_stage(&self.y, &self.x, &self.z)
    }

    pub fn last_y(&self) -> f64 {
        *self.y.last().expect("validated non-empty")
    }
}

/// One bootstrap prediction `β*·α*·z_scenario` (not yet screened).
pub fn draw_prediction<R: Rng + ?Sized>(
    series: &RegionSeries,
    fit: &TwoStageFit,
    z_scenario: f64,
    rng: &mut R,
) -> Result<f64> {
    let x_star: Vec<f64> = series
        .z
        .iter()
        .zip(&fit.u2)
        .map(|(z, u)| fit.alpha * z + rademacher(rng) * u)
        .collect();
    let y_star: Vec<f64> = x_star
        .iter()
        .zip(&fit.u1)
        .map(|(x, u)| fit.beta * x + rademacher(rng) * u)
        .collect();
    Ok(fit_two_stage(&y_star, &x_star, &series.z)?.predict(z_scenario))
}

/// Converts a volume into whole goods units of `unit` size (same volume
/// unit as `value`).
pub fn quantize(value: f64, unit: f64) -> Quantity {
    if value <= 0.0 {
        0
    } else {
        (value / unit).round() as Quantity
    }
}

/// Draws one valid demand: predictions that quantize below one unit are
/// rejected and redrawn. Returns the volume, its units, and the number of
/// rejected draws.
pub fn draw_demand<R: Rng + ?Sized>(
    series: &RegionSeries,
    fit: &TwoStageFit,
    z_scenario: f64,
    unit: f64,
    rng: &mut R,
) -> Result<(f64, Quantity, usize)> {
    for rejected in 0..=REDRAW_LIMIT {
        let value = match draw_prediction(series, fit, z_scenario, rng) {
            Ok(v) => v,
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        };
        let units = quantize(value, unit);
        if value >= 0.0 && units >= 1 {
            return Ok((value, units, rejected));
        }
    }
    Err(Error::RejectionBudget {
        what: format!("demand draw for {}", series.region),
        budget: REDRAW_LIMIT,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemandDraws {
    pub values: Vec<f64>,
    pub units: Vec<Quantity>,
    pub rejected: usize,
}

/// `replications` accepted demand draws for one region.
pub fn wild_bootstrap_demand<R: Rng + ?Sized>(
    series: &RegionSeries,
    z_scenario: f64,
    replications: usize,
    unit: f64,
    rng: &mut R,
) -> Result<DemandDraws> {
    if replications == 0 {
        return Err(Error::InvalidArgument("need at least one replication".into()));
    }
    let fit = series.fit()?;
    let mut out = DemandDraws {
        values: Vec::with_capacity(replications),
        units: Vec::with_capacity(replications),
        rejected: 0,
    };
    for _ in 0..replications {
        let (value, units, rejected) = draw_demand(series, &fit, z_scenario, unit, rng)?;
        out.values.push(value);
        out.units.push(units);
        out.rejected += rejected;
    }
    if out.rejected > 0 {
        log::info!("{}: {} demand draws rejected", series.region, out.rejected);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::rng::replication_stream;

    fn exact_series() -> RegionSeries {
        let years: Vec<i32> = (2007..2012).collect();
        let z = [1.0, 1.2, 1.1, 1.4, 1.5];
        let x: Vec<f64> = z.iter().map(|z| 2.0 * z).collect();
        let y: Vec<f64> = x.iter().map(|x| 0.5 * x).collect();
        RegionSeries::from_raw("R", &years, &y, &x, &z).unwrap()
    }

    #[test]
    fn from_raw_smooths_and_trims_years() {
        let s = exact_series();
        assert_eq!(s.years, vec![2008, 2009, 2010]);
        assert_eq!(s.z.len(), 3);
        assert!((s.z[0] - 1.1).abs() < 1e-12);
    }

    #[test]
    fn from_raw_rejects_bad_input() {
        let years = [2007, 2008, 2010, 2011, 2012];
        let v = [1.0; 5];
        assert!(RegionSeries::from_raw("R", &years, &v, &v, &v).is_err());
        let years: Vec<i32> = (2007..2012).collect();
        let mut z = [1.0; 5];
        z[2] = -3.0;
        assert!(RegionSeries::from_raw("R", &years, &v, &v, &z).is_err());
        assert!(RegionSeries::from_raw("R", &years[..4], &v[..4], &v[..4], &v[..4]).is_err());
    }

    #[test]
    fn zero_residuals_reproduce_point_prediction() {
        let s = exact_series();
        let mut rng = replication_stream(5, 0);
        let draws = wild_bootstrap_demand(&s, 3.0, 20, 0.01, &mut rng).unwrap();
        let point = s.fit().unwrap().predict(3.0);
        assert!((point - 3.0).abs() < 1e-12);
        assert!(draws.values.iter().all(|v| *v == draws.values[0]));
        assert!((draws.values[0] - point).abs() < 1e-12);
        assert!(draws.units.iter().all(|&u| u == 300));
    }

    #[test]
    fn zero_scenario_exhausts_rejections() {
        let s = exact_series();
        let mut rng = replication_stream(5, 0);
        assert!(matches!(
            wild_bootstrap_demand(&s, 0.0, 3, 0.01, &mut rng),
            Err(Error::RejectionBudget { .. })
        ));
        assert!(wild_bootstrap_demand(&s, 1.0, 0, 0.01, &mut rng).is_err());
    }

    #[test]
    fn quantize_rounds_to_units() {
        assert_eq!(quantize(1234.0, 250.0), 5);
        assert_eq!(quantize(-4.0, 1.0), 0);
        assert_eq!(quantize(0.4, 1.0), 0);
    }
}
