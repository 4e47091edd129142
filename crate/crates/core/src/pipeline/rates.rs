//! Phosphorus application rates by country and crop, and regional
//! fertilizer use implied by crop production.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::flows::RegionRecord;

/// Area code of the EU aggregate in fertilizer use data.
pub const EU_AREA: &str = "EU";
/// Area code of the rest-of-world aggregate.
pub const ROW_AREA: &str = "ROW";

/// Fertilizer use by crop in the base year, kt P2O5. `area` is a country,
/// [`EU_AREA`] or [`ROW_AREA`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FertilizerUseRecord {
    pub year: i32,
    pub area: String,
    pub crop: String,
    pub use_kt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductionRecord {
    pub year: i32,
    pub country: String,
    pub crop: String,
    pub production_kt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioProductionRecord {
    pub scenario: String,
    pub country: String,
    pub crop: String,
    pub production_kt: f64,
}

/// kg P2O5 per tonne of crop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApplicationRate {
    pub country: String,
    pub crop: String,
    pub rate_kg_per_t: f64,
    /// Imputed from the regional minimum for the crop.
    pub fallback: bool,
}

pub type RateTable = BTreeMap<(String, String), ApplicationRate>;

/// Splits `total` in proportion to `weights`.
pub fn split_proportional(total: f64, weights: &[f64]) -> Result<Vec<f64>> {
    let sum: f64 = weights.iter().sum();
    if sum <= 0.0 {
        if total == 0.0 {
            return Ok(vec![0.0; weights.len()]);
        }
        return Err(Error::Data("positive total over zero weights".into()));
    }
    Ok(weights.iter().map(|w| total * w / sum).collect())
}

fn rate(use_kt: f64, production_kt: f64) -> f64 {
    use_kt / production_kt * 1000.0
}

/// Rates from base-year fertilizer use and production:
///
/// * country rows give `use / production` directly;
/// * the EU row is split over member countries without own data in
///   proportion to their production;
/// * the rest-of-world row is split over regions in proportion to the
///   production of the remaining countries, then over those countries;
/// * a country producing a crop with no rate yet gets the minimum rate of
///   its region for that crop, flagged as a fallback.
pub fn derive_application_rates(
    uses: &[FertilizerUseRecord],
    production: &[ProductionRecord],
    scenario: &[ScenarioProductionRecord],
    regions: &[RegionRecord],
) -> Result<RateTable> {
    let years: BTreeSet<i32> = uses.iter().map(|u| u.year).collect();
    if years.len() > 1 {
        return Err(Error::Data("fertilizer use must come from a single base year".into()));
    }
    let Some(&base_year) = years.first() else {
        return Ok(RateTable::new());
    };
    let region_of: BTreeMap<&str, &str> =
        regions.iter().map(|r| (r.country.as_str(), r.region.as_str())).collect();
    let eu: BTreeSet<&str> = regions.iter().filter(|r| r.eu).map(|r| r.country.as_str()).collect();
    let mut base: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    for p in production.iter().filter(|p| p.year == base_year) {
        if !region_of.contains_key(p.country.as_str()) {
            return Err(Error::Data(format!("country {:?} has no region", p.country)));
        }
        *base.entry((p.country.as_str(), p.crop.as_str())).or_insert(0.0) += p.production_kt;
    }
    let base_of = |c: &str, k: &str| base.get(&(c, k)).copied().unwrap_or(0.0);

    let mut rates = RateTable::new();
    let put = |rates: &mut RateTable, country: &str, crop: &str, value: f64| {
        rates.insert(
            (country.to_string(), crop.to_string()),
            ApplicationRate {
                country: country.to_string(),
                crop: crop.to_string(),
                rate_kg_per_t: value,
                fallback: false,
            },
        );
    };

    for u in uses.iter().filter(|u| u.area != EU_AREA && u.area != ROW_AREA) {
        if !region_of.contains_key(u.area.as_str()) {
            return Err(Error::Data(format!("fertilizer use area {:?} is unknown", u.area)));
        }
        let p = base_of(&u.area, &u.crop);
        if p <= 0.0 {
            return Err(Error::Data(format!(
                "{} uses fertilizer on {} without production in {base_year}",
                u.area, u.crop
            )));
        }
        put(&mut rates, &u.area, &u.crop, rate(u.use_kt, p));
    }
    let direct: BTreeSet<(String, String)> = rates.keys().cloned().collect();

    for u in uses.iter().filter(|u| u.area == EU_AREA) {
        let members: Vec<&str> = eu
            .iter()
            .copied()
            .filter(|c| !direct.contains(&(c.to_string(), u.crop.clone())))
            .collect();
        let weights: Vec<f64> = members.iter().map(|c| base_of(c, &u.crop)).collect();
        let split = split_proportional(u.use_kt, &weights)
            .map_err(|_| Error::Data(format!("EU uses fertilizer on {} without production", u.crop)))?;
        for ((c, w), s) in members.iter().zip(&weights).zip(split) {
            if *w > 0.0 {
                put(&mut rates, c, &u.crop, rate(s, *w));
            }
        }
    }

    let eu_crops: BTreeSet<&str> = uses
        .iter()
        .filter(|u| u.area == EU_AREA)
        .map(|u| u.crop.as_str())
        .collect();
    for u in uses.iter().filter(|u| u.area == ROW_AREA) {
        let covered = |c: &str| {
            direct.contains(&(c.to_string(), u.crop.clone()))
                || (eu.contains(c) && eu_crops.contains(u.crop.as_str()))
        };
        let mut by_region: BTreeMap<&str, Vec<(&str, f64)>> = BTreeMap::new();
        for (&c, &r) in &region_of {
            if !covered(c) {
                by_region.entry(r).or_default().push((c, base_of(c, &u.crop)));
            }
        }
        let regional: Vec<f64> =
            by_region.values().map(|cs| cs.iter().map(|(_, p)| p).sum()).collect();
        let split = split_proportional(u.use_kt, &regional).map_err(|_| {
            Error::Data(format!("rest of world uses fertilizer on {} without production", u.crop))
        })?;
        for ((countries, total), share) in by_region.values().zip(&regional).zip(split) {
            for &(c, p) in countries {
                if p > 0.0 {
                    put(&mut rates, c, &u.crop, rate(share, *total));
                }
            }
        }
    }

    // Regional minimum for every producing (country, crop) still uncovered.
    let mut minimum: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    for r in rates.values() {
        let key = (region_of[r.country.as_str()], r.crop.as_str());
        let m = minimum.entry(key).or_insert(f64::INFINITY);
        *m = m.min(r.rate_kg_per_t);
    }
    let producing: BTreeSet<(&str, &str)> = production
        .iter()
        .filter(|p| p.production_kt > 0.0)
        .map(|p| (p.country.as_str(), p.crop.as_str()))
        .chain(
            scenario
                .iter()
                .filter(|p| p.production_kt > 0.0)
                .map(|p| (p.country.as_str(), p.crop.as_str())),
        )
        .collect();
    let mut fallbacks = Vec::new();
    for (c, k) in producing {
        if rates.contains_key(&(c.to_string(), k.to_string())) {
            continue;
        }
        let region = region_of
            .get(c)
            .ok_or_else(|| Error::Data(format!("country {c:?} has no region")))?;
        if let Some(&m) = minimum.get(&(*region, k)) {
            fallbacks.push(ApplicationRate {
                country: c.to_string(),
                crop: k.to_string(),
                rate_kg_per_t: m,
                fallback: true,
            });
        }
    }
    for f in fallbacks {
        rates.insert((f.country.clone(), f.crop.clone()), f);
    }
    Ok(rates)
}

/// kt P2O5 applied per region for production given as
/// `(country, crop, production_kt)`.
pub fn fertilizer_use_by_region<'a>(
    rates: &RateTable,
    production: impl IntoIterator<Item = (&'a str, &'a str, f64)>,
    regions: &BTreeMap<String, String>,
) -> Result<BTreeMap<String, f64>> {
    let mut totals: BTreeMap<String, f64> = regions.values().map(|r| (r.clone(), 0.0)).collect();
    for (country, crop, amount) in production {
        if amount <= 0.0 {
            continue;
        }
        let region = regions
            .get(country)
            .ok_or_else(|| Error::Data(format!("country {country:?} has no region")))?;
        let r = rates
            .get(&(country.to_string(), crop.to_string()))
            .ok_or_else(|| Error::Data(format!("no application rate for {country} {crop}")))?;
        *totals.get_mut(region).expect("region listed") += r.rate_kg_per_t * amount / 1000.0;
    }
    Ok(totals)
}

/// Regional use under one production scenario.
pub fn scenario_fertilizer_use(
    rates: &RateTable,
    scenario: &[ScenarioProductionRecord],
    scenario_id: &str,
    regions: &BTreeMap<String, String>,
) -> Result<BTreeMap<String, f64>> {
    let rows: Vec<&ScenarioProductionRecord> =
        scenario.iter().filter(|s| s.scenario == scenario_id).collect();
    if rows.is_empty() {
        return Err(Error::Data(format!("no production rows for scenario {scenario_id:?}")));
    }
    fertilizer_use_by_region(
        rates,
        rows.iter().map(|s| (s.country.as_str(), s.crop.as_str(), s.production_kt)),
        regions,
    )
}
