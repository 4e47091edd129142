//! Product conversion, supplier-to-region flow compilation and the local
//! supply harmonization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProductKind {
    #[serde(rename = "DAP")]
    Dap,
    #[serde(rename = "MAP")]
    Map,
    /// MAP of Chinese origin.
    #[serde(rename = "MAP_CN")]
    MapChina,
    /// Mixed DAP/MAP product codes.
    #[serde(rename = "DAPMAP_MIX")]
    DapMapMix,
}

impl ProductKind {
    /// P2O5 content in hundredths.
    fn factor_percent(self) -> u32 {
        match self {
            ProductKind::Dap => 46,
            ProductKind::Map => 52,
            ProductKind::MapChina => 44,
            ProductKind::DapMapMix => 49,
        }
    }

    pub fn p2o5_factor(self) -> f64 {
        self.factor_percent() as f64 / 100.0
    }
}

impl FromStr for ProductKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "DAP" => Ok(ProductKind::Dap),
            "MAP" => Ok(ProductKind::Map),
            "MAP_CN" => Ok(ProductKind::MapChina),
            "DAPMAP_MIX" => Ok(ProductKind::DapMapMix),
            other => Err(Error::Data(format!("unknown product kind {other:?}"))),
        }
    }
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductKind::Dap => "DAP",
            ProductKind::Map => "MAP",
            ProductKind::MapChina => "MAP_CN",
            ProductKind::DapMapMix => "DAPMAP_MIX",
        })
    }
}

/// Product mass to P2O5 mass, same unit in and out.
pub fn convert_to_p2o5(mass: f64, kind: ProductKind) -> Result<f64> {
    if !(mass >= 0.0) || !mass.is_finite() {
        return Err(Error::Data(format!("product mass {mass} must be finite and ≥ 0")));
    }
    // Multiply before dividing so round factors give exact results
    // (1000 × 0.46 in floating point is not 460).
    Ok(mass * kind.factor_percent() as f64 / 100.0)
}

/// One import record in tonnes of product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeFlowRecord {
    pub year: i32,
    /// Importing country.
    pub importer: String,
    /// Exporting country.
    pub partner: String,
    pub product: ProductKind,
    pub mass_t: f64,
}

/// Deliveries of a supplier inside its own country of residence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomesticSupplyRecord {
    pub year: i32,
    pub supplier: String,
    pub country: String,
    pub product: ProductKind,
    pub mass_t: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidenceRecord {
    pub supplier: String,
    pub country: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub country: String,
    pub region: String,
    /// Member of the EU aggregate in the fertilizer use data.
    #[serde(default)]
    pub eu: bool,
}

pub fn region_map(records: &[RegionRecord]) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for r in records {
        if let Some(prev) = map.insert(r.country.clone(), r.region.clone()) {
            if prev != r.region {
                return Err(Error::Data(format!(
                    "country {} maps to both {prev} and {}",
                    r.country, r.region
                )));
            }
        }
    }
    Ok(map)
}

/// Flow cell of the compiled table in kt P2O5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowCell {
    pub year: i32,
    pub supplier: String,
    pub region: String,
    pub p2o5_kt: f64,
}

pub type FlowTable = BTreeMap<(i32, String, String), f64>;

pub fn flow_cells(table: &FlowTable) -> Vec<FlowCell> {
    table
        .iter()
        .map(|((year, supplier, region), &v)| FlowCell {
            year: *year,
            supplier: supplier.clone(),
            region: region.clone(),
            p2o5_kt: v,
        })
        .collect()
}

/// Sums converted imports by (year, supplier, importing region). A record
/// counts for a supplier when its partner is one of the supplier's
/// countries of residence; other partners are not international suppliers
/// of the model and end up in local supply. Domestic deliveries are added
/// to the region of the stated residence country.
pub fn compile_trade_flows(
    records: &[TradeFlowRecord],
    residences: &[ResidenceRecord],
    domestic: &[DomesticSupplyRecord],
    regions: &BTreeMap<String, String>,
) -> Result<FlowTable> {
    let mut resident: BTreeMap<&str, &str> = BTreeMap::new();
    for r in residences {
        if let Some(other) = resident.insert(&r.country, &r.supplier) {
            if other != r.supplier {
                return Err(Error::Data(format!(
                    "country {} is the residence of both {other} and {}",
                    r.country, r.supplier
                )));
            }
        }
    }
    let region_of = |country: &str| {
        regions
            .get(country)
            .ok_or_else(|| Error::Data(format!("country {country:?} has no region")))
    };

    let mut seen = BTreeSet::new();
    let mut table = FlowTable::new();
    for r in records {
        if !seen.insert((&r.importer, &r.partner, r.year, r.product)) {
            return Err(Error::Data(format!(
                "duplicate trade record {} <- {} {} {}",
                r.importer, r.partner, r.year, r.product
            )));
        }
        let region = region_of(&r.importer)?;
        let Some(&supplier) = resident.get(r.partner.as_str()) else {
            continue;
        };
        let kt = convert_to_p2o5(r.mass_t, r.product)? / 1000.0;
        *table
            .entry((r.year, supplier.to_string(), region.clone()))
            .or_insert(0.0) += kt;
    }
    for d in domestic {
        if resident.get(d.country.as_str()) != Some(&d.supplier.as_str()) {
            return Err(Error::Data(format!(
                "{} is not a residence country of {}",
                d.country, d.supplier
            )));
        }
        let region = region_of(&d.country)?;
        let kt = convert_to_p2o5(d.mass_t, d.product)? / 1000.0;
        *table
            .entry((d.year, d.supplier.clone(), region.clone()))
            .or_insert(0.0) += kt;
    }
    Ok(table)
}

/// Apparent consumption of DAP/MAP and of all P2O5 fertilizers, kt P2O5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsumptionRecord {
    pub year: i32,
    pub region: String,
    pub dapmap_kt: f64,
    pub p2o5_kt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSupplyRow {
    pub year: i32,
    pub region: String,
    pub consumption_kt: f64,
    pub imports_kt: f64,
    pub local_kt: f64,
    /// Amount by which imports exceeded consumption (local clamped to 0).
    pub residual_kt: f64,
}

/// `local = consumption − Σ imports` per region for every year with trade
/// data; negative values are clamped to zero and the excess logged.
pub fn harmonize_local_supply(
    flows: &FlowTable,
    consumption: &[ConsumptionRecord],
    regions: &BTreeSet<String>,
) -> Result<Vec<LocalSupplyRow>> {
    let years: BTreeSet<i32> = flows.keys().map(|k| k.0).collect();
    let mut cons = BTreeMap::new();
    for c in consumption {
        if cons.insert((c.year, c.region.as_str()), c.dapmap_kt).is_some() {
            return Err(Error::Data(format!(
                "duplicate consumption record {} {}",
                c.region, c.year
            )));
        }
    }
    let mut rows = Vec::new();
    for &year in &years {
        for region in regions {
            let consumption_kt = *cons.get(&(year, region.as_str())).ok_or_else(|| {
                Error::Data(format!("no apparent consumption for {region} in {year}"))
            })?;
            let imports_kt: f64 = flows
                .iter()
                .filter(|((y, _, r), _)| *y == year && r == region)
                .map(|(_, v)| v)
                .sum();
            let gap = consumption_kt - imports_kt;
            if gap < 0.0 {
                log::warn!("{region} {year}: imports exceed consumption by {:.3} kt", -gap);
            }
            rows.push(LocalSupplyRow {
                year,
                region: region.clone(),
                consumption_kt,
                imports_kt,
                local_kt: gap.max(0.0),
                residual_kt: (-gap).max(0.0),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_factors() {
        assert_eq!(convert_to_p2o5(1000.0, ProductKind::Dap).unwrap(), 460.0);
        assert_eq!(convert_to_p2o5(100.0, ProductKind::MapChina).unwrap(), 44.0);
        assert_eq!(convert_to_p2o5(100.0, ProductKind::Map).unwrap(), 52.0);
        assert_eq!(convert_to_p2o5(100.0, ProductKind::DapMapMix).unwrap(), 49.0);
        assert_eq!(convert_to_p2o5(0.0, ProductKind::Dap).unwrap(), 0.0);
        assert!(convert_to_p2o5(-1.0, ProductKind::Dap).is_err());
        assert!("TSP".parse::<ProductKind>().is_err());
    }

    fn regions() -> BTreeMap<String, String> {
        [("IN", "South Asia"), ("BD", "South Asia"), ("US", "North America"), ("MA", "Africa")]
            .iter()
            .map(|(c, r)| (c.to_string(), r.to_string()))
            .collect()
    }

    fn residences() -> Vec<ResidenceRecord> {
        vec![
            ResidenceRecord { supplier: "OCP".into(), country: "MA".into() },
            ResidenceRecord { supplier: "Mosaic".into(), country: "US".into() },
        ]
    }

    fn rec(importer: &str, partner: &str, product: ProductKind, mass_t: f64) -> TradeFlowRecord {
        TradeFlowRecord {
            year: 2015,
            importer: importer.into(),
            partner: partner.into(),
            product,
            mass_t,
        }
    }

    #[test]
    fn empty_input_gives_empty_table() {
        let t = compile_trade_flows(&[], &residences(), &[], &regions()).unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn rows_into_one_region_are_summed() {
        let records = vec![
            rec("IN", "MA", ProductKind::Dap, 1000.0),
            rec("BD", "MA", ProductKind::Map, 500.0),
            rec("IN", "XX", ProductKind::Dap, 700.0),
        ];
        let t = compile_trade_flows(&records, &residences(), &[], &regions()).unwrap();
        assert_eq!(t.len(), 1);
        let v = t[&(2015, "OCP".to_string(), "South Asia".to_string())];
        assert!((v - (0.46 + 0.26)).abs() < 1e-12);
    }

    #[test]
    fn domestic_supply_goes_to_residence_region() {
        let domestic = vec![DomesticSupplyRecord {
            year: 2015,
            supplier: "Mosaic".into(),
            country: "US".into(),
            product: ProductKind::Dap,
            mass_t: 2000.0,
        }];
        let t = compile_trade_flows(&[], &residences(), &domestic, &regions()).unwrap();
        assert_eq!(t[&(2015, "Mosaic".to_string(), "North America".to_string())], 0.92);
        let mut wrong = domestic.clone();
        wrong[0].country = "MA".into();
        assert!(compile_trade_flows(&[], &residences(), &wrong, &regions()).is_err());
    }

    #[test]
    fn unmapped_and_duplicate_rows_fail() {
        let unmapped = vec![rec("ZZ", "MA", ProductKind::Dap, 1.0)];
        assert!(compile_trade_flows(&unmapped, &residences(), &[], &regions()).is_err());
        let dup = vec![rec("IN", "MA", ProductKind::Dap, 1.0), rec("IN", "MA", ProductKind::Dap, 2.0)];
        assert!(compile_trade_flows(&dup, &residences(), &[], &regions()).is_err());
    }

    #[test]
    fn harmonization_cases() {
        let mut flows = FlowTable::new();
        flows.insert((2015, "OCP".into(), "Africa".into()), 15.0);
        flows.insert((2015, "OCP".into(), "South Asia".into()), 40.0);
        let regions: BTreeSet<String> =
            ["Africa", "North America", "South Asia"].iter().map(|s| s.to_string()).collect();
        let cons = vec![
            ConsumptionRecord { year: 2015, region: "Africa".into(), dapmap_kt: 10.0, p2o5_kt: 20.0 },
            ConsumptionRecord { year: 2015, region: "North America".into(), dapmap_kt: 30.0, p2o5_kt: 50.0 },
            ConsumptionRecord { year: 2015, region: "South Asia".into(), dapmap_kt: 40.0, p2o5_kt: 90.0 },
        ];
        let rows = harmonize_local_supply(&flows, &cons, &regions).unwrap();
        assert_eq!((rows[0].local_kt, rows[0].residual_kt), (0.0, 5.0));
        assert_eq!((rows[1].local_kt, rows[1].residual_kt), (30.0, 0.0));
        assert_eq!((rows[2].local_kt, rows[2].residual_kt), (0.0, 0.0));
        assert!(harmonize_local_supply(&flows, &cons[..2], &regions).is_err());
    }
}
