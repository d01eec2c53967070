//! Tables of fitted exponents keyed by (region, year, kind), and the
//! summary statistics computed over them.
//!
//! Summaries labelled "regions" skip the national aggregate row, whose label
//! is configurable and defaults to [`DEFAULT_AGGREGATE_LABEL`].

use std::collections::{BTreeMap, BTreeSet};
use std::io;

use crate::empirical::{GroupKey, Kind};
use crate::error::{Error, Result};

pub const DEFAULT_AGGREGATE_LABEL: &str = "NORWAY";

const REFERENCE_CSV: &str = include_str!("../data/reference_exponents.csv");

/// Printed region mean and dispersion for each (year, kind) column of the
/// reference table.
pub const PUBLISHED_COLUMN_SUMMARIES: [(i32, Kind, f64, f64); 8] = [
    (2010, Kind::Income, 2.23, 0.37),
    (2010, Kind::Wealth, 1.54, 0.34),
    (2011, Kind::Income, 2.16, 0.43),
    (2011, Kind::Wealth, 1.52, 0.31),
    (2012, Kind::Income, 2.15, 0.40),
    (2012, Kind::Wealth, 1.52, 0.30),
    (2013, Kind::Income, 2.27, 0.38),
    (2013, Kind::Wealth, 1.59, 0.32),
];

/// Published four-year mean exponent and its spread.
pub const PUBLISHED_FOUR_YEAR: [(Kind, f64, f64); 2] = [(Kind::Income, 2.3, 0.4), (Kind::Wealth, 1.5, 0.3)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentRow {
    pub alpha: f64,
    pub stderr: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExponentTable {
    rows: BTreeMap<GroupKey, ExponentRow>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub mean: f64,
    /// Population (divide-by-n) standard deviation.
    pub dispersion: f64,
    pub n: usize,
}

impl SummaryStats {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        Some(Self {
            mean,
            dispersion: (ss / n as f64).sqrt(),
            n,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub region: String,
    pub year: i32,
    pub income_alpha: f64,
    pub wealth_alpha: f64,
    /// Strictly lower; ties count as not lower.
    pub wealth_lower: bool,
}

impl ExponentTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Exponents for the 19 regions and the national total, 2010-2013.
    pub fn reference() -> Self {
        Self::from_csv_reader(REFERENCE_CSV.as_bytes())
            .expect("bundled reference table is well formed")
    }

    pub fn reference_csv() -> &'static str {
        REFERENCE_CSV
    }

    pub fn insert(&mut self, key: GroupKey, row: ExponentRow) -> Result<()> {
        if self.rows.contains_key(&key) {
            return Err(Error::DuplicateRow(key.to_string()));
        }
        self.rows.insert(key, row);
        Ok(())
    }

    pub fn get(&self, key: &GroupKey) -> Option<&ExponentRow> {
        self.rows.get(key)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows in sorted key order.
    pub fn iter(&self) -> impl Iterator<Item = (&GroupKey, &ExponentRow)> {
        self.rows.iter()
    }

    pub fn years(&self) -> BTreeSet<i32> {
        self.rows.keys().map(|k| k.year).collect()
    }

    pub fn regions(&self) -> BTreeSet<&str> {
        self.rows.keys().map(|k| k.region.as_str()).collect()
    }

    fn region_alphas<'a>(
        &'a self,
        aggregate_label: &'a str,
        pred: impl Fn(&GroupKey) -> bool + 'a,
    ) -> impl Iterator<Item = (&'a GroupKey, f64)> + 'a {
        self.rows
            .iter()
            .filter(move |(k, _)| k.region != aggregate_label && pred(k))
            .map(|(k, r)| (k, r.alpha))
    }

    /// Mean and dispersion over regions for one (year, kind) column.
    pub fn summarize_regions(&self, year: i32, kind: Kind) -> Result<SummaryStats> {
        self.summarize_regions_excluding(year, kind, DEFAULT_AGGREGATE_LABEL)
    }

    pub fn summarize_regions_excluding(
        &self,
        year: i32,
        kind: Kind,
        aggregate_label: &str,
    ) -> Result<SummaryStats> {
        let v: Vec<f64> = self
            .region_alphas(aggregate_label, |k| k.year == year && k.kind == kind)
            .map(|(_, a)| a)
            .collect();
        SummaryStats::from_values(&v)
            .ok_or_else(|| Error::EmptySelection(format!("no region rows for {year} {kind}")))
    }

    /// Mean and dispersion pooled over every region-year row of one kind.
    pub fn four_year_summary(&self, kind: Kind) -> Result<SummaryStats> {
        self.pooled_summary_excluding(kind, DEFAULT_AGGREGATE_LABEL)
    }

    pub fn pooled_summary_excluding(&self, kind: Kind, aggregate_label: &str) -> Result<SummaryStats> {
        let v: Vec<f64> = self
            .region_alphas(aggregate_label, |k| k.kind == kind)
            .map(|(_, a)| a)
            .collect();
        SummaryStats::from_values(&v)
            .ok_or_else(|| Error::EmptySelection(format!("no region rows for {kind}")))
    }

    /// Income against wealth for every (region, year) holding both kinds.
    pub fn compare_income_wealth(&self) -> Result<Vec<Comparison>> {
        self.compare_income_wealth_excluding(DEFAULT_AGGREGATE_LABEL)
    }

    pub fn compare_income_wealth_excluding(&self, aggregate_label: &str) -> Result<Vec<Comparison>> {
        let mut out = Vec::new();
        for (k, inc) in self.region_alphas(aggregate_label, |k| k.kind == Kind::Income) {
            let wk = GroupKey::new(k.region.clone(), k.year, Kind::Wealth);
            if let Some(w) = self.rows.get(&wk) {
                out.push(Comparison {
                    region: k.region.clone(),
                    year: k.year,
                    income_alpha: inc,
                    wealth_alpha: w.alpha,
                    wealth_lower: w.alpha < inc,
                });
            }
        }
        if out.is_empty() {
            return Err(Error::EmptySelection(
                "no (region, year) has both income and wealth rows".into(),
            ));
        }
        Ok(out)
    }

    /// Mean over regions of each region's population standard deviation of
    /// alpha across years. Regions seen in fewer than two years are skipped.
    pub fn temporal_fluctuation(&self, kind: Kind) -> Result<f64> {
        self.temporal_fluctuation_excluding(kind, DEFAULT_AGGREGATE_LABEL)
    }

    pub fn temporal_fluctuation_excluding(&self, kind: Kind, aggregate_label: &str) -> Result<f64> {
        let mut by_region: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for (k, a) in self.region_alphas(aggregate_label, |k| k.kind == kind) {
            by_region.entry(k.region.as_str()).or_default().push(a);
        }
        let sds: Vec<f64> = by_region
            .values()
            .filter(|v| v.len() >= 2)
            .filter_map(|v| SummaryStats::from_values(v))
            .map(|s| s.dispersion)
            .collect();
        if sds.is_empty() {
            return Err(Error::EmptySelection(format!(
                "no region has {kind} rows for two or more years"
            )));
        }
        Ok(sds.iter().sum::<f64>() / sds.len() as f64)
    }

    /// Read `region,year,kind,alpha[,stderr]` rows with a header. Rows with
    /// an empty `alpha` (groups that could not be fitted) are skipped.
    pub fn from_csv_reader<R: io::Read>(rdr: R) -> Result<Self> {
        Self::from_csv(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(rdr))
    }

    pub fn from_csv<R: io::Read>(mut rdr: csv::Reader<R>) -> Result<Self> {
        let headers = rdr.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
        let missing: Vec<&str> = ["region", "year", "kind", "alpha"]
            .into_iter()
            .filter(|c| col(c).is_none())
            .collect();
        if !missing.is_empty() {
            return Err(Error::Csv(format!("missing columns: {}", missing.join(", "))));
        }
        let (ci, cy, ck, ca) = (
            col("region").unwrap(),
            col("year").unwrap(),
            col("kind").unwrap(),
            col("alpha").unwrap(),
        );
        let cs = col("stderr");
        let mut table = Self::new();
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            let field = |i: usize| rec.get(i).unwrap_or("");
            let bad = |what: &str, v: &str| Error::Csv(format!("line {line}: invalid {what} {v:?}"));
            if field(ca).is_empty() {
                continue;
            }
            let year: i32 = field(cy).parse().map_err(|_| bad("year", field(cy)))?;
            let kind: Kind = field(ck).parse().map_err(|_| bad("kind", field(ck)))?;
            let alpha: f64 = field(ca).parse().map_err(|_| bad("alpha", field(ca)))?;
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(bad("alpha", field(ca)));
            }
            let stderr = match cs.map(field) {
                None | Some("") => None,
                Some(s) => Some(s.parse::<f64>().map_err(|_| bad("stderr", s))?),
            };
            table.insert(GroupKey::new(field(ci), year, kind), ExponentRow { alpha, stderr })?;
        }
        Ok(table)
    }

    /// Write rows in sorted key order. `alpha` uses the shortest
    /// representation that round-trips.
    pub fn to_csv_writer<W: io::Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["region", "year", "kind", "alpha", "stderr"])?;
        for (k, r) in &self.rows {
            wtr.write_record([
                k.region.clone(),
                k.year.to_string(),
                k.kind.to_string(),
                r.alpha.to_string(),
                r.stderr.map(|s| s.to_string()).unwrap_or_default(),
            ])?;
        }
        wtr.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(alpha: f64) -> ExponentRow {
        ExponentRow {
            alpha,
            stderr: None,
        }
    }

    #[test]
    fn reference_shape() {
        let t = ExponentTable::reference();
        assert_eq!(t.len(), 160);
        assert_eq!(t.regions().len(), 20);
        assert_eq!(t.years().into_iter().collect::<Vec<_>>(), vec![2010, 2011, 2012, 2013]);
    }

    #[test]
    fn published_columns_reproduce() {
        let t = ExponentTable::reference();
        for (y, k, mean, disp) in PUBLISHED_COLUMN_SUMMARIES {
            let s = t.summarize_regions(y, k).unwrap();
            assert!((s.mean - mean).abs() <= 0.02, "{y} {k}");
            assert!((s.dispersion - disp).abs() <= 0.02, "{y} {k}");
        }
    }

    #[test]
    fn column_summaries() {
        let t = ExponentTable::reference();
        let s = t.summarize_regions(2010, Kind::Income).unwrap();
        assert_eq!(s.n, 19);
        assert!((s.mean - 2.23).abs() <= 0.02);
        assert!((s.dispersion - 0.37).abs() <= 0.02);
        let s = t.summarize_regions(2013, Kind::Wealth).unwrap();
        assert!((s.mean - 1.59).abs() <= 0.02);
        assert!((s.dispersion - 0.32).abs() <= 0.02);
        assert!(t.summarize_regions(1999, Kind::Wealth).is_err());
    }

    #[test]
    fn single_row_has_zero_dispersion() {
        let mut t = ExponentTable::new();
        t.insert(GroupKey::new("Oslo", 2010, Kind::Income), row(1.53)).unwrap();
        let s = t.summarize_regions(2010, Kind::Income).unwrap();
        assert_eq!((s.mean, s.dispersion, s.n), (1.53, 0.0, 1));
    }

    #[test]
    fn aggregate_row_excluded() {
        let mut t = ExponentTable::new();
        t.insert(GroupKey::new("NORWAY", 2010, Kind::Income), row(1.69)).unwrap();
        assert!(t.summarize_regions(2010, Kind::Income).is_err());
        assert!(t.four_year_summary(Kind::Income).is_err());
        let s = t.summarize_regions_excluding(2010, Kind::Income, "none").unwrap();
        assert_eq!(s.mean, 1.69);
    }

    #[test]
    fn pooled_constant_rows() {
        let mut t = ExponentTable::new();
        for y in 2010..2014 {
            t.insert(GroupKey::new("Troms", y, Kind::Wealth), row(1.45)).unwrap();
        }
        let s = t.four_year_summary(Kind::Wealth).unwrap();
        assert_eq!((s.mean, s.dispersion, s.n), (1.45, 0.0, 4));
        assert_eq!(t.temporal_fluctuation(Kind::Wealth).unwrap(), 0.0);
    }

    #[test]
    fn fluctuation_needs_two_years() {
        let mut t = ExponentTable::new();
        t.insert(GroupKey::new("Troms", 2011, Kind::Income), row(1.23)).unwrap();
        t.insert(GroupKey::new("Oslo", 2011, Kind::Income), row(1.9)).unwrap();
        assert!(matches!(
            t.temporal_fluctuation(Kind::Income),
            Err(Error::EmptySelection(_))
        ));
    }

    #[test]
    fn comparison_examples() {
        let t = ExponentTable::reference();
        let c = t.compare_income_wealth().unwrap();
        assert_eq!(c.len(), 76);
        let find = |r: &str, y: i32| c.iter().find(|x| x.region == r && x.year == y).unwrap();
        let a = find("Akershus", 2010);
        assert_eq!((a.income_alpha, a.wealth_alpha, a.wealth_lower), (2.45, 1.14, true));
        let h = find("Hedmark", 2012);
        assert_eq!((h.income_alpha, h.wealth_alpha, h.wealth_lower), (1.14, 1.66, false));
        // tie counts as not lower
        assert!(!find("Møre Og Romsdal", 2011).wealth_lower);
        assert!(ExponentTable::new().compare_income_wealth().is_err());
    }

    #[test]
    fn duplicate_rows_rejected() {
        let mut t = ExponentTable::new();
        let k = GroupKey::new("Oslo", 2010, Kind::Income);
        t.insert(k.clone(), row(1.0)).unwrap();
        assert!(matches!(t.insert(k, row(2.0)), Err(Error::DuplicateRow(_))));
    }

    #[test]
    fn csv_missing_column() {
        let e = ExponentTable::from_csv_reader("region,year,alpha\nOslo,2010,1.5\n".as_bytes()).unwrap_err();
        assert!(e.to_string().contains("kind"));
    }
}
