//! Ranked top-k lists and their empirical survival functions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Income,
    Wealth,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Income => "income",
            Kind::Wealth => "wealth",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownKind(pub String);

impl fmt::Display for UnknownKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown kind {:?} (expected income or wealth)", self.0)
    }
}

impl std::error::Error for UnknownKind {}

impl FromStr for Kind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("income") {
            Ok(Kind::Income)
        } else if t.eq_ignore_ascii_case("wealth") {
            Ok(Kind::Wealth)
        } else {
            Err(UnknownKind(s.to_string()))
        }
    }
}

/// Identifies one ranking list: a region, a year and income or wealth.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupKey {
    pub region: String,
    pub year: i32,
    pub kind: Kind,
}

impl GroupKey {
    pub fn new(region: impl Into<String>, year: i32, kind: Kind) -> Self {
        Self {
            region: region.into(),
            year,
            kind,
        }
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.region, self.year, self.kind)
    }
}

/// Positive values sorted in nonincreasing order; rank 1 is the largest.
#[derive(Debug, Clone, PartialEq)]
pub struct RankList {
    key: GroupKey,
    values: Vec<f64>,
    /// Size of the full underlying population, when known.
    pub population_note: Option<u64>,
}

fn check_positive(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    match values
        .iter()
        .position(|v| !(v.is_finite() && *v > 0.0))
    {
        Some(index) => Err(Error::InvalidValue {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

impl RankList {
    /// Build from values in any order.
    pub fn from_values(key: GroupKey, raw: Vec<f64>) -> Result<Self> {
        check_positive(&raw)?;
        let mut values = raw;
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self {
            key,
            values,
            population_note: None,
        })
    }

    /// Build from values already in nonincreasing order.
    pub fn from_sorted(key: GroupKey, values: Vec<f64>) -> Result<Self> {
        check_positive(&values)?;
        if let Some(i) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::Unsorted { index: i + 1 });
        }
        Ok(Self {
            key,
            values,
            population_note: None,
        })
    }

    pub fn key(&self) -> &GroupKey {
        &self.key
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn distinct_count(&self) -> usize {
        if self.values.is_empty() {
            return 0;
        }
        1 + self.values.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Keep the `k` largest values.
    pub fn truncate_top(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain {
                name: "k",
                value: 0.0,
                domain: "k >= 1",
            });
        }
        let n = k.min(self.values.len());
        Ok(Self {
            key: self.key.clone(),
            values: self.values[..n].to_vec(),
            population_note: self.population_note,
        })
    }

    /// `(ln r, ln m_r)` for `r = 1..=N`.
    pub fn plot_points(&self) -> Vec<(f64, f64)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (((i + 1) as f64).ln(), v.ln()))
            .collect()
    }

    /// Step estimator `r/N` evaluated at each distinct value.
    pub fn empirical_ccdf(&self) -> EmpiricalCcdf {
        let n = self.values.len();
        let mut points: Vec<CcdfPoint> = Vec::new();
        for (i, &value) in self.values.iter().enumerate() {
            let rank = i + 1;
            match points.last_mut() {
                Some(last) if last.value == value => {
                    last.rank = rank;
                    last.probability = rank as f64 / n as f64;
                }
                _ => points.push(CcdfPoint {
                    value,
                    rank,
                    probability: rank as f64 / n as f64,
                }),
            }
        }
        EmpiricalCcdf { n, points }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcdfPoint {
    pub value: f64,
    /// Largest rank among entries equal to `value`.
    pub rank: usize,
    pub probability: f64,
}

/// Points ordered by decreasing value (increasing probability).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCcdf {
    pub n: usize,
    pub points: Vec<CcdfPoint>,
}

impl EmpiricalCcdf {
    /// Largest absolute gap to a reference survival function, checked on
    /// both sides of every step.
    pub fn max_deviation(&self, reference: impl Fn(f64) -> f64) -> f64 {
        let mut prev = 0.0;
        let mut worst: f64 = 0.0;
        for p in &self.points {
            let s = reference(p.value);
            worst = worst.max((s - p.probability).abs()).max((s - prev).abs());
            prev = p.probability;
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn key() -> GroupKey {
        GroupKey::new("Hedmark", 2013, Kind::Wealth)
    }

    #[test]
    fn from_values_sorts() {
        let l = RankList::from_values(key(), vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(l.values(), &[3.0, 2.0, 1.0]);
        let l = RankList::from_values(key(), vec![5.0]).unwrap();
        assert_eq!(l.values(), &[5.0]);
    }

    #[test]
    fn from_values_rejects() {
        assert_eq!(
            RankList::from_values(key(), vec![1.0, -2.0, 3.0]),
            Err(Error::InvalidValue {
                index: 1,
                value: -2.0
            })
        );
        assert_eq!(
            RankList::from_values(key(), vec![]),
            Err(Error::EmptyInput)
        );
        assert!(RankList::from_values(key(), vec![1.0, 0.0]).is_err());
        assert!(RankList::from_values(key(), vec![f64::NAN]).is_err());
    }

    #[test]
    fn from_sorted_checks_order() {
        assert_eq!(
            RankList::from_sorted(key(), vec![3.0, 1.0, 2.0]),
            Err(Error::Unsorted { index: 2 })
        );
    }

    #[test]
    fn ccdf_examples() {
        let c = RankList::from_values(key(), vec![4.0, 2.0, 1.0])
            .unwrap()
            .empirical_ccdf();
        let pts: Vec<(f64, f64)> = c.points.iter().map(|p| (p.value, p.probability)).collect();
        assert_eq!(pts, vec![(4.0, 1.0 / 3.0), (2.0, 2.0 / 3.0), (1.0, 1.0)]);

        let c = RankList::from_values(key(), vec![3.0, 3.0, 1.0])
            .unwrap()
            .empirical_ccdf();
        let pts: Vec<(f64, f64)> = c.points.iter().map(|p| (p.value, p.probability)).collect();
        assert_eq!(pts, vec![(3.0, 2.0 / 3.0), (1.0, 1.0)]);
    }

    #[test]
    fn truncation() {
        let l = RankList::from_values(key(), vec![9.0, 8.0, 7.0]).unwrap();
        assert_eq!(l.truncate_top(2).unwrap().values(), &[9.0, 8.0]);
        assert_eq!(l.truncate_top(10).unwrap().values(), &[9.0, 8.0, 7.0]);
        assert_eq!(l.truncate_top(3).unwrap(), l);
        assert!(l.truncate_top(0).is_err());
        let c = l.truncate_top(2).unwrap().empirical_ccdf();
        assert_eq!(c.n, 2);
        assert_eq!(c.points.last().unwrap().probability, 1.0);
    }

    #[test]
    fn plot_point_examples() {
        let l = RankList::from_values(key(), vec![E, E * E]).unwrap();
        let pts = l.plot_points();
        assert_eq!(pts[0], (0.0, 2.0));
        assert!((pts[1].0 - 2f64.ln()).abs() < 1e-15);
        assert!((pts[1].1 - 1.0).abs() < 1e-15);
        let l = RankList::from_values(key(), vec![1.0]).unwrap();
        assert_eq!(l.plot_points(), vec![(0.0, 0.0)]);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("INCOME".parse::<Kind>().unwrap(), Kind::Income);
        assert_eq!(" Wealth ".parse::<Kind>().unwrap(), Kind::Wealth);
        assert!("assets".parse::<Kind>().is_err());
    }
}
