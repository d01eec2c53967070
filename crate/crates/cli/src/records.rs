//! `region,year,kind,rank,value` rows and their grouping into rank lists.

use std::collections::BTreeMap;
use std::io;

use tailfit::{GroupKey, Kind, RankList};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RecordRow {
    pub region: String,
    pub year: i32,
    pub kind: Kind,
    pub rank: Option<u64>,
    pub value: f64,
    /// 1-based line in the input file.
    pub line: u64,
}

pub fn reader<R: io::Read>(input: R, delimiter: u8) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn csv_error(e: csv::Error) -> CliError {
    let line = e.position().map(|p| p.line());
    match line {
        Some(l) => CliError::Input(format!("line {l}: {e}")),
        None => CliError::Input(e.to_string()),
    }
}

pub fn read_records<R: io::Read>(mut rdr: csv::Reader<R>) -> Result<Vec<RecordRow>, CliError> {
    let headers = match rdr.headers() {
        Ok(h) if h.iter().any(|f| !f.is_empty()) => h.clone(),
        Ok(_) => return Err(CliError::Input("no records".into())),
        Err(e) => return Err(csv_error(e)),
    };
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let missing: Vec<&str> = ["region", "year", "kind", "value"]
        .into_iter()
        .filter(|c| col(c).is_none())
        .collect();
    if !missing.is_empty() {
        return Err(CliError::Input(format!(
            "line 1: missing columns: {}",
            missing.join(", ")
        )));
    }
    let (ci, cy, ck, cv) = (
        col("region").unwrap(),
        col("year").unwrap(),
        col("kind").unwrap(),
        col("value").unwrap(),
    );
    let cr = col("rank");

    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| rec.get(i).unwrap_or("");
        let bad = |what: &str, v: &str| CliError::Input(format!("line {line}: invalid {what} {v:?}"));

        let year: i32 = field(cy).parse().map_err(|_| bad("year", field(cy)))?;
        let kind: Kind = field(ck).parse().map_err(|_| bad("kind", field(ck)))?;
        let value: f64 = field(cv).parse().map_err(|_| bad("value", field(cv)))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(bad("value", field(cv)));
        }
        let rank = match cr.map(field) {
            None | Some("") => None,
            Some(s) => match s.parse::<u64>() {
                Ok(r) if r >= 1 => Some(r),
                _ => return Err(bad("rank", s)),
            },
        };
        rows.push(RecordRow {
            region: field(ci).to_string(),
            year,
            kind,
            rank,
            value,
            line,
        });
    }
    if rows.is_empty() {
        return Err(CliError::Input("no records".into()));
    }
    Ok(rows)
}

/// Group rows by key (sorted) and check any supplied ranks: within a group
/// they must be a permutation of `1..=N` that orders values descending.
pub fn group(rows: Vec<RecordRow>) -> Result<BTreeMap<GroupKey, RankList>, CliError> {
    let mut groups: BTreeMap<GroupKey, Vec<RecordRow>> = BTreeMap::new();
    for r in rows {
        groups
            .entry(GroupKey::new(r.region.clone(), r.year, r.kind))
            .or_default()
            .push(r);
    }
    let mut out = BTreeMap::new();
    for (key, mut rows) in groups {
        let ranked = rows.iter().filter(|r| r.rank.is_some()).count();
        if ranked > 0 {
            if ranked != rows.len() {
                return Err(CliError::Input(format!(
                    "group {key}: rank given for some rows but not all"
                )));
            }
            rows.sort_by_key(|r| r.rank);
            for (i, r) in rows.iter().enumerate() {
                if r.rank != Some(i as u64 + 1) {
                    return Err(CliError::Input(format!(
                        "line {}: group {key}: ranks are not a permutation of 1..{}",
                        r.line,
                        rows.len()
                    )));
                }
            }
            if let Some(w) = rows.windows(2).find(|w| w[0].value < w[1].value) {
                return Err(CliError::Input(format!(
                    "line {}: group {key}: rank {} has a larger value than rank {}",
                    w[1].line,
                    w[1].rank.unwrap(),
                    w[0].rank.unwrap()
                )));
            }
        }
        let values = rows.iter().map(|r| r.value).collect();
        let list = RankList::from_values(key.clone(), values)
            .map_err(|e| CliError::Input(format!("group {key}: {e}")))?;
        out.insert(key, list);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Vec<RecordRow>, CliError> {
        read_records(reader(s.as_bytes(), b','))
    }

    #[test]
    fn parses_with_and_without_rank() {
        let rows = parse("region,year,kind,rank,value\nOslo,2013,Income,1,5.5\nOslo,2013,income,,2\n").unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].rank, Some(1));
        assert_eq!(rows[1].rank, None);
        assert_eq!(rows[1].line, 3);
        let rows = parse("kind,value,region,year\nwealth,3,Troms,2011\n").unwrap();
        assert_eq!(rows[0].kind, Kind::Wealth);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse("region,year,kind,value\nA,2010,income,1\nA,2010,income,-4\n").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = parse("region,year,kind,value\nA,20x0,income,1\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = parse("region,year,kind,value\nA,2010,assets,1\n").unwrap_err();
        assert!(e.to_string().contains("kind"), "{e}");
        let e = parse("region,year,value\nA,2010,1\n").unwrap_err();
        assert!(e.to_string().contains("missing columns: kind"), "{e}");
    }

    #[test]
    fn empty_input() {
        assert!(parse("").unwrap_err().to_string().contains("no records"));
        assert!(parse("region,year,kind,value\n").unwrap_err().to_string().contains("no records"));
    }

    #[test]
    fn rank_consistency() {
        let ok = parse("region,year,kind,rank,value\nA,1,income,2,1\nA,1,income,1,3\n").unwrap();
        let g = group(ok).unwrap();
        assert_eq!(g.values().next().unwrap().values(), &[3.0, 1.0]);
        let gap = parse("region,year,kind,rank,value\nA,1,income,1,3\nA,1,income,3,1\n").unwrap();
        assert!(group(gap).is_err());
        let inverted = parse("region,year,kind,rank,value\nA,1,income,1,1\nA,1,income,2,3\n").unwrap();
        assert!(group(inverted).unwrap_err().to_string().contains("larger value"));
    }

    #[test]
    fn opaque_utf8_regions() {
        let rows = parse("region,year,kind,value\nØstfold,2013,wealth,4\nSør Trøndelag,2013,wealth,2\n").unwrap();
        let g = group(rows).unwrap();
        let names: Vec<&str> = g.keys().map(|k| k.region.as_str()).collect();
        assert_eq!(names, vec!["Sør Trøndelag", "Østfold"]);
    }
}
