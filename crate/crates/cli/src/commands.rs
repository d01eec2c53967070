use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use tailfit::aggregate::{PUBLISHED_COLUMN_SUMMARIES, PUBLISHED_FOUR_YEAR};
use tailfit::{
    bootstrap_ci, fit_hill, fit_rank_regression, generate_exact_ranksize, generate_ranklist,
    ExponentTable, GroupKey, Kind, Method, ParetoParams, RankList,
};

use crate::error::CliError;
use crate::output::{write_rows, Format, Precision};
use crate::records;
use crate::{Command, FitArgs, GroupArgs, PlotArgs, RanksizeArgs, SampleArgs, Streams, SummarizeArgs};

pub fn dispatch(command: Command, streams: &mut Streams<'_>) -> Result<(), CliError> {
    match command {
        Command::Fit(a) => fit(&a, streams),
        Command::Summarize(a) => summarize(&a, streams),
        Command::PlotData(a) => plot_data(&a, streams),
        Command::Sample(a) => sample(&a, streams),
        Command::Ranksize(a) => ranksize(&a, streams),
    }
}

fn read_groups(
    streams: &mut Streams<'_>,
    io: &crate::IoArgs,
) -> Result<BTreeMap<GroupKey, RankList>, CliError> {
    let input = streams.open_input(&io.input)?;
    let rows = records::read_records(records::reader(input, io.delimiter))?;
    records::group(rows)
}

#[derive(Debug, Serialize)]
struct FitRow {
    region: String,
    year: i32,
    kind: &'static str,
    method: &'static str,
    n: usize,
    alpha: Option<f64>,
    stderr: Option<f64>,
    alpha_rank: Option<f64>,
    intercept: Option<f64>,
    r_squared: Option<f64>,
    m_min: Option<f64>,
    ci_lower: Option<f64>,
    ci_upper: Option<f64>,
    ci_level: Option<f64>,
    error: Option<String>,
}

impl FitRow {
    fn empty(key: &GroupKey, method: Method, n: usize) -> Self {
        Self {
            region: key.region.clone(),
            year: key.year,
            kind: key.kind.as_str(),
            method: match method {
                Method::RankRegression => "rank",
                Method::Hill => "hill",
            },
            n,
            alpha: None,
            stderr: None,
            alpha_rank: None,
            intercept: None,
            r_squared: None,
            m_min: None,
            ci_lower: None,
            ci_upper: None,
            ci_level: None,
            error: None,
        }
    }
}

fn fit_group(list: &RankList, args: &FitArgs) -> FitRow {
    let method: Method = args.method.into();
    let p = args.precision;
    let mut row = FitRow::empty(list.key(), method, list.len());
    let point = match method {
        Method::RankRegression => fit_rank_regression(list).map(|f| {
            row.alpha = Some(p.round(f.alpha));
            row.stderr = Some(p.round(f.stderr_alpha));
            row.alpha_rank = Some(p.round(f.alpha_rank));
            row.intercept = Some(p.round(f.intercept));
            row.r_squared = Some(p.round(f.r_squared));
        }),
        Method::Hill => fit_hill(list, None).map(|f| {
            row.alpha = Some(p.round(f.alpha_hat));
            row.stderr = Some(p.round(f.stderr));
            row.m_min = Some(p.round(f.m_min));
        }),
    };
    if let Err(e) = point {
        row.error = Some(e.to_string());
        return row;
    }
    if let Some(b) = args.bootstrap {
        match bootstrap_ci(list, method, b, args.level, args.seed) {
            Ok(ci) => {
                row.ci_lower = Some(p.round(ci.lower));
                row.ci_upper = Some(p.round(ci.upper));
                row.ci_level = Some(ci.level);
            }
            Err(e) => row.error = Some(e.to_string()),
        }
    }
    row
}

fn fit(args: &FitArgs, streams: &mut Streams<'_>) -> Result<(), CliError> {
    if let Some(0) = args.bootstrap {
        return Err(CliError::Input("--bootstrap needs at least 1 replicate".into()));
    }
    if !(args.level > 0.0 && args.level < 1.0) {
        return Err(CliError::Input(format!("--level {} is outside (0, 1)", args.level)));
    }
    let groups = read_groups(streams, &args.io)?;
    let rows: Vec<FitRow> = groups.values().map(|l| fit_group(l, args)).collect();
    let failed = rows.iter().filter(|r| r.error.is_some()).count();

    let out = streams.open_output(&args.io.output)?;
    write_rows(out, args.io.format, args.io.delimiter, &rows)?;
    for r in rows.iter().filter(|r| r.error.is_some()) {
        let _ = writeln!(
            streams.stderr,
            "tailfit: {}/{}/{}: {}",
            r.region,
            r.year,
            r.kind,
            r.error.as_deref().unwrap_or_default()
        );
    }
    match failed {
        0 => Ok(()),
        f if f == rows.len() => Err(CliError::NoResult("no group could be fitted".into())),
        f => Err(CliError::Partial {
            failed: f,
            total: rows.len(),
        }),
    }
}

#[derive(Debug, Default, Serialize)]
struct SummaryRow {
    section: &'static str,
    region: Option<String>,
    year: Option<i32>,
    kind: Option<&'static str>,
    n: Option<usize>,
    mean: Option<f64>,
    dispersion: Option<f64>,
    income_alpha: Option<f64>,
    wealth_alpha: Option<f64>,
    wealth_lower: Option<bool>,
    value: Option<f64>,
    published: Option<f64>,
    note: Option<String>,
}

fn summarize(args: &SummarizeArgs, streams: &mut Streams<'_>) -> Result<(), CliError> {
    let table = if args.reference {
        ExponentTable::reference()
    } else {
        let input = streams.open_input(&args.io.input)?;
        ExponentTable::from_csv(records::reader(input, args.io.delimiter))
            .map_err(|e| CliError::Input(e.to_string()))?
    };
    let rows = summary_rows(&table, &args.aggregate_label, args.precision)?;
    let out = streams.open_output(&args.io.output)?;
    write_rows(out, args.io.format, args.io.delimiter, &rows)
}

fn summary_rows(
    table: &ExponentTable,
    label: &str,
    p: Precision,
) -> Result<Vec<SummaryRow>, CliError> {
    let kinds = [Kind::Income, Kind::Wealth];
    let mut rows = Vec::new();
    for year in table.years() {
        for kind in kinds {
            if let Ok(s) = table.summarize_regions_excluding(year, kind, label) {
                rows.push(SummaryRow {
                    section: "regions",
                    year: Some(year),
                    kind: Some(kind.as_str()),
                    n: Some(s.n),
                    mean: Some(p.round(s.mean)),
                    dispersion: Some(p.round(s.dispersion)),
                    ..Default::default()
                });
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::NoResult(format!(
            "no region rows besides the aggregate label {label:?}"
        )));
    }

    let mut pooled = BTreeMap::new();
    for kind in kinds {
        if let Ok(s) = table.pooled_summary_excluding(kind, label) {
            pooled.insert(kind, s);
            rows.push(SummaryRow {
                section: "pooled",
                kind: Some(kind.as_str()),
                n: Some(s.n),
                mean: Some(p.round(s.mean)),
                dispersion: Some(p.round(s.dispersion)),
                ..Default::default()
            });
        }
    }

    let mut fluctuation = BTreeMap::new();
    for kind in kinds {
        if let Ok(v) = table.temporal_fluctuation_excluding(kind, label) {
            fluctuation.insert(kind, v);
            rows.push(SummaryRow {
                section: "fluctuation",
                kind: Some(kind.as_str()),
                value: Some(p.round(v)),
                note: Some("mean over regions of the across-year dispersion".into()),
                ..Default::default()
            });
        }
    }

    let comparisons = table.compare_income_wealth_excluding(label).unwrap_or_default();
    for c in &comparisons {
        rows.push(SummaryRow {
            section: "comparison",
            region: Some(c.region.clone()),
            year: Some(c.year),
            income_alpha: Some(c.income_alpha),
            wealth_alpha: Some(c.wealth_alpha),
            wealth_lower: Some(c.wealth_lower),
            ..Default::default()
        });
    }

    if *table == ExponentTable::reference() {
        reference_claims(table, label, p, &pooled, &fluctuation, &comparisons, &mut rows);
    }
    Ok(rows)
}

/// Checks of the published summary figures, emitted only for the bundled
/// reference table.
fn reference_claims(
    table: &ExponentTable,
    label: &str,
    p: Precision,
    pooled: &BTreeMap<Kind, tailfit::SummaryStats>,
    fluctuation: &BTreeMap<Kind, f64>,
    comparisons: &[tailfit::Comparison],
    rows: &mut Vec<SummaryRow>,
) {
    for (year, kind, mean, disp) in PUBLISHED_COLUMN_SUMMARIES {
        if let Ok(s) = table.summarize_regions_excluding(year, kind, label) {
            for (what, computed, published) in [("mean", s.mean, mean), ("dispersion", s.dispersion, disp)] {
                rows.push(SummaryRow {
                    section: "claim",
                    year: Some(year),
                    kind: Some(kind.as_str()),
                    value: Some(p.round(computed)),
                    published: Some(published),
                    note: Some(format!("region {what}; difference {}", p.text(computed - published))),
                    ..Default::default()
                });
            }
        }
    }
    for (kind, mean, spread) in PUBLISHED_FOUR_YEAR {
        let Some(s) = pooled.get(&kind) else { continue };
        let year_means: Vec<f64> = table
            .years()
            .into_iter()
            .filter_map(|y| table.summarize_regions_excluding(y, kind, label).ok())
            .map(|s| s.mean)
            .collect();
        let avg_of_years = year_means.iter().sum::<f64>() / year_means.len() as f64;
        rows.push(SummaryRow {
            section: "claim",
            kind: Some(kind.as_str()),
            value: Some(p.round(s.mean)),
            published: Some(mean),
            note: Some(format!(
                "four-year pooled mean; published {mean} +/- {spread}; difference {}; average of yearly means {}",
                p.text(s.mean - mean),
                p.text(avg_of_years)
            )),
            ..Default::default()
        });
        rows.push(SummaryRow {
            section: "claim",
            kind: Some(kind.as_str()),
            value: Some(p.round(s.dispersion)),
            published: Some(spread),
            note: Some(format!(
                "four-year pooled dispersion; difference {}",
                p.text(s.dispersion - spread)
            )),
            ..Default::default()
        });
    }
    if !comparisons.is_empty() {
        let exceptions = comparisons.iter().filter(|c| !c.wealth_lower).count();
        rows.push(SummaryRow {
            section: "claim",
            value: Some(p.round(exceptions as f64 / comparisons.len() as f64)),
            note: Some(format!(
                "wealth exponent not below income exponent in {exceptions} of {} region-years",
                comparisons.len()
            )),
            ..Default::default()
        });
    }
    if let (Some(i), Some(w)) = (fluctuation.get(&Kind::Income), fluctuation.get(&Kind::Wealth)) {
        rows.push(SummaryRow {
            section: "claim",
            value: Some(p.round(i - w)),
            note: Some(format!(
                "income fluctuation minus wealth fluctuation; income fluctuates more: {}",
                i > w
            )),
            ..Default::default()
        });
    }
}

#[derive(Debug, Serialize)]
struct PlotPoint {
    ln_rank: f64,
    ln_value: f64,
}

#[derive(Debug, Serialize)]
struct PlotLine {
    slope: f64,
    intercept: f64,
    alpha_rank: f64,
    alpha: f64,
    r_squared: f64,
}

#[derive(Debug, Serialize)]
struct PlotData<'a> {
    region: &'a str,
    year: i32,
    kind: &'static str,
    fit: Option<PlotLine>,
    points: Vec<PlotPoint>,
}

fn plot_data(args: &PlotArgs, streams: &mut Streams<'_>) -> Result<(), CliError> {
    let groups = read_groups(streams, &args.io)?;
    let kind = args.kind.map(Kind::from);
    let selected: Vec<&RankList> = groups
        .iter()
        .filter(|(k, _)| {
            args.region.as_ref().is_none_or(|r| &k.region == r)
                && args.year.is_none_or(|y| k.year == y)
                && kind.is_none_or(|kd| k.kind == kd)
        })
        .map(|(_, l)| l)
        .collect();
    let list = match selected.as_slice() {
        [] => return Err(CliError::NoResult("unknown group: no records match the selector".into())),
        [one] => *one,
        many => {
            return Err(CliError::Input(format!(
                "selector matches {} groups; narrow it with --region, --year and --kind",
                many.len()
            )))
        }
    };

    let p = args.precision;
    let fit = fit_rank_regression(list);
    let key = list.key();
    let data = PlotData {
        region: &key.region,
        year: key.year,
        kind: key.kind.as_str(),
        fit: fit.as_ref().ok().map(|f| PlotLine {
            slope: p.round(f.slope()),
            intercept: p.round(f.intercept),
            alpha_rank: p.round(f.alpha_rank),
            alpha: p.round(f.alpha),
            r_squared: p.round(f.r_squared),
        }),
        points: list
            .plot_points()
            .into_iter()
            .map(|(x, y)| PlotPoint {
                ln_rank: p.round(x),
                ln_value: p.round(y),
            })
            .collect(),
    };

    let mut out = streams.open_output(&args.io.output)?;
    match args.io.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &data)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "# region={} year={} kind={}", data.region, data.year, data.kind)?;
            if let Some(f) = &data.fit {
                writeln!(
                    out,
                    "# slope={} intercept={} alpha_rank={} alpha={} r_squared={}",
                    f.slope, f.intercept, f.alpha_rank, f.alpha, f.r_squared
                )?;
            }
            write_rows(&mut out, Format::Csv, args.io.delimiter, &data.points)?;
        }
    }
    drop(out);
    fit.map(|_| ()).map_err(|e| CliError::NoResult(format!("fit refused: {e}")))
}

#[derive(Debug, Serialize)]
struct OutRecord<'a> {
    region: &'a str,
    year: i32,
    kind: &'static str,
    rank: usize,
    value: f64,
}

fn group_keys(g: &GroupArgs) -> Vec<GroupKey> {
    let mut keys = Vec::new();
    for region in &g.region {
        for &year in &g.year {
            for &kind in &g.kind {
                keys.push(GroupKey::new(region.clone(), year, kind.into()));
            }
        }
    }
    keys.sort();
    keys.dedup();
    keys
}

fn write_lists(
    streams: &mut Streams<'_>,
    output: &std::path::PathBuf,
    format: Format,
    delimiter: u8,
    p: Precision,
    lists: &[RankList],
) -> Result<(), CliError> {
    let records: Vec<OutRecord> = lists
        .iter()
        .flat_map(|l| {
            let k = l.key();
            l.values().iter().enumerate().map(move |(i, &v)| OutRecord {
                region: &k.region,
                year: k.year,
                kind: k.kind.as_str(),
                rank: i + 1,
                value: p.round(v),
            })
        })
        .collect();
    let out = streams.open_output(output)?;
    write_rows(out, format, delimiter, &records)
}

/// SplitMix64 step, used to give each synthetic group its own seed.
fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn require_n(n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    Ok(())
}

fn sample(args: &SampleArgs, streams: &mut Streams<'_>) -> Result<(), CliError> {
    require_n(args.n)?;
    let income = ParetoParams::new(args.m0, args.alpha)?;
    let wealth = ParetoParams::new(args.m0, args.wealth_alpha.unwrap_or(args.alpha))?;
    let lists = group_keys(&args.groups)
        .into_iter()
        .enumerate()
        .map(|(i, key)| {
            let params = match key.kind {
                Kind::Income => income,
                Kind::Wealth => wealth,
            };
            generate_ranklist(params, args.n, mix_seed(args.seed, i as u64), key)
        })
        .collect::<Result<Vec<_>, _>>()?;
    write_lists(streams, &args.output, args.format, args.delimiter, args.precision, &lists)
}

fn ranksize(args: &RanksizeArgs, streams: &mut Streams<'_>) -> Result<(), CliError> {
    require_n(args.n)?;
    let params = ParetoParams::new(args.m0, args.alpha)?;
    let lists = group_keys(&args.groups)
        .into_iter()
        .map(|key| generate_exact_ranksize(params, args.n, key))
        .collect::<Result<Vec<_>, _>>()?;
    write_lists(streams, &args.output, args.format, args.delimiter, args.precision, &lists)
}
