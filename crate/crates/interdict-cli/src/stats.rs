//! Per-group summary statistics over benchmark records: count, mean, sample
//! standard deviation, 95% confidence-interval half-width, and coefficient
//! of variation.
//!
//! The interval uses the normal approximation `1.96·std/√m` with the sample
//! (m−1) standard deviation. Spread measures are undefined for a single
//! record, and the coefficient of variation is additionally undefined when
//! the mean is zero; undefined values render as empty CSV fields.

use crate::bench::BenchRecord;
use std::collections::BTreeMap;
use std::str::FromStr;

/// Record fields a summary may group by.
pub const GROUPABLE_FIELDS: [&str; 8] =
    ["instance_id", "family", "n", "m", "p", "r", "seed", "algorithm"];

/// Default grouping: one row per benchmark configuration.
pub const DEFAULT_GROUP_BY: [&str; 4] = ["family", "n", "r", "algorithm"];

/// Which column gets summarized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    RuntimeNs,
    Objective,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::RuntimeNs => "runtime_ns",
            Metric::Objective => "objective",
        }
    }

    fn extract(self, record: &BenchRecord) -> f64 {
        match self {
            Metric::RuntimeNs => record.runtime_ns as f64,
            Metric::Objective => record.objective,
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "runtime_ns" => Ok(Metric::RuntimeNs),
            "objective" => Ok(Metric::Objective),
            other => {
                Err(format!("unknown metric '{other}' (expected runtime_ns or objective)"))
            }
        }
    }
}

fn group_value(record: &BenchRecord, field: &str) -> Option<String> {
    Some(match field {
        "instance_id" => record.instance_id.to_string(),
        "family" => record.family.clone(),
        "n" => record.n.to_string(),
        "m" => record.m.to_string(),
        "p" => record.p.to_string(),
        "r" => record.r.to_string(),
        "seed" => record.seed.to_string(),
        "algorithm" => record.algorithm.clone(),
        _ => return None,
    })
}

/// One output row.
#[derive(Clone, Debug, PartialEq)]
pub struct StatSummary {
    /// Group key values, in `group_by` order.
    pub key: Vec<String>,
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation; `None` for a single record.
    pub std: Option<f64>,
    /// `1.96·std/√m`; `None` for a single record.
    pub ci95: Option<f64>,
    /// `std/mean`; `None` for a single record or a zero mean.
    pub cv: Option<f64>,
}

/// Groups `records` by the named fields and summarizes `metric` per group.
/// Rows come back sorted by key (numerically where both values parse as
/// numbers).
pub fn summarize(
    records: &[BenchRecord],
    group_by: &[String],
    metric: Metric,
) -> Result<Vec<StatSummary>, String> {
    for field in group_by {
        if !GROUPABLE_FIELDS.contains(&field.as_str()) {
            return Err(format!(
                "unknown group-by field '{field}' (expected one of {})",
                GROUPABLE_FIELDS.join(", ")
            ));
        }
    }
    let mut groups: BTreeMap<Vec<String>, Vec<f64>> = BTreeMap::new();
    for record in records {
        let key = group_by
            .iter()
            .map(|f| group_value(record, f).expect("field names were checked above"))
            .collect();
        groups.entry(key).or_default().push(metric.extract(record));
    }
    let mut rows: Vec<StatSummary> = groups
        .into_iter()
        .map(|(key, values)| {
            let count = values.len();
            let mean = values.iter().sum::<f64>() / count as f64;
            let (std, ci95, cv) = if count < 2 {
                (None, None, None)
            } else {
                let variance = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
                    / (count - 1) as f64;
                let std = variance.sqrt();
                let ci95 = 1.96 * std / (count as f64).sqrt();
                let cv = if mean == 0.0 { None } else { Some(std / mean) };
                (Some(std), Some(ci95), cv)
            };
            StatSummary { key, count, mean, std, ci95, cv }
        })
        .collect();
    rows.sort_by(|a, b| compare_keys(&a.key, &b.key));
    Ok(rows)
}

/// Componentwise key order, numeric when both sides parse as numbers so
/// n = 20 sorts before n = 100.
fn compare_keys(a: &[String], b: &[String]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = match (x.parse::<f64>(), y.parse::<f64>()) {
            (Ok(p), Ok(q)) => p.total_cmp(&q),
            _ => x.cmp(y),
        };
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    a.len().cmp(&b.len())
}

/// Renders summaries as CSV: the group fields, then `m,mean,std,ci95,cv`.
/// Undefined statistics become empty fields.
pub fn summary_csv(group_by: &[String], rows: &[StatSummary]) -> String {
    let mut out = String::new();
    for field in group_by {
        out.push_str(field);
        out.push(',');
    }
    out.push_str("m,mean,std,ci95,cv\n");
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for row in rows {
        for value in &row.key {
            out.push_str(value);
            out.push(',');
        }
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.count,
            row.mean,
            opt(row.std),
            opt(row.ci95),
            opt(row.cv)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(n: usize, algorithm: &str, runtime_ns: u128, objective: f64) -> BenchRecord {
        BenchRecord {
            instance_id: 0,
            family: "prufer".into(),
            n,
            m: n.saturating_sub(1),
            p: 0.3,
            r: 2,
            seed: 1,
            algorithm: algorithm.into(),
            objective,
            runtime_ns,
        }
    }

    fn keys(fields: &[&str]) -> Vec<String> {
        fields.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn identical_values_give_zero_spread() {
        let records = [record(10, "tree", 1, 5.0), record(10, "tree", 1, 5.0), record(10, "tree", 1, 5.0)];
        let rows = summarize(&records, &keys(&["n"]), Metric::RuntimeNs).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.count, 3);
        assert_eq!(row.mean, 1.0);
        assert_eq!(row.std, Some(0.0));
        assert_eq!(row.ci95, Some(0.0));
        assert_eq!(row.cv, Some(0.0));
    }

    #[test]
    fn single_record_leaves_spread_undefined() {
        let records = [record(10, "tree", 123, 5.0)];
        let rows = summarize(&records, &keys(&["n"]), Metric::RuntimeNs).unwrap();
        let row = &rows[0];
        assert_eq!(row.count, 1);
        assert_eq!(row.mean, 123.0);
        assert_eq!((row.std, row.ci95, row.cv), (None, None, None));
        let csv = summary_csv(&keys(&["n"]), &rows);
        assert_eq!(csv, "n,m,mean,std,ci95,cv\n10,1,123,,,\n");
    }

    #[test]
    fn zero_mean_leaves_cv_undefined() {
        let records = [record(10, "tree", 1, 0.0), record(10, "tree", 2, 0.0)];
        let rows = summarize(&records, &keys(&["n"]), Metric::Objective).unwrap();
        let row = &rows[0];
        assert_eq!(row.mean, 0.0);
        assert!(row.std.is_some());
        assert_eq!(row.cv, None);
    }

    #[test]
    fn matches_hand_computed_formulas() {
        // Values 2, 4, 9: mean 5, sample variance ((9+1+16)/2) = 13.
        let records = [
            record(10, "tree", 2, 0.0),
            record(10, "tree", 4, 0.0),
            record(10, "tree", 9, 0.0),
        ];
        let rows = summarize(&records, &keys(&["n"]), Metric::RuntimeNs).unwrap();
        let row = &rows[0];
        let std = 13.0f64.sqrt();
        assert!((row.mean - 5.0).abs() < 1e-12);
        assert!((row.std.unwrap() - std).abs() < 1e-12);
        assert!((row.ci95.unwrap() - 1.96 * std / 3.0f64.sqrt()).abs() < 1e-12);
        assert!((row.cv.unwrap() - std / 5.0).abs() < 1e-12);
    }

    #[test]
    fn groups_split_and_sort_numerically() {
        let records = [
            record(100, "tree", 4, 0.0),
            record(20, "tree", 2, 0.0),
            record(100, "btw", 8, 0.0),
            record(20, "tree", 4, 0.0),
        ];
        let rows =
            summarize(&records, &keys(&["n", "algorithm"]), Metric::RuntimeNs).unwrap();
        let observed: Vec<(String, String, usize)> = rows
            .iter()
            .map(|r| (r.key[0].clone(), r.key[1].clone(), r.count))
            .collect();
        assert_eq!(
            observed,
            vec![
                ("20".into(), "tree".into(), 2),
                ("100".into(), "btw".into(), 1),
                ("100".into(), "tree".into(), 1),
            ]
        );
    }

    #[test]
    fn unknown_group_field_is_rejected() {
        let err = summarize(&[], &keys(&["speed"]), Metric::RuntimeNs).unwrap_err();
        assert!(err.contains("unknown group-by field 'speed'"));
    }

    #[test]
    fn metric_parsing() {
        assert_eq!("runtime_ns".parse::<Metric>().unwrap(), Metric::RuntimeNs);
        assert_eq!("objective".parse::<Metric>().unwrap(), Metric::Objective);
        assert!("latency".parse::<Metric>().is_err());
    }
}
