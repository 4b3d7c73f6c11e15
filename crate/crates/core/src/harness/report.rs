use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::plot::PlotCurve;
use crate::error::{Error, Result};

/// A named table of JSON cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Result<Vec<&Value>> {
        let i = self
            .columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::invalid(format!("table {} has no column {name}", self.name)))?;
        Ok(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell_text))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// A check over stored rows; evaluating it needs nothing but the tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// `lhs ≤ rhs` on every row.
    Le { table: String, lhs: String, rhs: String },
    /// `lhs < rhs` on every row.
    Lt { table: String, lhs: String, rhs: String },
    /// `lhs = rhs` on every row.
    Eq { table: String, lhs: String, rhs: String },
    /// Every value of the column is at most `max`.
    AtMost { table: String, column: String, max: Value },
    /// Every value of the column is at least `min`.
    AtLeast { table: String, column: String, min: Value },
    /// Every value equals `value`.
    Equals { table: String, column: String, value: Value },
    StrictlyIncreasing { table: String, column: String },
    AllEqual { table: String, column: String },
    AllTrue { table: String, column: String },
    AnyTrue { table: String, column: String },
}

fn compare_values(a: &Value, b: &Value) -> Option<Ordering> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let int = |n: &serde_json::Number| {
                n.as_i64()
                    .map(i128::from)
                    .or_else(|| n.as_u64().map(i128::from))
            };
            match (int(x), int(y)) {
                (Some(p), Some(q)) => Some(p.cmp(&q)),
                _ => x.as_f64()?.partial_cmp(&y.as_f64()?),
            }
        }
        (Value::String(x), Value::String(y)) => Some(x.cmp(y)),
        (Value::Bool(x), Value::Bool(y)) => Some(x.cmp(y)),
        _ => None,
    }
}

impl Rule {
    fn table<'a>(&self, tables: &'a [Table]) -> Result<&'a Table> {
        let name = match self {
            Rule::Le { table, .. }
            | Rule::Lt { table, .. }
            | Rule::Eq { table, .. }
            | Rule::AtMost { table, .. }
            | Rule::AtLeast { table, .. }
            | Rule::Equals { table, .. }
            | Rule::StrictlyIncreasing { table, .. }
            | Rule::AllEqual { table, .. }
            | Rule::AllTrue { table, .. }
            | Rule::AnyTrue { table, .. } => table,
        };
        tables
            .iter()
            .find(|t| &t.name == name)
            .ok_or_else(|| Error::invalid(format!("no table named {name}")))
    }

    /// Evaluates the rule. Empty tables pass universal rules and fail
    /// existential ones.
    pub fn evaluate(&self, tables: &[Table]) -> Result<bool> {
        let t = self.table(tables)?;
        let pairwise = |lhs: &str, rhs: &str, ok: fn(Ordering) -> bool| -> Result<bool> {
            let (a, b) = (t.column(lhs)?, t.column(rhs)?);
            Ok(a.iter()
                .zip(&b)
                .all(|(x, y)| compare_values(x, y).is_some_and(ok)))
        };
        let against = |column: &str, bound: &Value, ok: fn(Ordering) -> bool| -> Result<bool> {
            Ok(t.column(column)?
                .iter()
                .all(|x| compare_values(x, bound).is_some_and(ok)))
        };
        match self {
            Rule::Le { lhs, rhs, .. } => pairwise(lhs, rhs, |o| o != Ordering::Greater),
            Rule::Lt { lhs, rhs, .. } => pairwise(lhs, rhs, |o| o == Ordering::Less),
            Rule::Eq { lhs, rhs, .. } => pairwise(lhs, rhs, |o| o == Ordering::Equal),
            Rule::AtMost { column, max, .. } => against(column, max, |o| o != Ordering::Greater),
            Rule::AtLeast { column, min, .. } => against(column, min, |o| o != Ordering::Less),
            Rule::Equals { column, value, .. } => against(column, value, |o| o == Ordering::Equal),
            Rule::StrictlyIncreasing { column, .. } => {
                let c = t.column(column)?;
                Ok(c.windows(2)
                    .all(|w| compare_values(w[0], w[1]) == Some(Ordering::Less)))
            }
            Rule::AllEqual { column, .. } => {
                let c = t.column(column)?;
                Ok(c.windows(2)
                    .all(|w| compare_values(w[0], w[1]) == Some(Ordering::Equal)))
            }
            Rule::AllTrue { column, .. } => {
                Ok(t.column(column)?.iter().all(|v| v.as_bool() == Some(true)))
            }
            Rule::AnyTrue { column, .. } => {
                Ok(t.column(column)?.iter().any(|v| v.as_bool() == Some(true)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub rule: Rule,
    pub passed: bool,
}

/// The outcome of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub claim: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub assertions: Vec<Assertion>,
    pub constants: BTreeMap<String, Value>,
    pub tables: Vec<Table>,
    #[serde(default)]
    pub series: Vec<PlotCurve>,
    pub passed: bool,
    /// Why the run stopped early, if it did.
    pub failure: Option<String>,
    #[serde(default)]
    pub budget_exceeded: bool,
    /// Wall-clock time; kept out of the serialized form so reports are
    /// byte-stable.
    #[serde(skip)]
    pub runtime: Duration,
}

impl Report {
    pub fn new(experiment: &str, claim: &str, params: Value) -> Self {
        Report {
            experiment: experiment.into(),
            claim: claim.into(),
            params,
            seed: None,
            assertions: Vec::new(),
            constants: BTreeMap::new(),
            tables: Vec::new(),
            series: Vec::new(),
            passed: false,
            failure: None,
            budget_exceeded: false,
            runtime: Duration::ZERO,
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Registers an assertion; it is evaluated by [`Report::finish`].
    pub fn assert(&mut self, name: &str, rule: Rule) {
        self.assertions.push(Assertion {
            name: name.into(),
            rule,
            passed: false,
        });
    }

    pub fn finish(mut self) -> Result<Self> {
        let verdicts = self.recheck()?;
        for (a, v) in self.assertions.iter_mut().zip(&verdicts) {
            a.passed = *v;
        }
        self.passed = self.failure.is_none() && verdicts.iter().all(|v| *v);
        Ok(self)
    }

    /// Recomputes every assertion from the stored tables alone.
    pub fn recheck(&self) -> Result<Vec<bool>> {
        self.assertions
            .iter()
            .map(|a| a.rule.evaluate(&self.tables))
            .collect()
    }

    /// Canonical JSON: keys sorted, two-space indentation.
    pub fn to_json_string(&self) -> Result<String> {
        let value = serde_json::to_value(self)?;
        let mut s = serde_json::to_string_pretty(&value)?;
        s.push('\n');
        Ok(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Writes the report. JSON goes to `path`; CSV writes each table to its own
/// file, `path` itself when there is a single table and `stem.table.csv`
/// otherwise. Returns the files written.
pub fn emit_report(report: &Report, format: ReportFormat, path: &Path) -> Result<Vec<PathBuf>> {
    match format {
        ReportFormat::Json => {
            std::fs::write(path, report.to_json_string()?)?;
            Ok(vec![path.to_path_buf()])
        }
        ReportFormat::Csv => {
            let mut written = Vec::new();
            for t in &report.tables {
                let target = if report.tables.len() == 1 {
                    path.to_path_buf()
                } else {
                    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
                    path.with_file_name(format!("{stem}.{}.csv", t.name))
                };
                t.write_csv(std::fs::File::create(&target)?)?;
                written.push(target);
            }
            Ok(written)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::new("demo", "a claim", json!({"b": 1, "a": 2}));
        let mut t = Table::new("rows", &["x", "bound", "flag"]);
        t.push(vec![json!(1), json!(2), json!(true)]);
        t.push(vec![json!(3), json!(3), json!(false)]);
        r.tables.push(t);
        r.assert("le", Rule::Le { table: "rows".into(), lhs: "x".into(), rhs: "bound".into() });
        r.assert("lt", Rule::Lt { table: "rows".into(), lhs: "x".into(), rhs: "bound".into() });
        r.assert("any", Rule::AnyTrue { table: "rows".into(), column: "flag".into() });
        r.assert("inc", Rule::StrictlyIncreasing { table: "rows".into(), column: "x".into() });
        r.finish().unwrap()
    }

    #[test]
    fn rules_evaluate_from_rows() {
        let r = sample();
        let v: Vec<bool> = r.assertions.iter().map(|a| a.passed).collect();
        assert_eq!(v, vec![true, false, true, true]);
        assert!(!r.passed);
        let mut tampered = r.clone();
        tampered.tables[0].rows[1][0] = json!(4);
        assert_eq!(tampered.recheck().unwrap(), vec![false, false, true, true]);
    }

    #[test]
    fn json_is_sorted_and_stable() {
        let r = sample();
        let s = r.to_json_string().unwrap();
        assert_eq!(s, sample().to_json_string().unwrap());
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.find("\"assertions\"").unwrap() < s.find("\"claim\"").unwrap());
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back.recheck().unwrap(), r.recheck().unwrap());
    }

    #[test]
    fn csv_emission() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let files = emit_report(&sample(), ReportFormat::Csv, &path).unwrap();
        assert_eq!(files, vec![path.clone()]);
        let text = std::fs::read_to_string(path).unwrap();
        assert_eq!(text, "x,bound,flag\n1,2,true\n3,3,false\n");
    }
}
