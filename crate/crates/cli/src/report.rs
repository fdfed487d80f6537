//! Report documents and their JSON, CSV and table renderings.
//!
//! Exact rationals are written as `"p/q"` strings in JSON and CSV. Decimal
//! approximations appear only in the table rendering, marked with `≈`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use gradalg_core::exact::format_rational;
use gradalg_core::{PointOrInfinity, Rational};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Exact(Rational),
    Text(String),
    Bool(bool),
    List(Vec<Cell>),
    Missing,
}

impl Cell {
    pub fn int(v: impl Into<BigInt>) -> Cell {
        Cell::Int(v.into())
    }

    pub fn text(v: impl Into<String>) -> Cell {
        Cell::Text(v.into())
    }

    pub fn place(q: &PointOrInfinity) -> Cell {
        Cell::Text(q.to_exact_string())
    }

    fn machine(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Exact(q) => format_rational(q),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::List(items) => items
                .iter()
                .map(Cell::machine)
                .collect::<Vec<_>>()
                .join(";"),
            Cell::Missing => String::new(),
        }
    }

    fn display(&self) -> String {
        match self {
            Cell::Exact(q) => match q.to_f64() {
                Some(x) => format!("{} ≈{x:.6}", format_rational(q)),
                None => format_rational(q),
            },
            Cell::List(items) => {
                let inner: Vec<String> = items.iter().map(Cell::display).collect();
                format!("({})", inner.join(","))
            }
            Cell::Missing => "-".into(),
            other => other.machine(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => match v.to_i64() {
                Some(small) => s.serialize_i64(small),
                None => s.serialize_str(&v.to_string()),
            },
            Cell::Exact(q) => s.serialize_str(&format_rational(q)),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::List(items) => items.serialize(s),
            Cell::Missing => s.serialize_none(),
        }
    }
}

/// One record; columns keep their insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row(pub Vec<(String, Cell)>);

impl Row {
    pub fn new() -> Row {
        Row(Vec::new())
    }

    pub fn with(mut self, key: &str, cell: Cell) -> Row {
        self.0.push((key.to_string(), cell));
        self
    }
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub scenario: String,
    pub parameters: BTreeMap<String, Cell>,
    pub rows: Vec<Row>,
    pub summary: Row,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<ReportDocument>,
}

impl ReportDocument {
    pub fn new(command: &str, scenario: &str) -> ReportDocument {
        ReportDocument {
            command: command.to_string(),
            scenario: scenario.to_string(),
            parameters: BTreeMap::new(),
            rows: Vec::new(),
            summary: Row::new(),
            sections: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, cell: Cell) -> ReportDocument {
        self.parameters.insert(key.to_string(), cell);
        self
    }

    pub fn summary_value(&self, key: &str) -> Option<&Cell> {
        self.summary
            .0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
    }

    fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = Vec::new();
        for row in &self.rows {
            for (k, _) in &row.0 {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
        cols
    }
}

fn lookup<'a>(row: &'a Row, key: &str) -> &'a Cell {
    row.0
        .iter()
        .find(|(k, _)| k == key)
        .map_or(&Cell::Missing, |(_, v)| v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub fn render(doc: &ReportDocument, format: Format) -> String {
    match format {
        Format::Json => {
            let mut out = serde_json::to_string_pretty(doc).expect("reports always serialize");
            out.push('\n');
            out
        }
        Format::Csv => render_csv(doc),
        Format::Table => render_table(doc),
    }
}

fn render_csv(doc: &ReportDocument) -> String {
    let mut blocks = Vec::new();
    if !doc.rows.is_empty() {
        let cols = doc.columns();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&cols).expect("in-memory write");
        for row in &doc.rows {
            w.write_record(cols.iter().map(|c| lookup(row, c).machine()))
                .expect("in-memory write");
        }
        blocks.push(String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
    }
    if !doc.summary.0.is_empty() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["key", "value"]).expect("in-memory write");
        for (k, v) in &doc.summary.0 {
            w.write_record([k.clone(), v.machine()])
                .expect("in-memory write");
        }
        blocks.push(String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
    }
    for section in &doc.sections {
        let mut block = format!("# {}\n", section.command);
        block.push_str(&render_csv(section));
        blocks.push(block);
    }
    blocks.join("\n")
}

fn render_table(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let params: Vec<String> = doc
        .parameters
        .iter()
        .map(|(k, v)| format!("{k}={}", v.machine()))
        .collect();
    let _ = writeln!(
        out,
        "{} [{}] {}",
        doc.command,
        doc.scenario,
        params.join(" ")
    );

    if !doc.rows.is_empty() {
        let cols = doc.columns();
        let cells: Vec<Vec<String>> = doc
            .rows
            .iter()
            .map(|r| cols.iter().map(|c| lookup(r, c).display()).collect())
            .collect();
        let widths: Vec<usize> = cols
            .iter()
            .enumerate()
            .map(|(i, c)| {
                cells
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain([c.chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |items: &[String]| {
            items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let _ = writeln!(out, "{}", line(&cols));
        for r in &cells {
            let _ = writeln!(out, "{}", line(r));
        }
    }
    for (k, v) in &doc.summary.0 {
        let _ = writeln!(out, "{k}: {}", v.display());
    }
    for section in &doc.sections {
        out.push('\n');
        out.push_str(&render_table(section));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use gradalg_core::exact::rat;

    fn sample() -> ReportDocument {
        let mut doc = ReportDocument::new("demo", "chen").param("n", Cell::int(2));
        doc.rows.push(
            Row::new()
                .with("n", Cell::int(1))
                .with("ratio", Cell::Exact(rat(31, 32)))
                .with("entries", Cell::List(vec![Cell::int(1), Cell::int(0)])),
        );
        doc.rows.push(
            Row::new()
                .with("n", Cell::int(2))
                .with("ratio", Cell::Exact(rat(2, 1))),
        );
        doc.summary = Row::new().with("verdict", Cell::text("ok"));
        doc
    }

    #[test]
    fn json_keeps_exact_strings_and_column_order() {
        let json = render(&sample(), Format::Json);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["rows"][0]["ratio"], "31/32");
        assert_eq!(v["rows"][1]["ratio"], "2/1");
        assert_eq!(v["rows"][0]["entries"][0], 1);
        assert_eq!(v["parameters"]["n"], 2);
        assert!(v.get("sections").is_none());
        assert!(!json.contains("0.96875"));
        assert!(json.find("\"n\"").unwrap() < json.find("\"ratio\"").unwrap());
    }

    #[test]
    fn csv_has_header_and_missing_cells() {
        let csv = render(&sample(), Format::Csv);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,ratio,entries"));
        assert_eq!(lines.next(), Some("1,31/32,1;0"));
        assert_eq!(lines.next(), Some("2,2/1,"));
        assert!(csv.contains("key,value\nverdict,ok\n"));
    }

    #[test]
    fn table_shows_decimals() {
        let table = render(&sample(), Format::Table);
        assert!(table.starts_with("demo [chen] n=2\n"));
        assert!(table.contains("31/32 ≈0.968750"));
        assert!(table.contains("verdict: ok"));
    }

    #[test]
    fn huge_integers_become_strings() {
        let big = BigInt::from(u64::MAX) * BigInt::from(4);
        let json = serde_json::to_string(&Cell::Int(big.clone())).unwrap();
        assert_eq!(json, format!("\"{big}\""));
    }
}
