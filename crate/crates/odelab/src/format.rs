//! Artifact encodings: rationals as `p/q` strings, sequences as JSON arrays,
//! trajectories as `n,value` CSV.

use std::fmt;

use rota::lattice::Residual;
use rota::rational::{format_decimal, format_rational, parse_rational};
use rota::umbral::LatticeTrajectory;
use rota::Rational;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

pub fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

pub fn residual_strings(residuals: &[Residual]) -> Vec<String> {
    residuals
        .iter()
        .map(|r| format_rational(&r.value))
        .collect()
}

/// JSON array of `p/q` strings, newline-terminated.
pub fn json_sequence(values: &[Rational]) -> String {
    let mut out = serde_json::to_string(&strings(values)).expect("strings serialize");
    out.push('\n');
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serializes");
    out.push('\n');
    out
}

/// A CSV table with a fixed header; columns are appended left to right.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    /// One row per index `0..rows`, first column the index.
    pub fn indexed(index_name: &str, rows: usize) -> Self {
        Table {
            header: vec![index_name.to_string()],
            rows: (0..rows).map(|i| vec![i.to_string()]).collect(),
        }
    }

    /// Adds a column; missing trailing cells are left empty.
    pub fn column(mut self, name: &str, cells: impl IntoIterator<Item = String>) -> Self {
        self.header.push(name.to_string());
        let mut cells = cells.into_iter();
        for row in &mut self.rows {
            row.push(cells.next().unwrap_or_default());
        }
        self
    }

    pub fn rational_column(self, name: &str, values: &[Rational], decimals: Option<usize>) -> Self {
        let with_values = self.column(name, strings(values));
        match decimals {
            Some(d) => with_values.column(
                &format!("{name}_decimal"),
                values.iter().map(|v| format_decimal(v, d)),
            ),
            None => with_values,
        }
    }

    pub fn render(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Reads a trajectory from a JSON array of `p/q` strings (or integers), or
/// from CSV with `n` and `value` columns.
pub fn read_trajectory(text: &str) -> Result<LatticeTrajectory, FormatError> {
    if text.trim_start().starts_with('[') {
        read_json_trajectory(text)
    } else {
        read_csv_trajectory(text)
    }
}

fn read_json_trajectory(text: &str) -> Result<LatticeTrajectory, FormatError> {
    let raw: Vec<serde_json::Value> = serde_json::from_str(text)
        .map_err(|e| FormatError(format!("invalid JSON trajectory: {e}")))?;
    let values = raw
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let text = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                other => {
                    return Err(FormatError(format!(
                        "entry {i}: expected a rational string, got {other}"
                    )))
                }
            };
            parse_rational(&text).map_err(|e| FormatError(format!("entry {i}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    Ok(LatticeTrajectory::new(values))
}

fn read_csv_trajectory(text: &str) -> Result<LatticeTrajectory, FormatError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| FormatError(format!("invalid CSV: {e}")))?
        .clone();
    let column = |name: &str| {
        header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| FormatError(format!("CSV trajectory needs a `{name}` column")))
    };
    let (n_col, value_col) = (column("n")?, column("value")?);
    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| FormatError(format!("invalid CSV: {e}")))?;
        let n = record.get(n_col).unwrap_or("").trim();
        if n != row.to_string() {
            return Err(FormatError(format!(
                "row {row}: expected n = {row}, found `{n}`"
            )));
        }
        let value = record.get(value_col).unwrap_or("");
        values.push(parse_rational(value).map_err(|e| FormatError(format!("row {row}: {e}")))?);
    }
    Ok(LatticeTrajectory::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rota::rational::{int, rat};

    #[test]
    fn csv_table() {
        let t = Table::indexed("n", 3)
            .rational_column("value", &[int(1), rat(1, 3), int(-2)], Some(2))
            .column("residual", ["0".to_string(), "0".to_string()]);
        assert_eq!(
            t.render(),
            "n,value,value_decimal,residual\n0,1,1.00,0\n1,1/3,0.33,0\n2,-2,-2.00,\n"
        );
    }

    #[test]
    fn sequences() {
        assert_eq!(json_sequence(&[int(1), rat(-1, 2)]), "[\"1\",\"-1/2\"]\n");
    }

    #[test]
    fn trajectory_inputs() {
        let expect = vec![int(1), rat(3, 2), int(-4)];
        assert_eq!(
            read_trajectory(r#"["1", "3/2", -4]"#).unwrap().values,
            expect
        );
        assert_eq!(
            read_trajectory("n,value\n0,1\n1,3/2\n2,-4\n")
                .unwrap()
                .values,
            expect
        );
        assert_eq!(
            read_trajectory("n,value,value_decimal\n0,1,1.0\n")
                .unwrap()
                .values,
            vec![int(1)]
        );
        assert!(read_trajectory("n,value\n1,1\n").is_err());
        assert!(read_trajectory("k,v\n0,1\n").is_err());
        assert!(read_trajectory(r#"["1", 0.5]"#).is_err());
        assert!(read_trajectory(r#"["x"]"#).is_err());
    }
}
