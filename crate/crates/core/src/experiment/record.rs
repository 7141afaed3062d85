//! Experiment records and their CSV / JSON files.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Dyadic,
    Continuous,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Dyadic => "dyadic",
            Model::Continuous => "continuous",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dyadic" => Ok(Model::Dyadic),
            "continuous" => Ok(Model::Continuous),
            other => Err(Error::InvalidParameter(format!(
                "unknown model '{other}', expected dyadic or continuous"
            ))),
        }
    }
}

/// One norm estimate. `abscissa` is the scale count `m` for the dyadic model
/// and `log(R/r)` for the continuous one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub model: Model,
    pub n: usize,
    pub abscissa: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub iters: usize,
    pub seed: u64,
    pub digest: String,
}

pub const CSV_HEADER: [&str; 7] = ["model", "n", "abscissa", "S", "iters", "seed", "digest"];

impl ExperimentRecord {
    pub fn validate(&self) -> Result<()> {
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return Err(Error::InvalidParameter(format!("S must be finite and nonnegative, got {}", self.s)));
        }
        if !self.abscissa.is_finite() || self.n == 0 {
            return Err(Error::InvalidParameter("abscissa must be finite and n >= 1".into()));
        }
        Ok(())
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Writes JSON if the extension is `.json`, CSV otherwise.
pub fn save_records(records: &[ExperimentRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = if is_json(path) {
        let mut s = serde_json::to_string_pretty(records)?;
        s.push('\n');
        s
    } else {
        records_to_csv(records)?
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.model.to_string(),
            r.n.to_string(),
            r.abscissa.to_string(),
            r.s.to_string(),
            r.iters.to_string(),
            r.seed.to_string(),
            r.digest.clone(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn load_records(path: impl AsRef<Path>) -> Result<Vec<ExperimentRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if is_json(path) {
        records_from_json(&text, path)
    } else {
        records_from_csv(&text, path)
    }
}

fn parse_error(path: &Path, line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::RecordParse {
        path: path.to_path_buf(),
        line,
        field: field.into(),
        message: message.into(),
    }
}

pub fn records_from_csv(text: &str, path: &Path) -> Result<Vec<ExperimentRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_error(path, 1, "header", e.to_string()))?
        .clone();
    for (i, expected) in CSV_HEADER.iter().enumerate() {
        match headers.get(i) {
            Some(h) if h.trim() == *expected => {}
            Some(h) => return Err(parse_error(path, 1, expected, format!("expected column '{expected}', found '{h}'"))),
            None => return Err(parse_error(path, 1, expected, "missing column")),
        }
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(path, line, "-", e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let get = |i: usize| row.get(i).unwrap_or("").trim();
        fn field<T: FromStr>(path: &Path, line: usize, name: &str, raw: &str) -> Result<T>
        where
            T::Err: fmt::Display,
        {
            raw.parse::<T>()
                .map_err(|e| parse_error(path, line, name, format!("cannot parse '{raw}': {e}")))
        }
        let record = ExperimentRecord {
            model: field(path, line, "model", get(0))?,
            n: field(path, line, "n", get(1))?,
            abscissa: field(path, line, "abscissa", get(2))?,
            s: field(path, line, "S", get(3))?,
            iters: field(path, line, "iters", get(4))?,
            seed: field(path, line, "seed", get(5))?,
            digest: get(6).to_string(),
        };
        check_record(&record, path, line)?;
        out.push(record);
    }
    Ok(out)
}

fn check_record(r: &ExperimentRecord, path: &Path, line: usize) -> Result<()> {
    if !(r.s >= 0.0 && r.s.is_finite()) {
        return Err(parse_error(path, line, "S", format!("must be finite and nonnegative, got {}", r.s)));
    }
    if !r.abscissa.is_finite() {
        return Err(parse_error(path, line, "abscissa", "must be finite"));
    }
    if r.n == 0 {
        return Err(parse_error(path, line, "n", "must be at least 1"));
    }
    Ok(())
}

/// Parses a JSON array of records. Errors inside an entry name the entry's
/// first line in the file and the offending field.
pub fn records_from_json(text: &str, path: &Path) -> Result<Vec<ExperimentRecord>> {
    let values: Vec<serde_json::Value> =
        serde_json::from_str(text).map_err(|e| parse_error(path, e.line(), "-", e.to_string()))?;
    let starts = entry_lines(text);
    let mut out = Vec::with_capacity(values.len());
    for (i, v) in values.into_iter().enumerate() {
        let line = starts.get(i).copied().unwrap_or(0);
        let obj = v
            .as_object()
            .ok_or_else(|| parse_error(path, line, "-", "entry is not an object"))?;
        for name in CSV_HEADER {
            if !obj.contains_key(name) {
                return Err(parse_error(path, line, name, "missing field"));
            }
        }
        let record = ExperimentRecord {
            model: obj["model"]
                .as_str()
                .ok_or_else(|| parse_error(path, line, "model", "expected a string"))?
                .parse()
                .map_err(|e: Error| parse_error(path, line, "model", e.to_string()))?,
            n: obj["n"]
                .as_u64()
                .ok_or_else(|| parse_error(path, line, "n", "expected a nonnegative integer"))? as usize,
            abscissa: obj["abscissa"]
                .as_f64()
                .ok_or_else(|| parse_error(path, line, "abscissa", "expected a number"))?,
            s: obj["S"].as_f64().ok_or_else(|| parse_error(path, line, "S", "expected a number"))?,
            iters: obj["iters"]
                .as_u64()
                .ok_or_else(|| parse_error(path, line, "iters", "expected a nonnegative integer"))? as usize,
            seed: obj["seed"]
                .as_u64()
                .ok_or_else(|| parse_error(path, line, "seed", "expected a nonnegative integer"))?,
            digest: obj["digest"]
                .as_str()
                .ok_or_else(|| parse_error(path, line, "digest", "expected a string"))?
                .to_string(),
        };
        check_record(&record, path, line)?;
        out.push(record);
    }
    Ok(out)
}

/// 1-based line of each `{` that opens a top-level array entry.
fn entry_lines(text: &str) -> Vec<usize> {
    let mut lines = Vec::new();
    let (mut depth, mut line, mut in_str, mut escaped) = (0usize, 1usize, false, false);
    for c in text.chars() {
        if in_str {
            match c {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => in_str = false,
                '\n' => line += 1,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => in_str = true,
            '\n' => line += 1,
            '[' | '{' => {
                if depth == 1 {
                    lines.push(line);
                }
                depth += 1;
            }
            ']' | '}' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<ExperimentRecord> {
        vec![
            ExperimentRecord {
                model: Model::Dyadic,
                n: 2,
                abscissa: 3.0,
                s: 1.234_567_890_123_456_7,
                iters: 12,
                seed: 4,
                digest: "abc123".into(),
            },
            ExperimentRecord {
                model: Model::Continuous,
                n: 1,
                abscissa: std::f64::consts::LN_2 * 3.0,
                s: 0.1 + 0.2,
                iters: 1,
                seed: u64::MAX,
                digest: "d".into(),
            },
        ]
    }

    #[test]
    fn csv_and_json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["r.csv", "r.json"] {
            let p = dir.path().join(name);
            save_records(&sample(), &p).unwrap();
            assert_eq!(load_records(&p).unwrap(), sample());
            save_records(&[], &p).unwrap();
            assert!(load_records(&p).unwrap().is_empty());
        }
        let csv = records_to_csv(&[]).unwrap();
        assert_eq!(csv, "model,n,abscissa,S,iters,seed,digest\n");
    }

    #[test]
    fn bad_fields_are_named() {
        let p = Path::new("edited.csv");
        let text = "model,n,abscissa,S,iters,seed,digest\ndyadic,2,1,0.5,3,0,x\ndyadic,2,2,oops,3,0,x\n";
        match records_from_csv(text, p) {
            Err(Error::RecordParse { line, field, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(field, "S");
            }
            other => panic!("{other:?}"),
        }
        let text = "model,n,abscissa,S,iters,seed,digest\ntriadic,2,1,0.5,3,0,x\n";
        assert!(matches!(records_from_csv(text, p), Err(Error::RecordParse { ref field, .. }) if field == "model"));
        let text = "model,n,abscissa,S,iters,seed,digest\ndyadic,2,1,-0.5,3,0,x\n";
        assert!(matches!(records_from_csv(text, p), Err(Error::RecordParse { ref field, .. }) if field == "S"));
        let text = "model,n,x,S,iters,seed,digest\n";
        assert!(matches!(records_from_csv(text, p), Err(Error::RecordParse { line: 1, .. })));

        let json = "[\n  {\"model\": \"dyadic\", \"n\": 2, \"abscissa\": 1, \"S\": 1, \"iters\": 1, \"seed\": 0, \"digest\": \"\"},\n  {\"model\": \"dyadic\", \"n\": 2, \"abscissa\": 1, \"S\": \"x\", \"iters\": 1, \"seed\": 0, \"digest\": \"\"}\n]";
        match records_from_json(json, Path::new("e.json")) {
            Err(Error::RecordParse { line, field, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(field, "S");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            records_from_json("[{]", Path::new("e.json")),
            Err(Error::RecordParse { .. })
        ));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(load_records("/nonexistent/none.csv"), Err(Error::Io { .. })));
    }
}
