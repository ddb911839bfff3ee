use super::ScenarioError;
use chrono::{DateTime, NaiveDate, SecondsFormat, Utc};
use std::io::Write;
use std::path::Path;

/// A timestamp column plus named value columns on a uniform step.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesTable {
    pub timestamps: Vec<DateTime<Utc>>,
    pub columns: Vec<String>,
    /// `values[column][row]`
    pub values: Vec<Vec<f64>>,
    pub step_seconds: i64,
}

impl TimeSeriesTable {
    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .position(|c| c == name)
            .map(|i| self.values[i].as_slice())
    }

    /// Row index of `t`, if it lies on the table's grid.
    pub fn index_of(&self, t: DateTime<Utc>) -> Option<usize> {
        let first = *self.timestamps.first()?;
        let d = (t - first).num_seconds();
        if d < 0 || d % self.step_seconds != 0 {
            return None;
        }
        let i = (d / self.step_seconds) as usize;
        (i < self.len()).then_some(i)
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), ScenarioError> {
        let mut rows = Vec::with_capacity(self.len());
        for (r, t) in self.timestamps.iter().enumerate() {
            rows.push((*t, self.values.iter().map(|c| c[r]).collect::<Vec<_>>()));
        }
        write_series(path, &self.columns, rows.iter().map(|(t, v)| (*t, v.as_slice())))
    }
}

pub fn format_timestamp(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Parse an RFC 3339 timestamp or a bare `YYYY-MM-DD` date (midnight UTC).
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.with_timezone(&Utc));
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|t| t.and_utc())
}

/// Read a time-series CSV whose header names at least `expected` columns,
/// with rows `step_seconds` apart.
pub fn load_csv(path: &Path, expected: &[String], step_seconds: i64) -> Result<TimeSeriesTable, ScenarioError> {
    let text = super::read_text(path)?;
    parse_csv(&text, path, expected, step_seconds)
}

pub fn parse_csv(
    text: &str,
    path: &Path,
    expected: &[String],
    step_seconds: i64,
) -> Result<TimeSeriesTable, ScenarioError> {
    let shown = path.display().to_string();
    let parse_err = |line: u64, message: String| ScenarioError::Parse {
        path: shown.clone(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    if header.get(0).map(str::to_ascii_lowercase).as_deref() != Some("timestamp") {
        return Err(ScenarioError::Schema {
            path: shown,
            missing: vec!["timestamp".into()],
        });
    }
    let missing: Vec<String> = expected
        .iter()
        .filter(|c| !header.iter().skip(1).any(|h| h == c.as_str()))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(ScenarioError::Schema { path: shown, missing });
    }
    let positions: Vec<usize> = expected
        .iter()
        .map(|c| header.iter().position(|h| h == c.as_str()).unwrap())
        .collect();

    let mut timestamps: Vec<DateTime<Utc>> = Vec::new();
    let mut values = vec![Vec::new(); expected.len()];
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let raw_t = rec.get(0).unwrap_or_default();
        let t = parse_timestamp(raw_t).ok_or_else(|| parse_err(line, format!("bad timestamp '{raw_t}'")))?;
        if let Some(&prev) = timestamps.last() {
            let d = (t - prev).num_seconds();
            if d != step_seconds {
                return Err(ScenarioError::Gap {
                    path: shown,
                    timestamp: format_timestamp(t),
                    expected_seconds: step_seconds,
                    found_seconds: d,
                });
            }
        }
        timestamps.push(t);
        for (c, &p) in positions.iter().enumerate() {
            let cell = rec.get(p).unwrap_or_default();
            if cell.is_empty() {
                return Err(parse_err(line, format!("empty cell in column '{}'", expected[c])));
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| parse_err(line, format!("'{cell}' in column '{}' is not a number", expected[c])))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("non-finite value in column '{}'", expected[c])));
            }
            values[c].push(v);
        }
    }
    if timestamps.is_empty() {
        return Err(parse_err(1, "no data rows".into()));
    }
    Ok(TimeSeriesTable {
        timestamps,
        columns: expected.to_vec(),
        values,
        step_seconds,
    })
}

/// Write rows of `timestamp,<columns...>`. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_series<'a>(
    path: &Path,
    columns: &[String],
    rows: impl Iterator<Item = (DateTime<Utc>, &'a [f64])>,
) -> Result<(), ScenarioError> {
    let io = |e: std::io::Error| ScenarioError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let file = std::fs::File::create(path).map_err(io)?;
    let mut w = std::io::BufWriter::new(file);
    write!(w, "timestamp").map_err(io)?;
    for c in columns {
        write!(w, ",{c}").map_err(io)?;
    }
    writeln!(w).map_err(io)?;
    for (t, vals) in rows {
        write!(w, "{}", format_timestamp(t)).map_err(io)?;
        for v in vals {
            write!(w, ",{v}").map_err(io)?;
        }
        writeln!(w).map_err(io)?;
    }
    w.flush().map_err(io)
}
