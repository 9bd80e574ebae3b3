//! CSV ingestion with header auto-detection.

use std::fs::File;
use std::path::Path;

use trendtest_core::{Error, Result, TimeSeries};

/// Reads one numeric column from a CSV file.
///
/// The column selector is either a 0-based index or a header name. A header
/// row is assumed exactly when the first row is non-numeric in the chosen
/// column (a name selector implies one). Blank rows are skipped; any other
/// row that is missing the column or holds a non-finite value is a hard
/// error naming the row. At least 4 observations must remain.
pub fn read_series_csv(path: &Path, column: &str) -> Result<TimeSeries> {
    let file = File::open(path)
        .map_err(|e| Error::Input(format!("cannot open {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    // (1-based file line, record), blank rows dropped.
    let mut rows: Vec<(u64, csv::StringRecord)> = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let line = record.position().map_or(0, |p| p.line());
        rows.push((line, record));
    }
    if rows.is_empty() {
        return Err(Error::Input(format!("{} holds no data", path.display())));
    }

    let first = &rows[0].1;
    let (col, data_rows) = match column.parse::<usize>() {
        Ok(index) => {
            let header = first.get(index).is_none_or(|f| f.parse::<f64>().is_err());
            (index, if header { &rows[1..] } else { &rows[..] })
        }
        Err(_) => {
            let index = first.iter().position(|f| f == column).ok_or_else(|| {
                Error::Input(format!(
                    "column {column:?} not found in header row [{}]",
                    first.iter().collect::<Vec<_>>().join(", ")
                ))
            })?;
            (index, &rows[1..])
        }
    };

    let mut values = Vec::with_capacity(data_rows.len());
    for (line, record) in data_rows {
        let field = record.get(col).ok_or_else(|| {
            Error::Input(format!("row {line}: no column {col} ({} fields)", record.len()))
        })?;
        let value: f64 = field
            .parse()
            .map_err(|_| Error::Input(format!("row {line}: cannot parse {field:?} as a number")))?;
        if !value.is_finite() {
            return Err(Error::Input(format!("row {line}: value {field:?} is not finite")));
        }
        values.push(value);
    }
    if values.len() < 4 {
        return Err(Error::Input(format!(
            "need at least 4 observations, found {} in {}",
            values.len(),
            path.display()
        )));
    }
    TimeSeries::new(values)
}
