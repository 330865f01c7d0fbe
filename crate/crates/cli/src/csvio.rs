//! CSV reading and writing. All floats are written with 17 significant
//! digits (scientific notation), which round-trips binary64 exactly, and
//! rows are emitted in a fixed order so identical runs produce identical
//! bytes.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{CliError, CliResult};

/// 17 significant digits, round-trip exact for binary64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> CliResult<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{header}")?;
    for row in rows {
        writeln!(w, "{row}")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a scalar series: one value per line, or comma-separated rows whose
/// last field is the value. A single leading non-numeric row is treated as a
/// header.
pub fn read_series(path: &Path) -> CliResult<Vec<f64>> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut values = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let last_field = trimmed.rsplit(',').next().unwrap_or(trimmed).trim();
        match last_field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if lineno == 0 => continue, // header row
            Err(_) => {
                return Err(CliError::Usage(format!(
                    "{}: line {} is not numeric: {trimmed:?}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: no data rows found",
            path.display()
        )));
    }
    Ok(values)
}
