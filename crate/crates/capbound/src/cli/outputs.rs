//! Deterministic output emission: RFC-4180 CSV sweeps and atomically
//! written JSON reports. Identical inputs produce byte-identical files.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::json::fmt_f64_17;

/// A single CSV cell. Reals render with 17 significant digits and a '.'
/// decimal separator; booleans render as 0/1.
#[derive(Debug, Clone)]
pub enum CsvCell {
    Str(String),
    Real(f64),
    Int(i64),
    Flag(bool),
}

impl CsvCell {
    fn render(&self) -> String {
        match self {
            CsvCell::Str(s) => quote_if_needed(s),
            CsvCell::Real(v) => fmt_f64_17(*v),
            CsvCell::Int(v) => v.to_string(),
            CsvCell::Flag(b) => if *b { "1" } else { "0" }.to_string(),
        }
    }
}

fn quote_if_needed(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render header and rows as RFC-4180 CSV (CRLF line breaks, header first).
pub fn render_csv(header: &[&str], rows: &[Vec<CsvCell>]) -> Result<String> {
    let width = header.len();
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push_str("\r\n");
    for row in rows {
        if row.len() != width {
            return Err(Error::LengthMismatch {
                left: row.len(),
                right: width,
            });
        }
        let cells: Vec<String> = row.iter().map(CsvCell::render).collect();
        out.push_str(&cells.join(","));
        out.push_str("\r\n");
    }
    Ok(out)
}

/// Write bytes atomically: temp file in the destination directory, then
/// rename over the target.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&parent)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path)
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    Ok(())
}

/// Emit a CSV sweep to a file (atomically) or to stdout.
pub fn emit_sweep(path: Option<&Path>, header: &[&str], rows: &[Vec<CsvCell>]) -> Result<()> {
    let body = render_csv(header, rows)?;
    match path {
        Some(p) => atomic_write(p, body.as_bytes()),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// Serialize a report (pretty JSON, trailing newline) to a file or stdout.
pub fn emit_report(path: Option<&Path>, report: &serde_json::Value) -> Result<()> {
    let mut body = serde_json::to_string_pretty(report)?;
    body.push('\n');
    match path {
        Some(p) => atomic_write(p, body.as_bytes()),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_rfc4180_with_crlf_and_17_digit_reals() {
        let rows = vec![
            vec![CsvCell::Int(0), CsvCell::Real(0.5), CsvCell::Flag(false)],
            vec![CsvCell::Int(1), CsvCell::Real(f64::INFINITY), CsvCell::Flag(true)],
        ];
        let text = render_csv(&["trial", "sup_dev", "exceeded"], &rows).unwrap();
        assert_eq!(
            text,
            "trial,sup_dev,exceeded\r\n0,5.0000000000000000e-1,0\r\n1,inf,1\r\n"
        );
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let text = render_csv(&["epsilon", "value", "flags"], &[]).unwrap();
        assert_eq!(text, "epsilon,value,flags\r\n");
    }

    #[test]
    fn fields_with_commas_are_quoted() {
        let rows = vec![vec![CsvCell::Str("a,b\"c".to_string())]];
        let text = render_csv(&["flags"], &rows).unwrap();
        assert_eq!(text, "flags\r\n\"a,b\"\"c\"\r\n");
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let rows = vec![vec![CsvCell::Int(1)]];
        assert!(render_csv(&["a", "b"], &rows).is_err());
    }

    #[test]
    fn atomic_write_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        atomic_write(&path, b"{}\n").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"{}\n");
        // overwrite is atomic too
        atomic_write(&path, b"{\"x\":1}\n").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"{\"x\":1}\n");
    }
}
