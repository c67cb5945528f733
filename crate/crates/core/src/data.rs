//! CSV input.
//!
//! One-sample files hold a single column of numbers. Two-sample files hold
//! two columns (`x,y`); blank cells are skipped, so the groups may have
//! different lengths. A first row with no numeric cell is
//! taken as a header. Numbers use `.` as the decimal separator regardless of
//! locale.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Reads `n_cols` numeric columns; blank cells are skipped.
pub fn read_columns<R: Read>(input: R, n_cols: usize) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut cols = vec![Vec::new(); n_cols];
    let mut first = true;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line() as usize);
            Error::Parse {
                row,
                column: 0,
                message: e.to_string(),
            }
        })?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        if first {
            first = false;
            let header = rec
                .iter()
                .all(|c| c.is_empty() || c.parse::<f64>().is_err());
            if header && rec.iter().any(|c| !c.is_empty()) {
                continue;
            }
        }
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() > n_cols && rec.iter().skip(n_cols).any(|c| !c.is_empty()) {
            return Err(Error::Parse {
                row,
                column: n_cols + 1,
                message: format!("expected {n_cols} column(s), found {}", rec.len()),
            });
        }
        for (j, cell) in rec.iter().take(n_cols).enumerate() {
            if cell.is_empty() {
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column: j + 1,
                message: format!("`{cell}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    column: j + 1,
                    message: format!("`{cell}` is not finite"),
                });
            }
            cols[j].push(v);
        }
    }
    Ok(cols)
}

fn require(name: &str, v: &[f64]) -> Result<()> {
    if v.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{name} has {} value(s), need at least 2",
            v.len()
        )));
    }
    Ok(())
}

pub fn read_one_sample<R: Read>(input: R) -> Result<Vec<f64>> {
    let mut cols = read_columns(input, 1)?;
    let y = cols.pop().unwrap_or_default();
    require("data", &y)?;
    Ok(y)
}

pub fn read_two_sample<R: Read>(input: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut cols = read_columns(input, 2)?.into_iter();
    let x = cols.next().unwrap_or_default();
    let y = cols.next().unwrap_or_default();
    require("x", &x)?;
    require("y", &y)?;
    Ok((x, y))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_one_sample_file(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    read_one_sample(open(path.as_ref())?)
}

pub fn read_two_sample_file(path: impl AsRef<Path>) -> Result<(Vec<f64>, Vec<f64>)> {
    read_two_sample(open(path.as_ref())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SLEEP: &str = "0.7\n-1.1\n-0.2\n1.2\n0.1\n3.4\n3.7\n0.8\n1.8\n2.0\n";

    #[test]
    fn sleep_column() {
        let y = read_one_sample(SLEEP.as_bytes()).unwrap();
        assert_eq!(y.len(), 10);
        assert_eq!(y[1], -1.1);
        let with_header = format!("diff\n{SLEEP}");
        assert_eq!(read_one_sample(with_header.as_bytes()).unwrap(), y);
        let crlf = SLEEP.replace('\n', "\r\n");
        assert_eq!(read_one_sample(crlf.as_bytes()).unwrap(), y);
    }

    #[test]
    fn empty_and_short_inputs() {
        assert!(matches!(
            read_one_sample("".as_bytes()),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            read_one_sample("y\n1.5\n".as_bytes()),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            read_two_sample("x,y\n1,2\n3,\n".as_bytes()),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn bad_cell_names_row() {
        let e = read_one_sample("1.0\n2.0\nabc\n4.0\n".as_bytes()).unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                row: 3,
                column: 1,
                message: "`abc` is not a number".into()
            }
        );
        let e = read_two_sample("x,y\n1,2\n3,1,5\n".as_bytes()).unwrap_err();
        assert!(matches!(
            e,
            Error::Parse {
                row: 3,
                column: 3,
                ..
            }
        ));
        let e = read_one_sample("1\n2\ninf\n".as_bytes()).unwrap_err();
        assert!(matches!(e, Error::Parse { row: 3, .. }));
    }

    #[test]
    fn unequal_groups() {
        let (x, y) = read_two_sample("x,y\n1,4\n2,5\n3,\n,6\n".as_bytes()).unwrap();
        assert_eq!(x, vec![1.0, 2.0, 3.0]);
        assert_eq!(y, vec![4.0, 5.0, 6.0]);
    }

    #[test]
    fn comma_decimal_is_not_accepted_as_number() {
        // "1,5" splits into two cells in a one-column file.
        assert!(read_one_sample("1,5\n2\n".as_bytes()).is_err());
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            read_one_sample_file("/nonexistent/data.csv"),
            Err(Error::Io(_))
        ));
    }
}
