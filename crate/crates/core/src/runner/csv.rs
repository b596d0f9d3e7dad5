//! Fixed-schema CSV files: per-run samples and sweep summaries.
//!
//! LF line endings, `.` decimal separator, every float written with 17
//! significant digits so that parsing restores the exact value.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::measures::{CoherenceSample, SimulationResult};

pub const CSV_HEADER: &str = "t,sx,l1,trace_dev,purity";
pub const SUMMARY_HEADER: &str = "M,coherence_time,revivals";
const UNREACHED: &str = "unreached";

/// One line of a sweep summary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummaryRow {
    pub ambient_count: usize,
    pub coherence_time: Option<f64>,
    pub revivals: usize,
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(samples: &[CoherenceSample], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_float(s.t),
            fmt_float(s.sx),
            fmt_float(s.l1),
            fmt_float(s.trace_dev),
            fmt_float(s.purity)
        )?;
    }
    w.flush()
}

pub fn emit_csv(result: &SimulationResult, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(&result.samples, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

fn parse_field(field: &str, line: usize) -> Result<f64> {
    field.trim().parse().map_err(|_| Error::Csv {
        line,
        detail: format!("not a number: '{field}'"),
    })
}

fn check_header(first: Option<String>, expected: &str) -> Result<()> {
    match first {
        Some(h) if h.trim_end_matches('\r') == expected => Ok(()),
        Some(h) => Err(Error::Csv {
            line: 1,
            detail: format!("expected header '{expected}', found '{h}'"),
        }),
        None => Err(Error::Csv {
            line: 1,
            detail: "empty file".into(),
        }),
    }
}

pub fn parse_csv(r: impl BufRead) -> Result<Vec<CoherenceSample>> {
    let mut lines = r.lines();
    let io = |e: std::io::Error| Error::Csv {
        line: 0,
        detail: e.to_string(),
    };
    check_header(lines.next().transpose().map_err(io)?, CSV_HEADER)?;
    let mut out = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line.map_err(io)?;
        let lineno = idx + 2;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Csv {
                line: lineno,
                detail: format!("expected 5 fields, found {}", fields.len()),
            });
        }
        out.push(CoherenceSample {
            t: parse_field(fields[0], lineno)?,
            sx: parse_field(fields[1], lineno)?,
            l1: parse_field(fields[2], lineno)?,
            trace_dev: parse_field(fields[3], lineno)?,
            purity: parse_field(fields[4], lineno)?,
        });
    }
    Ok(out)
}

pub fn read_csv(path: &Path) -> Result<Vec<CoherenceSample>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_csv(BufReader::new(file))
}

pub fn write_summary(rows: &[SummaryRow], path: &Path) -> Result<()> {
    let write = || -> std::io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "{SUMMARY_HEADER}")?;
        for row in rows {
            let t = row
                .coherence_time
                .map_or_else(|| UNREACHED.to_string(), fmt_float);
            writeln!(w, "{},{},{}", row.ambient_count, t, row.revivals)?;
        }
        w.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

pub fn parse_summary(r: impl BufRead) -> Result<Vec<SummaryRow>> {
    let mut lines = r.lines();
    let io = |e: std::io::Error| Error::Csv {
        line: 0,
        detail: e.to_string(),
    };
    check_header(lines.next().transpose().map_err(io)?, SUMMARY_HEADER)?;
    let mut out = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line.map_err(io)?;
        let lineno = idx + 2;
        if line.is_empty() {
            continue;
        }
        let bad = |detail: String| Error::Csv {
            line: lineno,
            detail,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(bad(format!("expected 3 fields, found {}", fields.len())));
        }
        let ambient_count = fields[0]
            .parse()
            .map_err(|_| bad(format!("bad M '{}'", fields[0])))?;
        let coherence_time = match fields[1] {
            UNREACHED => None,
            f => Some(parse_field(f, lineno)?),
        };
        let revivals = fields[2]
            .parse()
            .map_err(|_| bad(format!("bad revival count '{}'", fields[2])))?;
        out.push(SummaryRow {
            ambient_count,
            coherence_time,
            revivals,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(t: f64, sx: f64, l1: f64, trace_dev: f64, purity: f64) -> CoherenceSample {
        CoherenceSample {
            t,
            sx,
            l1,
            trace_dev,
            purity,
        }
    }

    #[test]
    fn header_and_first_row() {
        let mut buf = Vec::new();
        write_csv(&[sample(0.0, 1.0, 1.0, 0.0, 1.0)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert!(lines.next().unwrap().starts_with("0.0000000000000000e0,"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn rejects_wrong_header() {
        let err = parse_csv("a,b\n1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Csv { line: 1, .. }));
        let err = parse_csv(format!("{CSV_HEADER}\n1,2,3\n").as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Csv { line: 2, .. }));
    }

    proptest! {
        #[test]
        fn samples_round_trip_exactly(
            rows in proptest::collection::vec(
                (0.0f64..1e3, -1.0f64..1.0, 0.0f64..1.0, 0.0f64..1e-9, 0.5f64..1.0), 0..20)
        ) {
            let samples: Vec<CoherenceSample> =
                rows.iter().map(|&(a, b, c, d, e)| sample(a, b, c, d, e)).collect();
            let mut buf = Vec::new();
            write_csv(&samples, &mut buf).unwrap();
            prop_assert_eq!(parse_csv(buf.as_slice()).unwrap(), samples);
        }
    }

    #[test]
    fn summary_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let rows = vec![
            SummaryRow {
                ambient_count: 2,
                coherence_time: Some(44.4375),
                revivals: 0,
            },
            SummaryRow {
                ambient_count: 8,
                coherence_time: None,
                revivals: 3,
            },
        ];
        write_summary(&rows, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("M,coherence_time,revivals\n2,"));
        assert!(text.contains("\n8,unreached,3\n"));
        assert_eq!(parse_summary(text.as_bytes()).unwrap(), rows);
    }
}
