//! Result emission and ingestion.
//!
//! CSV is the interchange format: a pinned header, LF line endings, `.`
//! decimal separators, and floats printed with Rust's shortest
//! round-trippable representation, so parsing a file back yields exactly
//! the rows that were written. Markdown is for humans, plot data for
//! gnuplot-style tooling.

use std::error::Error;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::ResultRow;
use crate::workload::OrderingKind;

/// Column layout of every results CSV. Parsers reject anything else.
pub const CSV_HEADER: &str = "size,ordering,arity,sw_time_s,sw_time_stddev,hw_cycles,hw_time_s,sw_energy_j,hw_energy_j,time_ratio,energy_ratio";

#[derive(Debug)]
pub enum ReportError {
    Io(std::io::Error),
    NoRows,
    BadHeader { found: String },
    BadRow { line: usize, message: String },
}

impl fmt::Display for ReportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportError::Io(e) => write!(f, "io error: {e}"),
            ReportError::NoRows => write!(f, "refusing to emit a report with no rows"),
            ReportError::BadHeader { found } => {
                write!(f, "unexpected CSV header {found:?} (expected {CSV_HEADER:?})")
            }
            ReportError::BadRow { line, message } => {
                write!(f, "bad CSV row on line {line}: {message}")
            }
        }
    }
}

impl Error for ReportError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        match self {
            ReportError::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for ReportError {
    fn from(e: std::io::Error) -> Self {
        ReportError::Io(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
    PlotData,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" => Ok(ReportFormat::Markdown),
            "plotdata" => Ok(ReportFormat::PlotData),
            other => Err(format!(
                "unknown report format {other:?} (expected csv, markdown or plotdata)"
            )),
        }
    }
}

fn canonical(rows: &[ResultRow]) -> Vec<&ResultRow> {
    let mut sorted: Vec<&ResultRow> = rows.iter().collect();
    sorted.sort_by_key(|r| (r.size, r.ordering, r.arity));
    sorted
}

/// Render rows as CSV, canonically ordered, trailing newline included.
pub fn csv_string(rows: &[ResultRow]) -> Result<String, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::NoRows);
    }
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in canonical(rows) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            row.size,
            row.ordering,
            row.arity,
            row.sw_time_s,
            row.sw_time_stddev,
            row.hw_cycles,
            row.hw_time_s,
            row.sw_energy_j,
            row.hw_energy_j,
            row.time_ratio,
            row.energy_ratio,
        ));
    }
    Ok(out)
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<(), ReportError> {
    fs::write(path, csv_string(rows)?)?;
    Ok(())
}

/// Parse a results CSV produced by [`csv_string`] (or by hand, with the
/// same header). Row order is preserved as found.
pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>, ReportError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(ReportError::BadHeader {
        found: String::new(),
    })?;
    if header != CSV_HEADER {
        return Err(ReportError::BadHeader {
            found: header.to_string(),
        });
    }

    let mut rows = Vec::new();
    for (index, line) in lines {
        if line.is_empty() {
            continue;
        }
        let line_no = index + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(ReportError::BadRow {
                line: line_no,
                message: format!("expected 11 fields, got {}", fields.len()),
            });
        }
        let bad = |message: String| ReportError::BadRow {
            line: line_no,
            message,
        };
        fn field<T: FromStr>(raw: &str, name: &str) -> Result<T, String>
        where
            T::Err: fmt::Display,
        {
            raw.parse()
                .map_err(|e| format!("field {name}: cannot parse {raw:?}: {e}"))
        }
        rows.push(ResultRow {
            size: field(fields[0], "size").map_err(&bad)?,
            ordering: field::<OrderingKind>(fields[1], "ordering").map_err(&bad)?,
            arity: field(fields[2], "arity").map_err(&bad)?,
            sw_time_s: field(fields[3], "sw_time_s").map_err(&bad)?,
            sw_time_stddev: field(fields[4], "sw_time_stddev").map_err(&bad)?,
            hw_cycles: field(fields[5], "hw_cycles").map_err(&bad)?,
            hw_time_s: field(fields[6], "hw_time_s").map_err(&bad)?,
            sw_energy_j: field(fields[7], "sw_energy_j").map_err(&bad)?,
            hw_energy_j: field(fields[8], "hw_energy_j").map_err(&bad)?,
            time_ratio: field(fields[9], "time_ratio").map_err(&bad)?,
            energy_ratio: field(fields[10], "energy_ratio").map_err(&bad)?,
        });
    }
    Ok(rows)
}

pub fn load_csv(path: &Path) -> Result<Vec<ResultRow>, ReportError> {
    parse_csv(&fs::read_to_string(path)?)
}

/// Human-readable table: times in ms, energies in mJ, three decimals.
pub fn markdown_string(rows: &[ResultRow]) -> Result<String, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::NoRows);
    }
    let mut out = String::new();
    out.push_str(
        "| size | ordering | k | sw time (ms) | sw stddev (ms) | hw cycles | hw time (ms) | sw energy (mJ) | hw energy (mJ) | time ratio | energy ratio |\n",
    );
    out.push_str("|---:|:---|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n");
    for row in canonical(rows) {
        out.push_str(&format!(
            "| {} | {} | {} | {:.3} | {:.3} | {} | {:.3} | {:.3} | {:.3} | {:.3} | {:.3} |\n",
            row.size,
            row.ordering,
            row.arity,
            row.sw_time_s * 1e3,
            row.sw_time_stddev * 1e3,
            row.hw_cycles,
            row.hw_time_s * 1e3,
            row.sw_energy_j * 1e3,
            row.hw_energy_j * 1e3,
            row.time_ratio,
            row.energy_ratio,
        ));
    }
    Ok(out)
}

pub fn emit_markdown(rows: &[ResultRow], path: &Path) -> Result<(), ReportError> {
    fs::write(path, markdown_string(rows)?)?;
    Ok(())
}

/// Space-separated series, one file per (ordering, arity) curve, ready for
/// `plot "..." using 1:2` style tooling. Returns the files written.
pub fn emit_plotdata(rows: &[ResultRow], dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::NoRows);
    }
    fs::create_dir_all(dir)?;
    // canonical order is size-major, so each group's sizes come out ascending
    let mut groups: std::collections::BTreeMap<(OrderingKind, usize), Vec<&ResultRow>> =
        std::collections::BTreeMap::new();
    for row in canonical(rows) {
        groups.entry((row.ordering, row.arity)).or_default().push(row);
    }

    let mut written = Vec::new();
    for ((ordering, arity), group) in groups {
        let mut out = String::new();
        out.push_str(
            "# size sw_time_s hw_time_s sw_energy_j hw_energy_j time_ratio energy_ratio\n",
        );
        for row in group {
            out.push_str(&format!(
                "{} {} {} {} {} {} {}\n",
                row.size,
                row.sw_time_s,
                row.hw_time_s,
                row.sw_energy_j,
                row.hw_energy_j,
                row.time_ratio,
                row.energy_ratio,
            ));
        }
        let path = dir.join(format!("{ordering}_k{arity}.dat"));
        fs::write(&path, out)?;
        written.push(path);
    }
    Ok(written)
}

/// Emit in the chosen format. For CSV and markdown `out` is the target
/// file; for plot data it is a directory. Returns every file written.
pub fn emit_report(
    rows: &[ResultRow],
    format: ReportFormat,
    out: &Path,
) -> Result<Vec<PathBuf>, ReportError> {
    match format {
        ReportFormat::Csv => {
            emit_csv(rows, out)?;
            Ok(vec![out.to_path_buf()])
        }
        ReportFormat::Markdown => {
            emit_markdown(rows, out)?;
            Ok(vec![out.to_path_buf()])
        }
        ReportFormat::PlotData => emit_plotdata(rows, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(size: usize, ordering: OrderingKind, arity: usize) -> ResultRow {
        ResultRow {
            size,
            ordering,
            arity,
            sw_time_s: 0.1 + 0.2, // deliberately not exactly representable
            sw_time_stddev: 1e-9,
            hw_cycles: 123_456_789,
            hw_time_s: 1.23456789,
            sw_energy_j: 2.7182818284590455,
            hw_energy_j: f64::MIN_POSITIVE,
            time_ratio: 1.486,
            energy_ratio: 52.241,
        }
    }

    #[test]
    fn csv_round_trips_losslessly() {
        let rows = vec![
            row(4096, OrderingKind::Random, 2),
            row(8192, OrderingKind::Sorted, 128),
        ];
        let text = csv_string(&rows).unwrap();
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed, rows);
        // and printing the parse is byte-identical
        assert_eq!(csv_string(&parsed).unwrap(), text);
    }

    #[test]
    fn csv_layout_is_pinned() {
        let text = csv_string(&[row(16, OrderingKind::Random, 4)]).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let data = lines.next().unwrap();
        assert!(data.starts_with("16,random,4,"), "row was {data:?}");
        assert!(!text.contains('\r'), "LF endings only");
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn emitted_rows_are_canonically_sorted() {
        let rows = vec![
            row(8192, OrderingKind::Sorted, 2),
            row(4096, OrderingKind::Sorted, 4),
            row(4096, OrderingKind::Random, 8),
            row(4096, OrderingKind::Sorted, 2),
        ];
        let parsed = parse_csv(&csv_string(&rows).unwrap()).unwrap();
        let keys: Vec<(usize, OrderingKind, usize)> =
            parsed.iter().map(|r| (r.size, r.ordering, r.arity)).collect();
        assert_eq!(
            keys,
            vec![
                (4096, OrderingKind::Random, 8),
                (4096, OrderingKind::Sorted, 2),
                (4096, OrderingKind::Sorted, 4),
                (8192, OrderingKind::Sorted, 2),
            ]
        );
    }

    #[test]
    fn parser_rejects_foreign_headers_and_broken_rows() {
        assert!(matches!(
            parse_csv("a,b,c\n1,2,3\n"),
            Err(ReportError::BadHeader { .. })
        ));
        let text = format!("{CSV_HEADER}\n1,2,3\n");
        match parse_csv(&text) {
            Err(ReportError::BadRow { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected BadRow, got {other:?}"),
        }
        let text = format!("{CSV_HEADER}\n16,diagonal,2,0,0,1,1,1,1,1,1\n");
        assert!(matches!(parse_csv(&text), Err(ReportError::BadRow { .. })));
    }

    #[test]
    fn empty_reports_are_refused() {
        assert!(matches!(csv_string(&[]), Err(ReportError::NoRows)));
        assert!(matches!(markdown_string(&[]), Err(ReportError::NoRows)));
    }

    #[test]
    fn markdown_uses_milli_units() {
        let mut r = row(4096, OrderingKind::Random, 2);
        r.sw_time_s = 0.008001;
        r.hw_time_s = 0.005386;
        r.sw_energy_j = 0.02727;
        r.hw_energy_j = 0.000522;
        let text = markdown_string(&[r]).unwrap();
        assert!(text.contains("| 8.001 |"), "{text}");
        assert!(text.contains("| 5.386 |"), "{text}");
        assert!(text.contains("| 27.270 |"), "{text}");
        assert!(text.contains("| 0.522 |"), "{text}");
        assert!(text.contains("| 1.486 |"), "{text}");
    }

    #[test]
    fn plotdata_splits_by_curve() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec![
            row(4096, OrderingKind::Random, 2),
            row(8192, OrderingKind::Random, 2),
            row(4096, OrderingKind::Random, 16),
        ];
        let mut written = emit_plotdata(&rows, dir.path()).unwrap();
        written.sort();
        let names: Vec<String> = written
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        assert_eq!(names, vec!["random_k16.dat", "random_k2.dat"]);
        let k2 = fs::read_to_string(dir.path().join("random_k2.dat")).unwrap();
        assert_eq!(k2.lines().count(), 3, "header plus two sizes: {k2}");
        assert!(k2.starts_with("# size "));
    }

    #[test]
    fn emit_report_dispatches_and_reports_paths() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec![row(64, OrderingKind::Reversed, 4)];

        let csv = dir.path().join("out.csv");
        assert_eq!(
            emit_report(&rows, ReportFormat::Csv, &csv).unwrap(),
            vec![csv.clone()]
        );
        assert!(csv.is_file());

        let md = dir.path().join("out.md");
        emit_report(&rows, ReportFormat::Markdown, &md).unwrap();
        assert!(fs::read_to_string(&md).unwrap().starts_with("| size |"));

        let plots = dir.path().join("plots");
        let written = emit_report(&rows, ReportFormat::PlotData, &plots).unwrap();
        assert_eq!(written.len(), 1);
        assert!(written[0].is_file());
    }

    #[test]
    fn format_names_parse() {
        assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert_eq!("markdown".parse::<ReportFormat>().unwrap(), ReportFormat::Markdown);
        assert_eq!("plotdata".parse::<ReportFormat>().unwrap(), ReportFormat::PlotData);
        assert!("tsv".parse::<ReportFormat>().is_err());
    }
}
