//! JSON and CSV emitters. CSV files carry a header row and LF line endings.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::SuiteResult;
use crate::suite::ResidualReport;

pub fn to_json(report: &ResidualReport) -> SuiteResult<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// One row per sample point: coordinates, residual norms, degeneracy and
/// the signature of `γ` as `p;m;z`.
pub fn write_points_csv<W: Write>(report: &ResidualReport, out: W) -> SuiteResult<()> {
    let dim = report.points.first().map_or(0, |p| p.coords.len());
    let mut w = csv_writer(out);
    let mut header: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
    header.extend(["max_abs", "frobenius", "degenerate", "signature"].map(String::from));
    w.write_record(&header)?;
    for (p, sig) in report.points.iter().zip(&report.signature) {
        let mut row: Vec<String> = p.coords.iter().map(|c| c.to_string()).collect();
        row.push(fmt_opt(p.max_abs));
        row.push(fmt_opt(p.frobenius));
        row.push(p.degenerate.to_string());
        row.push(sig.map(|s| format!("{};{};{}", s[0], s[1], s[2])).unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// CSV path written next to a JSON report.
pub fn companion_csv(json_path: &Path) -> PathBuf {
    json_path.with_extension("csv")
}

/// Writes `report.json`-style output to `path` and the per-point CSV beside it.
pub fn write_report(report: &ResidualReport, path: &Path) -> SuiteResult<PathBuf> {
    std::fs::write(path, to_json(report)?)?;
    let csv_path = companion_csv(path);
    write_points_csv(report, std::fs::File::create(&csv_path)?)?;
    Ok(csv_path)
}
