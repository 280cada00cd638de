//! CSV tables and plain-PGM heatmaps.

use std::fmt::Write as _;
use std::path::Path;

use crate::scan::{Scan, ScanRecord};
use crate::CliError;

const HEADER: &str = "theta_a_deg,theta_b_deg,tdcs,concurrence,eof,bell_lhs,asymmetry,measurable";

/// One CSV row as written; `Display` for f64 is the shortest string that
/// parses back to the same value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub theta_a_deg: f64,
    pub theta_b_deg: f64,
    pub tdcs: f64,
    pub concurrence: f64,
    pub eof: f64,
    pub bell_lhs: f64,
    pub asymmetry: f64,
    pub measurable: bool,
    pub tdcs_stderr: Option<f64>,
}

impl From<&ScanRecord> for CsvRow {
    fn from(r: &ScanRecord) -> CsvRow {
        CsvRow {
            theta_a_deg: r.theta_a_deg,
            theta_b_deg: r.theta_b_deg,
            tdcs: r.tdcs,
            concurrence: r.concurrence,
            eof: r.eof,
            bell_lhs: r.bell_lhs,
            asymmetry: r.asymmetry,
            measurable: r.measurable,
            tdcs_stderr: r.tdcs_stderr,
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn csv_string(records: &[ScanRecord]) -> Result<String, CliError> {
    if records.is_empty() {
        return Err(CliError::Config("no records to write".into()));
    }
    let with_err = records[0].tdcs_stderr.is_some();
    let mut out = String::from(HEADER);
    if with_err {
        out.push_str(",tdcs_stderr");
    }
    out.push('\n');
    let mut sorted: Vec<&ScanRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.theta_a_deg.total_cmp(&b.theta_a_deg).then(a.theta_b_deg.total_cmp(&b.theta_b_deg)));
    for r in sorted {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.theta_a_deg, r.theta_b_deg, r.tdcs, r.concurrence, r.eof, r.bell_lhs, r.asymmetry, r.measurable
        );
        if with_err {
            let _ = write!(out, ",{}", r.tdcs_stderr.unwrap_or(0.0));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_csv(records: &[ScanRecord], path: &Path) -> Result<(), CliError> {
    write_file(path, &csv_string(records)?)
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, CliError> {
    let bad = |line: usize, m: &str| CliError::Config(format!("csv line {line}: {m}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad(1, "empty file"))?;
    let with_err = match header.strip_prefix(HEADER) {
        Some("") => false,
        Some(",tdcs_stderr") => true,
        _ => return Err(bad(1, "unexpected header")),
    };
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 8 + with_err as usize {
                return Err(bad(i + 2, "wrong number of fields"));
            }
            let num = |k: usize| f[k].parse::<f64>().map_err(|e| bad(i + 2, &e.to_string()));
            Ok(CsvRow {
                theta_a_deg: num(0)?,
                theta_b_deg: num(1)?,
                tdcs: num(2)?,
                concurrence: num(3)?,
                eof: num(4)?,
                bell_lhs: num(5)?,
                asymmetry: num(6)?,
                measurable: f[7].parse().map_err(|_| bad(i + 2, "measurable must be true or false"))?,
                tdcs_stderr: if with_err { Some(num(8)?) } else { None },
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Tdcs,
    Concurrence,
    Eof,
    BellLhs,
    Asymmetry,
}

impl Field {
    pub const ALL: [Field; 5] = [Field::Tdcs, Field::Concurrence, Field::Eof, Field::BellLhs, Field::Asymmetry];

    pub fn name(&self) -> &'static str {
        match self {
            Field::Tdcs => "tdcs",
            Field::Concurrence => "concurrence",
            Field::Eof => "eof",
            Field::BellLhs => "bell_lhs",
            Field::Asymmetry => "asymmetry",
        }
    }

    pub fn of(&self, r: &ScanRecord) -> f64 {
        match self {
            Field::Tdcs => r.tdcs,
            Field::Concurrence => r.concurrence,
            Field::Eof => r.eof,
            Field::BellLhs => r.bell_lhs,
            Field::Asymmetry => r.asymmetry,
        }
    }
}

/// Gray levels: 255·v/max over the unmasked cells, rounded; masked cells and
/// negative values are 0.
pub fn pgm_string(values: &[f64], mask: &[bool], width: usize, height: usize) -> Result<String, CliError> {
    if values.len() != width * height || mask.len() != values.len() {
        return Err(CliError::Config("image field is not rectangular".into()));
    }
    let max = values.iter().zip(mask).filter(|(_, &m)| m).fold(0.0f64, |m, (&v, _)| m.max(v));
    let mut out = format!("P2\n{width}\n{height}\n255\n");
    for (&v, &m) in values.iter().zip(mask) {
        let px = if m && max > 0.0 && v > 0.0 { (255.0 * v / max).round().min(255.0) as u32 } else { 0 };
        let _ = writeln!(out, "{px}");
    }
    Ok(out)
}

/// Rows run over θA (first row = smallest), columns over θB.
pub fn write_pgm(scan: &Scan, field: Field, path: &Path) -> Result<(), CliError> {
    let values: Vec<f64> = scan.records.iter().map(|r| field.of(r)).collect();
    let mask: Vec<bool> = scan.records.iter().map(|r| r.measurable).collect();
    write_file(path, &pgm_string(&values, &mask, scan.theta_b.len(), scan.theta_a.len())?)
}

/// CSV plus one image per field into `dir`.
pub fn write_all(scan: &Scan, dir: &Path, csv_name: &str, prefix: &str) -> Result<Vec<std::path::PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut written = vec![dir.join(csv_name)];
    write_csv(&scan.records, &written[0])?;
    for f in Field::ALL {
        let p = dir.join(format!("{prefix}_{}.pgm", f.name()));
        write_pgm(scan, f, &p)?;
        written.push(p);
    }
    Ok(written)
}
