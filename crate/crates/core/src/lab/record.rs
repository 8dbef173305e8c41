use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::engines::CellHit;
use crate::error::{Error, Result};

/// Column order of the sweep CSV.
pub const CSV_COLUMNS: [&str; 15] = [
    "config_id",
    "problem",
    "n",
    "k_or_cc",
    "p_m",
    "seed",
    "stream",
    "t_cover",
    "t_opt",
    "t_copt",
    "t_approx",
    "final_best_feasible",
    "final_mst_weight",
    "truncated",
    "wall_ns",
];

/// One run: identification, milestones in evaluations, and final values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config_id: String,
    /// Problem descriptor, e.g. `onemax` or `coverage[r=3,u=40]#7`.
    pub problem: String,
    /// Genotype length.
    pub n: usize,
    /// Granularity for the number-of-ones space, `cc` for the
    /// connected-components space, `pareto` for GSEMO.
    pub k_or_cc: String,
    pub p_m: f64,
    pub seed: u64,
    pub stream: u64,
    pub t_cover: Option<u64>,
    pub t_opt: Option<u64>,
    pub t_copt: Option<u64>,
    pub t_approx: Option<u64>,
    pub final_best_feasible: Option<f64>,
    pub final_mst_weight: Option<f64>,
    pub truncated: bool,
    pub wall_ns: u64,
    /// Approximation factor behind `t_approx`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx_alpha: Option<f64>,
    /// Reference optimum the approximation factor is applied to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx_reference: Option<f64>,
    #[serde(default)]
    pub evals: u64,
    /// First hit of the all-zeros genotype's cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_zero: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub first_cover: Vec<Option<CellHit>>,
}

impl RunRecord {
    /// `t_cover <= t_copt` and `t_opt <= t_copt` wherever both are present.
    pub fn milestones_ordered(&self) -> bool {
        match self.t_copt {
            None => true,
            Some(c) => self.t_cover.is_none_or(|t| t <= c) && self.t_opt.is_none_or(|t| t <= c),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn csv_row(&self) -> CsvRow {
        CsvRow {
            config_id: self.config_id.clone(),
            problem: self.problem.clone(),
            n: self.n,
            k_or_cc: self.k_or_cc.clone(),
            p_m: self.p_m,
            seed: self.seed,
            stream: self.stream,
            t_cover: self.t_cover,
            t_opt: self.t_opt,
            t_copt: self.t_copt,
            t_approx: self.t_approx,
            final_best_feasible: self.final_best_feasible,
            final_mst_weight: self.final_mst_weight,
            truncated: self.truncated,
            wall_ns: self.wall_ns,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    config_id: String,
    problem: String,
    n: usize,
    k_or_cc: String,
    p_m: f64,
    seed: u64,
    stream: u64,
    t_cover: Option<u64>,
    t_opt: Option<u64>,
    t_copt: Option<u64>,
    t_approx: Option<u64>,
    final_best_feasible: Option<f64>,
    final_mst_weight: Option<f64>,
    truncated: bool,
    wall_ns: u64,
}

impl From<CsvRow> for RunRecord {
    fn from(r: CsvRow) -> Self {
        RunRecord {
            config_id: r.config_id,
            problem: r.problem,
            n: r.n,
            k_or_cc: r.k_or_cc,
            p_m: r.p_m,
            seed: r.seed,
            stream: r.stream,
            t_cover: r.t_cover,
            t_opt: r.t_opt,
            t_copt: r.t_copt,
            t_approx: r.t_approx,
            final_best_feasible: r.final_best_feasible,
            final_mst_weight: r.final_mst_weight,
            truncated: r.truncated,
            wall_ns: r.wall_ns,
            approx_alpha: None,
            approx_reference: None,
            evals: 0,
            t_zero: None,
            first_cover: Vec::new(),
        }
    }
}

/// Streams records as CSV rows under the fixed header.
pub struct CsvSink<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(inner: W) -> Result<Self> {
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(inner);
        writer.write_record(CSV_COLUMNS)?;
        Ok(CsvSink { writer })
    }

    pub fn write(&mut self, record: &RunRecord) -> Result<()> {
        self.writer.serialize(record.csv_row())?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.writer.flush().map_err(|e| Error::io("<csv>", e))
    }

    pub fn into_inner(self) -> Result<W> {
        self.writer
            .into_inner()
            .map_err(|e| Error::io("<csv>", e.into_error()))
    }
}

pub fn write_csv<W: Write>(inner: W, records: &[RunRecord]) -> Result<()> {
    let mut sink = CsvSink::new(inner)?;
    for r in records {
        sink.write(r)?;
    }
    sink.flush()
}

pub fn records_to_csv_string(records: &[RunRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, records)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Reads records written by [`CsvSink`]. Fields absent from the CSV
/// schema come back empty.
pub fn read_csv<R: Read>(inner: R) -> Result<Vec<RunRecord>> {
    let mut reader = csv::Reader::from_reader(inner);
    let header = reader.headers()?.clone();
    if header.iter().ne(CSV_COLUMNS) {
        return Err(Error::Config(format!(
            "unexpected CSV header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    reader
        .deserialize::<CsvRow>()
        .map(|r| Ok(r?.into()))
        .collect()
}

/// One JSON object per line.
pub fn read_jsonl<R: Read>(inner: R) -> Result<Vec<RunRecord>> {
    let mut text = String::new();
    std::io::BufReader::new(inner)
        .read_to_string(&mut text)
        .map_err(|e| Error::io("<jsonl>", e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample() -> RunRecord {
        RunRecord {
            config_id: "c".into(),
            problem: "onemax".into(),
            n: 7,
            k_or_cc: "1".into(),
            p_m: 1.0 / 7.0,
            seed: 1,
            stream: 3,
            t_cover: Some(120),
            t_opt: Some(80),
            t_copt: Some(120),
            t_approx: None,
            final_best_feasible: None,
            final_mst_weight: None,
            truncated: false,
            wall_ns: 5,
            approx_alpha: None,
            approx_reference: None,
            evals: 0,
            t_zero: None,
            first_cover: Vec::new(),
        }
    }

    #[test]
    fn header_and_empty_fields() {
        let s = records_to_csv_string(&[sample()]).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        let row = lines.next().unwrap();
        assert!(row.starts_with("c,onemax,7,1,"));
        assert!(row.ends_with(",120,80,120,,,,false,5"));
    }

    #[test]
    fn csv_round_trip() {
        let mut r = sample();
        r.final_mst_weight = Some(17.0);
        let s = records_to_csv_string(&[r.clone(), sample()]).unwrap();
        let back = read_csv(s.as_bytes()).unwrap();
        assert_eq!(back, vec![r, sample()]);
    }

    #[test]
    fn ordering_invariant() {
        let mut r = sample();
        assert!(r.milestones_ordered());
        r.t_opt = Some(121);
        assert!(!r.milestones_ordered());
        r.t_copt = None;
        assert!(r.milestones_ordered());
    }

    #[test]
    fn jsonl_round_trip() {
        let r = sample();
        let line = serde_json::to_string(&r).unwrap();
        let back = read_jsonl(format!("{line}\n\n{line}\n").as_bytes()).unwrap();
        assert_eq!(back, vec![r.clone(), r]);
    }
}
