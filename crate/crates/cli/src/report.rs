//! CSV and JSON-lines report writers. Every CSV starts with a versioned
//! schema comment followed by the header row; all values come from
//! deterministic computations, so files are byte-stable across runs.

use anyhow::{Context, Result};
use rotorlab_core::montecarlo::MCEstimate;
use rotorlab_core::shape::ShapeReport;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

pub struct CsvWriter {
    out: BufWriter<File>,
}

impl CsvWriter {
    pub fn create(path: &Path, schema: &str, header: &str) -> Result<CsvWriter> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        let file =
            File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut out = BufWriter::new(file);
        writeln!(out, "# schema: {schema} v1")?;
        writeln!(out, "{header}")?;
        Ok(CsvWriter { out })
    }

    pub fn row(&mut self, line: &str) -> Result<()> {
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

pub fn shape_curve_writer(path: &Path) -> Result<CsvWriter> {
    CsvWriter::create(
        path,
        "shape-curve",
        "n,psi,psi_ball,sym_diff,lebesgue_error,inradius,outradius,T_n",
    )
}

pub fn shape_curve_row(w: &mut CsvWriter, r: &ShapeReport) -> Result<()> {
    w.row(&format!(
        "{},{},{},{},{},{},{},{}",
        r.n, r.psi, r.psi_ball, r.sym_diff, r.lebesgue_error, r.inradius, r.outradius, r.total_steps
    ))
}

pub fn iso_writer(path: &Path) -> Result<CsvWriter> {
    CsvWriter::create(path, "iso-report", "n,d,max_e,phi_hat,argmax_rle")
}

pub fn mc_writer(path: &Path) -> Result<CsvWriter> {
    CsvWriter::create(path, "mc", "experiment,params,mean,stderr,trials,seed")
}

pub fn mc_row(w: &mut CsvWriter, experiment: &str, params: &str, est: &MCEstimate) -> Result<()> {
    w.row(&format!(
        "{experiment},{params},{},{},{},{}",
        est.mean, est.stderr, est.trials, est.seed
    ))
}

/// One pass/fail record of the verification suite, emitted as a JSON line.
pub struct CheckRecord {
    pub check: &'static str,
    pub pass: bool,
    pub value: f64,
    pub detail: String,
}

pub fn print_check(rec: &CheckRecord) {
    let line = serde_json::json!({
        "check": rec.check,
        "pass": rec.pass,
        "value": rec.value,
        "detail": rec.detail,
    });
    println!("{line}");
}
