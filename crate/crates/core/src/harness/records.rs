use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Column order of the run CSV.
pub const CSV_COLUMNS: [&str; 12] = [
    "run_id",
    "problem",
    "n",
    "lambda",
    "algo",
    "p_mode",
    "seed",
    "evaluations",
    "generations",
    "hit_target",
    "first_hit_evaluation",
    "best_fitness",
];

/// One run. `first_hit_evaluation` is empty when the target was not hit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub run_id: u64,
    pub problem: String,
    pub n: usize,
    pub lambda: usize,
    pub algo: String,
    pub p_mode: String,
    pub seed: u64,
    pub evaluations: u64,
    pub generations: u64,
    pub hit_target: bool,
    pub first_hit_evaluation: Option<u64>,
    pub best_fitness: f64,
}

pub fn write_rows<W: Write>(writer: W, rows: &[CsvRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if rows.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(reader: R) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(reader);
    let rows = r.deserialize().collect::<std::result::Result<Vec<CsvRow>, _>>()?;
    Ok(rows)
}

pub fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<()> {
    write_rows(File::create(path)?, rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    read_rows(File::open(path)?)
}
