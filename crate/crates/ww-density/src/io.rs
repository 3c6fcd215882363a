//! File formats: CSV for observations, grid fields, and bands; JSON for
//! metadata and experiment reports.
//!
//! Floating-point values are written with Rust's shortest round-trip decimal
//! formatting, so a write/read cycle reproduces every value bit for bit and
//! repeated runs produce byte-identical files.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bandwidth::BandwidthPlan;
use crate::confidence::ConfidenceBand;
use crate::error::{Error, Result};
use crate::estimators::{GridEstimate, Sample};
use crate::gls::TailModel;
use crate::grid::Grid;
use crate::kernels::KernelSpec;

fn csv_error(e: &csv::Error) -> Error {
    let line = e.position().map_or(0, csv::Position::line);
    Error::CsvParse {
        line,
        message: e.to_string(),
    }
}

/// Read observations from CSV, one point per row.
///
/// A leading header row is detected automatically (any row whose fields do
/// not all parse as numbers). Every data row must have the same number of
/// fields and contain only finite values; violations report the offending
/// line number.
pub fn read_sample<R: Read>(reader: R) -> Result<Sample> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut dim = 0usize;
    let mut flat: Vec<f64> = Vec::new();
    let mut first = true;
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map_or(0, csv::Position::line);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(str::parse::<f64>).collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if first => {
                // Header row; skip it.
                first = false;
                continue;
            }
            Err(e) => {
                return Err(Error::CsvParse {
                    line,
                    message: e.to_string(),
                })
            }
        };
        first = false;
        if dim == 0 {
            dim = row.len();
        } else if row.len() != dim {
            return Err(Error::CsvParse {
                line,
                message: format!("expected {dim} fields, got {}", row.len()),
            });
        }
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::CsvParse {
                line,
                message: format!("non-finite value {bad}"),
            });
        }
        flat.extend_from_slice(&row);
    }
    if flat.is_empty() {
        return Err(Error::EmptySample("no observations"));
    }
    Sample::new(dim, flat)
}

/// [`read_sample`] from a file path.
pub fn read_sample_csv(path: &Path) -> Result<Sample> {
    read_sample(BufReader::new(File::open(path)?))
}

fn coordinate_header(dim: usize) -> Vec<String> {
    (1..=dim).map(|j| format!("x{j}")).collect()
}

/// Write observations as CSV with an `x1..xd` header.
pub fn write_sample<W: Write>(writer: W, sample: &Sample) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(coordinate_header(sample.dim()))
        .map_err(|e| csv_error(&e))?;
    for point in sample.iter() {
        let row: Vec<String> = point.iter().map(f64::to_string).collect();
        wtr.write_record(row).map_err(|e| csv_error(&e))?;
    }
    wtr.flush()?;
    Ok(())
}

/// [`write_sample`] to a file path.
pub fn write_sample_csv(path: &Path, sample: &Sample) -> Result<()> {
    write_sample(BufWriter::new(File::create(path)?), sample)
}

/// Everything needed to reassemble a [`GridEstimate`] besides its node values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateMetadata {
    /// Number of observations consumed.
    pub n: usize,
    pub plan: BandwidthPlan,
    pub kernel: KernelSpec,
    pub grid: Grid,
}

/// Write an estimate's node values as CSV (`x1..xd,density`).
pub fn write_estimate_values<W: Write>(writer: W, estimate: &GridEstimate) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = coordinate_header(estimate.grid().dim());
    header.push("density".into());
    wtr.write_record(header).map_err(|e| csv_error(&e))?;
    let values = estimate.values();
    let mut pending: Result<()> = Ok(());
    estimate.grid().for_each_node(|i, x| {
        if pending.is_err() {
            return;
        }
        let mut row: Vec<String> = x.iter().map(f64::to_string).collect();
        row.push(values[i].to_string());
        if let Err(e) = wtr.write_record(row) {
            pending = Err(csv_error(&e));
        }
    });
    pending?;
    wtr.flush()?;
    Ok(())
}

/// Write an estimate as a CSV of node values plus a JSON metadata file.
pub fn write_estimate_files(
    estimate: &GridEstimate,
    values_path: &Path,
    metadata_path: &Path,
) -> Result<()> {
    write_estimate_values(BufWriter::new(File::create(values_path)?), estimate)?;
    let meta = EstimateMetadata {
        n: estimate.count(),
        plan: *estimate.plan(),
        kernel: estimate.kernel().clone(),
        grid: estimate.grid().clone(),
    };
    write_json(metadata_path, &meta)
}

/// Read an estimate written by [`write_estimate_files`].
///
/// Every coordinate in the CSV must reproduce the metadata grid's node
/// exactly; a mismatch means the two files describe different grids.
pub fn read_estimate_files(values_path: &Path, metadata_path: &Path) -> Result<GridEstimate> {
    let meta: EstimateMetadata = read_json(metadata_path)?;
    let table = read_sample(BufReader::new(File::open(values_path)?))?;
    let dim = meta.grid.dim();
    if table.dim() != dim + 1 {
        return Err(Error::GridMismatch(format!(
            "value table has {} columns, expected {} coordinates plus one value",
            table.dim(),
            dim
        )));
    }
    if table.len() != meta.grid.len() {
        return Err(Error::GridMismatch(format!(
            "value table has {} rows, grid has {} nodes",
            table.len(),
            meta.grid.len()
        )));
    }
    let mut values = Vec::with_capacity(table.len());
    let mut pending: Result<()> = Ok(());
    meta.grid.for_each_node(|i, x| {
        if pending.is_err() {
            return;
        }
        let row = table.point(i);
        if row[..dim] != *x {
            pending = Err(Error::GridMismatch(format!(
                "row {i} coordinates {:?} do not match grid node {:?}",
                &row[..dim],
                x
            )));
            return;
        }
        values.push(row[dim]);
    });
    pending?;
    GridEstimate::from_parts(meta.grid, meta.plan, meta.kernel, values, meta.n)
}

/// Band parameters stored alongside the per-node CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandMetadata {
    /// Target miss level.
    pub alpha: f64,
    /// Envelope quantile in normalized deviation units.
    pub u_alpha: f64,
    /// Normalizer `B_n` that converts the quantile into a half-width.
    pub normalizer: f64,
    /// Calibrated envelope behind the band.
    pub model: TailModel,
}

/// Write a band as CSV (`x1..xd,lower,estimate,upper`).
pub fn write_band_values<W: Write>(writer: W, grid: &Grid, band: &ConfidenceBand) -> Result<()> {
    if band.center.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "band has {} nodes, grid has {}",
            band.center.len(),
            grid.len()
        )));
    }
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = coordinate_header(grid.dim());
    header.extend(["lower".into(), "estimate".into(), "upper".into()]);
    wtr.write_record(header).map_err(|e| csv_error(&e))?;
    let mut pending: Result<()> = Ok(());
    grid.for_each_node(|i, x| {
        if pending.is_err() {
            return;
        }
        let mut row: Vec<String> = x.iter().map(f64::to_string).collect();
        row.push(band.lower[i].to_string());
        row.push(band.center[i].to_string());
        row.push(band.upper[i].to_string());
        if let Err(e) = wtr.write_record(row) {
            pending = Err(csv_error(&e));
        }
    });
    pending?;
    wtr.flush()?;
    Ok(())
}

/// Write a band as a CSV of node rows plus a JSON metadata file.
pub fn write_band_files(
    grid: &Grid,
    band: &ConfidenceBand,
    values_path: &Path,
    metadata_path: &Path,
) -> Result<()> {
    write_band_values(BufWriter::new(File::create(values_path)?), grid, band)?;
    let meta = BandMetadata {
        alpha: band.alpha,
        u_alpha: band.u_alpha,
        normalizer: band.normalizer,
        model: band.model,
    };
    write_json(metadata_path, &meta)
}

/// Serialize any value as pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Deserialize a JSON file.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}
