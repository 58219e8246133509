//! CSV output of observable records.
//!
//! Three files per run, rows in record order then index order:
//!
//! * `positions.csv`: `time_display,n,p_x`
//! * `momenta.csv`: `time_display,k,signed_k,p_k`
//! * `summary.csv`: `time_display,purity,expected_momentum,momentum_variance,negative_momentum_fraction,region_mass_0,...`
//!
//! Reals are written with 17 significant digits. Round-off negatives in the
//! distributions are clamped to zero here and only here.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::observables::{signed, ObservableRecord};
use crate::{Error, Result};

pub const POSITIONS_FILE: &str = "positions.csv";
pub const MOMENTA_FILE: &str = "momenta.csv";
pub const SUMMARY_FILE: &str = "summary.csv";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvPaths {
    pub positions: PathBuf,
    pub momenta: PathBuf,
    pub summary: PathBuf,
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn probability(x: f64) -> String {
    real(x.max(0.0))
}

/// Writes the three CSV files into `dir`, creating it if needed.
pub fn emit_csv(records: &[ObservableRecord], dir: impl AsRef<Path>) -> Result<CsvPaths> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = CsvPaths {
        positions: dir.join(POSITIONS_FILE),
        momenta: dir.join(MOMENTA_FILE),
        summary: dir.join(SUMMARY_FILE),
    };

    write_file(&paths.positions, |w| {
        writeln!(w, "time_display,n,p_x")?;
        for r in records {
            let t = real(r.time_display);
            for (n, p) in r.position_dist.iter().enumerate() {
                writeln!(w, "{t},{n},{}", probability(*p))?;
            }
        }
        Ok(())
    })?;

    write_file(&paths.momenta, |w| {
        writeln!(w, "time_display,k,signed_k,p_k")?;
        for r in records {
            let t = real(r.time_display);
            let n = r.momentum_dist.len();
            for (k, p) in r.momentum_dist.iter().enumerate() {
                writeln!(w, "{t},{k},{},{}", signed(k, n), probability(*p))?;
            }
        }
        Ok(())
    })?;

    let n_regions = records[0].region_masses.len();
    write_file(&paths.summary, |w| {
        write!(
            w,
            "time_display,purity,expected_momentum,momentum_variance,negative_momentum_fraction"
        )?;
        for i in 0..n_regions {
            write!(w, ",region_mass_{i}")?;
        }
        writeln!(w)?;
        for r in records {
            write!(
                w,
                "{},{},{},{},{}",
                real(r.time_display),
                real(r.purity),
                real(r.expected_momentum_signed),
                real(r.momentum_variance),
                real(r.negative_momentum_fraction)
            )?;
            for m in &r.region_masses {
                write!(w, ",{}", probability(*m))?;
            }
            writeln!(w)?;
        }
        Ok(())
    })?;

    Ok(paths)
}

fn write_file<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}
