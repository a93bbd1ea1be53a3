//! CSV output and input. One row per frequency bin with the fixed header
//! `freq_hz,s11_re,s11_im,s21_re,s21_im,se_db`; shielding effectiveness is
//! capped at 300 dB at serialization time.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use cfc_tlm_core::SParams;

use crate::{CliError, CliResult};

pub const CSV_HEADER: &str = "freq_hz,s11_re,s11_im,s21_re,s21_im,se_db";

/// Cap applied to the shielding-effectiveness column.
pub const SE_CAP_DB: f64 = 300.0;

/// One parsed CSV row set.
#[derive(Debug, Clone, Default)]
pub struct SParamTable {
    pub freqs: Vec<f64>,
    pub s11: Vec<Complex64>,
    pub s21: Vec<Complex64>,
    pub se_db: Vec<f64>,
}

impl SParamTable {
    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }
}

fn se_from_s21(s21: Complex64) -> f64 {
    let mag = s21.norm();
    let se = if mag == 0.0 {
        f64::INFINITY
    } else {
        -20.0 * mag.log10()
    };
    se.min(SE_CAP_DB)
}

/// Write S-parameters (and the derived SE column) for bins inside `band`.
pub fn write_sparams_csv(path: &Path, s: &SParams, band: (f64, f64)) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut out = String::with_capacity(64 * s.len());
    out.push_str(CSV_HEADER);
    out.push('\n');
    let mut rows = 0usize;
    for i in 0..s.len() {
        let f = s.freqs[i];
        if f < band.0 || f > band.1 {
            continue;
        }
        let r = s.s11[i];
        let t = s.s21[i];
        out.push_str(&format!(
            "{},{:e},{:e},{:e},{:e},{}\n",
            f,
            r.re,
            r.im,
            t.re,
            t.im,
            se_from_s21(t)
        ));
        rows += 1;
    }
    if rows == 0 {
        return Err(CliError::Usage(format!(
            "no frequency bins inside the band {:.3e}..{:.3e} Hz",
            band.0, band.1
        )));
    }
    let mut file = fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

/// Read a CSV produced by [`write_sparams_csv`].
pub fn read_sparams_csv(path: &Path) -> CliResult<SParamTable> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => {
            return Err(CliError::Usage(format!(
                "{}: expected header `{CSV_HEADER}`, found {other:?}",
                path.display()
            )))
        }
    }
    let mut table = SParamTable::default();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(CliError::Usage(format!(
                "{}:{}: expected 6 fields, found {}",
                path.display(),
                lineno + 2,
                fields.len()
            )));
        }
        let parse = |s: &str| -> CliResult<f64> {
            s.trim().parse::<f64>().map_err(|e| {
                CliError::Usage(format!("{}:{}: {e}", path.display(), lineno + 2))
            })
        };
        table.freqs.push(parse(fields[0])?);
        table.s11.push(Complex64::new(parse(fields[1])?, parse(fields[2])?));
        table.s21.push(Complex64::new(parse(fields[3])?, parse(fields[4])?));
        table.se_db.push(parse(fields[5])?);
    }
    Ok(table)
}

/// Combined-magnitude spectrum of an anisotropic run
/// (`freq_hz,s11_mag,s21_mag,se_db`).
pub const COMBINED_CSV_HEADER: &str = "freq_hz,s11_mag,s21_mag,se_db";

pub fn write_combined_csv(
    path: &Path,
    freqs: &[f64],
    s11_mag: &[f64],
    s21_mag: &[f64],
    band: (f64, f64),
) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut out = String::new();
    out.push_str(COMBINED_CSV_HEADER);
    out.push('\n');
    let mut rows = 0usize;
    for i in 0..freqs.len() {
        let f = freqs[i];
        if f < band.0 || f > band.1 {
            continue;
        }
        let se = if s21_mag[i] == 0.0 {
            SE_CAP_DB
        } else {
            (-20.0 * s21_mag[i].log10()).min(SE_CAP_DB)
        };
        out.push_str(&format!("{},{:e},{:e},{}\n", f, s11_mag[i], s21_mag[i], se));
        rows += 1;
    }
    if rows == 0 {
        return Err(CliError::Usage(format!(
            "no frequency bins inside the band {:.3e}..{:.3e} Hz",
            band.0, band.1
        )));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Summary row of an angle sweep (`phi_deg,s11_mag,s21_mag,se_db`).
pub const ANGLE_CSV_HEADER: &str = "phi_deg,s11_mag,s21_mag,se_db";

pub fn write_angle_csv(path: &Path, rows: &[(f64, f64, f64)]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut out = String::new();
    out.push_str(ANGLE_CSV_HEADER);
    out.push('\n');
    for &(phi, s11, s21) in rows {
        let se = if s21 == 0.0 {
            SE_CAP_DB
        } else {
            (-20.0 * s21.log10()).min(SE_CAP_DB)
        };
        out.push_str(&format!("{phi},{s11:e},{s21:e},{se}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}
