//! On-disk formats.
//!
//! Grid functions: 16-byte header (magic `TLWG`, version u16, D u16, P u16,
//! G u16, 4 reserved bytes), then little-endian f64 interleaved (re, im)
//! samples in row-major order. The scale window is not stored; readers get
//! the full representable window.
//!
//! Coefficient fields: CSV with columns `lambda_bits, j, k..(D), re, im`.

use num_complex::Complex64;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::grid::{GridFunction, GridSpec};
use crate::meyer::TensorLabel;
use crate::wavelet::{CoefficientField, WaveletIndex};

pub const GRID_MAGIC: &[u8; 4] = b"TLWG";
pub const GRID_VERSION: u16 = 1;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic (not a grid file)")]
    BadMagic,
    #[error("unsupported grid file version {0}")]
    BadVersion(u16),
    #[error("corrupt grid file: {0}")]
    Corrupt(String),
    #[error("csv parse error at line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("invalid spec in file: {0}")]
    Spec(#[from] crate::grid::GridError),
    #[error("invalid label in file: {0}")]
    Label(#[from] crate::meyer::MeyerError),
}

pub fn write_grid(path: &Path, f: &GridFunction) -> Result<(), IoError> {
    let spec = f.spec();
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    w.write_all(GRID_MAGIC)?;
    w.write_all(&GRID_VERSION.to_le_bytes())?;
    w.write_all(&(spec.dimension as u16).to_le_bytes())?;
    w.write_all(&(spec.period_exp as u16).to_le_bytes())?;
    w.write_all(&(spec.grid_exp as u16).to_le_bytes())?;
    w.write_all(&[0u8; 4])?;
    for s in f.samples() {
        w.write_all(&s.re.to_le_bytes())?;
        w.write_all(&s.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_grid(path: &Path) -> Result<GridFunction, IoError> {
    let file = std::fs::File::open(path)?;
    let mut r = BufReader::new(file);
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if &header[0..4] != GRID_MAGIC {
        return Err(IoError::BadMagic);
    }
    let version = u16::from_le_bytes([header[4], header[5]]);
    if version != GRID_VERSION {
        return Err(IoError::BadVersion(version));
    }
    let dimension = u16::from_le_bytes([header[6], header[7]]) as usize;
    let period_exp = u16::from_le_bytes([header[8], header[9]]) as u32;
    let grid_exp = u16::from_le_bytes([header[10], header[11]]) as u32;
    let spec = GridSpec::with_default_window(dimension, period_exp, grid_exp)?;

    let mut samples = Vec::with_capacity(spec.total_samples());
    let mut buf = [0u8; 16];
    for i in 0..spec.total_samples() {
        r.read_exact(&mut buf).map_err(|_| {
            IoError::Corrupt(format!(
                "truncated at sample {i} of {}",
                spec.total_samples()
            ))
        })?;
        let re = f64::from_le_bytes(buf[0..8].try_into().expect("slice length"));
        let im = f64::from_le_bytes(buf[8..16].try_into().expect("slice length"));
        samples.push(Complex64::new(re, im));
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(IoError::Corrupt("trailing bytes after samples".into()));
    }
    Ok(GridFunction::from_samples(spec, samples)?)
}

pub fn write_coefficients_csv(path: &Path, c: &CoefficientField) -> Result<(), IoError> {
    let spec = c.spec();
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    let ks: String = (0..spec.dimension)
        .map(|l| format!("k{l}"))
        .collect::<Vec<_>>()
        .join(",");
    writeln!(
        w,
        "# dimension={},period_exp={},grid_exp={},j_lo={},j_hi={}",
        spec.dimension, spec.period_exp, spec.grid_exp, spec.j_lo, spec.j_hi
    )?;
    writeln!(w, "lambda_bits,j,{ks},re,im")?;
    for (idx, v) in c.iter() {
        let kcols: String = (0..spec.dimension)
            .map(|l| idx.translate[l].to_string())
            .collect::<Vec<_>>()
            .join(",");
        writeln!(
            w,
            "{},{},{},{:e},{:e}",
            idx.label.bits(),
            idx.scale,
            kcols,
            v.re,
            v.im
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_coefficients_csv(path: &Path) -> Result<CoefficientField, IoError> {
    let file = std::fs::File::open(path)?;
    let r = BufReader::new(file);
    let mut lines = r.lines().enumerate();

    let (_, first) = lines.next().ok_or_else(|| IoError::Csv {
        line: 1,
        message: "empty file".into(),
    })?;
    let first = first?;
    let spec = parse_spec_comment(&first).ok_or_else(|| IoError::Csv {
        line: 1,
        message: "missing spec header comment".into(),
    })??;

    let mut field = CoefficientField::empty(spec);
    for (lineno, line) in lines {
        let line = line?;
        if line.starts_with('#') || line.starts_with("lambda_bits") || line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        let want = 4 + spec.dimension;
        if cols.len() != want {
            return Err(IoError::Csv {
                line: lineno + 1,
                message: format!("expected {want} columns, got {}", cols.len()),
            });
        }
        let parse = |s: &str, what: &str| -> Result<f64, IoError> {
            s.trim().parse::<f64>().map_err(|e| IoError::Csv {
                line: lineno + 1,
                message: format!("bad {what}: {e}"),
            })
        };
        let bits = parse(cols[0], "lambda_bits")? as u8;
        let j = parse(cols[1], "scale")? as i32;
        let mut k = [0u32; 2];
        for l in 0..spec.dimension {
            k[l] = parse(cols[2 + l], "translation")? as u32;
        }
        let re = parse(cols[2 + spec.dimension], "re")?;
        let im = parse(cols[3 + spec.dimension], "im")?;
        let label = TensorLabel::new(bits, spec.dimension)?;
        let idx = WaveletIndex::new(label, j, k);
        if !field.index_valid(&idx) {
            return Err(IoError::Csv {
                line: lineno + 1,
                message: format!("index {idx:?} invalid for the file's spec"),
            });
        }
        field.insert(idx, Complex64::new(re, im));
    }
    Ok(field)
}

fn parse_spec_comment(line: &str) -> Option<Result<GridSpec, IoError>> {
    let body = line.strip_prefix('#')?.trim();
    let mut dimension = None;
    let mut period_exp = None;
    let mut grid_exp = None;
    let mut j_lo = None;
    let mut j_hi = None;
    for piece in body.split(',') {
        let (key, value) = piece.split_once('=')?;
        let value = value.trim();
        match key.trim() {
            "dimension" => dimension = value.parse::<usize>().ok(),
            "period_exp" => period_exp = value.parse::<u32>().ok(),
            "grid_exp" => grid_exp = value.parse::<u32>().ok(),
            "j_lo" => j_lo = value.parse::<i32>().ok(),
            "j_hi" => j_hi = value.parse::<i32>().ok(),
            _ => {}
        }
    }
    Some(
        GridSpec::new(dimension?, period_exp?, grid_exp?, j_lo?, j_hi?).map_err(IoError::Spec),
    )
}
