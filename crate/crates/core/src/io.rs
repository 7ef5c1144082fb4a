//! File formats: matrices as `{dim, re, im}` JSON (row-major), spectra as
//! `{"family": …}` JSON or `index,eigenvalue` CSV.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{CMatrix, DensityMatrix};
use crate::spectrum::{HamiltonianSpectrum, SpectrumSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let mut re = Vec::with_capacity(dim * dim);
        let mut im = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..m.ncols() {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        Self { dim, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim * self.dim;
        if self.re.len() != n || self.im.len() != n {
            return Err(Error::Format(format!(
                "dim {} needs {n} entries in `re` and `im`, got {} and {}",
                self.dim,
                self.re.len(),
                self.im.len()
            )));
        }
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
            let k = i * self.dim + j;
            Complex64::new(self.re[k], self.im[k])
        }))
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        cause: e.to_string(),
    })
}

fn write(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::Io {
        path: path.display().to_string(),
        cause: e.to_string(),
    })
}

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Format(format!("matrix JSON: {e}")))?;
    file.to_matrix()
}

pub fn matrix_json(m: &CMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(m)).expect("matrix serializes")
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    parse_matrix(&read(path)?)
}

pub fn read_density(path: &Path) -> Result<DensityMatrix> {
    DensityMatrix::new(read_matrix(path)?)
}

pub fn write_matrix(path: &Path, m: &CMatrix) -> Result<()> {
    write(path, &matrix_json(m))
}

/// `index,eigenvalue` lines with a header; indices start at 0.
pub fn spectrum_csv(values: &[f64]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "eigenvalue"]).expect("in-memory write");
    for (i, v) in values.iter().enumerate() {
        w.write_record([i.to_string(), v.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

pub fn parse_spectrum_csv(text: &str) -> Result<Vec<f64>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for rec in r.deserialize::<(usize, f64)>() {
        rows.push(rec.map_err(|e| Error::Format(format!("spectrum CSV: {e}")))?);
    }
    rows.sort_by_key(|&(i, _)| i);
    if rows.iter().enumerate().any(|(k, &(i, _))| k != i) {
        return Err(Error::Format("spectrum CSV indices must be 0, 1, 2, …".into()));
    }
    Ok(rows.into_iter().map(|(_, v)| v).collect())
}

/// Reads a spectrum from JSON (`{"family": …}`) or, for `.csv` files, from an
/// `index,eigenvalue` table of an explicit spectrum.
pub fn read_spectrum(path: &Path) -> Result<HamiltonianSpectrum> {
    let text = read(path)?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        HamiltonianSpectrum::explicit(parse_spectrum_csv(&text)?)
    } else {
        let spec: SpectrumSpec =
            serde_json::from_str(&text).map_err(|e| Error::Format(format!("spectrum JSON: {e}")))?;
        spec.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = CMatrix::from_fn(2, 2, |i, j| Complex64::new((i + 2 * j) as f64, i as f64 - j as f64));
        let text = matrix_json(&m);
        assert_eq!(parse_matrix(&text).unwrap(), m);
        let f: MatrixFile = serde_json::from_str(&text).unwrap();
        assert_eq!(f.re, vec![0.0, 2.0, 1.0, 3.0]);
        assert!(parse_matrix(r#"{"dim":2,"re":[1,0,0],"im":[0,0,0,0]}"#).is_err());
    }

    #[test]
    fn spectrum_formats() {
        let csv = spectrum_csv(&[0.0, 1.5, 2.0]);
        assert_eq!(csv, "index,eigenvalue\n0,0\n1,1.5\n2,2\n");
        assert_eq!(parse_spectrum_csv(&csv).unwrap(), vec![0.0, 1.5, 2.0]);
        assert!(parse_spectrum_csv("index,eigenvalue\n1,0\n").is_err());
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.json");
        fs::write(&p, r#"{"family":"linear","c":0.5}"#).unwrap();
        assert_eq!(read_spectrum(&p).unwrap().levels(2).unwrap(), vec![0.0, 0.5]);
        let q = dir.path().join("s.csv");
        fs::write(&q, &csv).unwrap();
        assert_eq!(read_spectrum(&q).unwrap().len(), Some(3));
        let err = read_spectrum(&dir.path().join("missing.json")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
