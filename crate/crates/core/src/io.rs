//! CSV and JSON artifacts. Floats carry 17 significant digits; files are
//! UTF-8 with LF line endings.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fourpoint::{DeltaCut, NoiseMap};
use crate::spectral::SpectralData;

/// Round-trippable float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Hash of the little-endian bytes of a matrix in row-major order.
pub fn matrix_checksum(m: &DMatrix<f64>) -> String {
    let mut bytes = Vec::with_capacity(m.len() * 8);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            bytes.extend_from_slice(&m[(i, j)].to_le_bytes());
        }
    }
    sha256_hex(&bytes)
}

pub fn complex_checksum(values: &[Complex64]) -> String {
    let mut bytes = Vec::with_capacity(values.len() * 16);
    for v in values {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    sha256_hex(&bytes)
}

pub fn spectrum_csv(spectral: &SpectralData) -> String {
    let mut out = String::from("s,E_s\n");
    for (s, e) in spectral.energies.iter().enumerate() {
        let _ = writeln!(out, "{s},{}", fmt_f64(*e));
    }
    out
}

/// First line is `L`, then `L` comma-separated rows.
pub fn gmatrix_csv(g: &DMatrix<f64>) -> String {
    let mut out = format!("{}\n", g.nrows());
    for i in 0..g.nrows() {
        let row: Vec<String> = (0..g.ncols()).map(|j| fmt_f64(g[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn density_csv(density: &[f64]) -> String {
    let mut out = String::from("j,n_j\n");
    for (j, n) in density.iter().enumerate() {
        let _ = writeln!(out, "{j},{}", fmt_f64(*n));
    }
    out
}

/// Columns `q,k,n_q` with `k = 2πq/L`.
pub fn momentum_csv(nq: &[f64]) -> String {
    let l = nq.len();
    let mut out = String::from("q,k,n_q\n");
    for (q, v) in nq.iter().enumerate() {
        let k = 2.0 * std::f64::consts::PI * q as f64 / l as f64;
        let _ = writeln!(out, "{q},{},{}", fmt_f64(k), fmt_f64(*v));
    }
    out
}

pub fn noise_csv(noise: &NoiseMap) -> String {
    let l = noise.sites;
    let mut out = String::from("q1,q2,re,im\n");
    for q1 in 0..l {
        for q2 in 0..l {
            let v = noise.get(q1, q2) * noise.report_scale;
            let _ = writeln!(out, "{q1},{q2},{},{}", fmt_f64(v.re), fmt_f64(v.im));
        }
    }
    out
}

pub fn cut_csv(cut: &DeltaCut) -> String {
    let mut out = String::from("q1,re,im\n");
    for (q1, v) in cut.values.iter().enumerate() {
        let _ = writeln!(out, "{q1},{},{}", fmt_f64(v.re), fmt_f64(v.im));
    }
    out
}

pub fn cut_file_name(q2: usize) -> String {
    format!("noise_cut_q2-{q2}.csv")
}

#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Writes files under one directory and remembers their hashes.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    written: Vec<Artifact>,
}

impl ArtifactWriter {
    pub fn create(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(ArtifactWriter {
            dir,
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.written.push(Artifact {
            path: name.to_string(),
            sha256: sha256_hex(contents.as_bytes()),
            bytes: contents.len(),
        });
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    pub fn artifacts(&self) -> &[Artifact] {
        &self.written
    }

    pub fn into_artifacts(self) -> Vec<Artifact> {
        self.written
    }
}

/// Peak resident set size of this process in kB, where the platform
/// reports it.
pub fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find(|l| l.starts_with("VmHWM:"))?
        .split_whitespace()
        .nth(1)?
        .parse()
        .ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        let s = fmt_f64(0.1);
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
        let third = 1.0 / 3.0;
        assert_eq!(fmt_f64(third).parse::<f64>().unwrap(), third);
    }

    #[test]
    fn sha256_known_value() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn gmatrix_layout() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 0.0]);
        let text = gmatrix_csv(&g);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "2");
        assert_eq!(lines[1].split(',').count(), 2);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn writer_hashes_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = ArtifactWriter::create(dir.path().join("out")).unwrap();
        let p = w.write("a.csv", "x\n1\n").unwrap();
        assert_eq!(std::fs::read_to_string(p).unwrap(), "x\n1\n");
        assert_eq!(w.artifacts()[0].sha256, sha256_hex(b"x\n1\n"));
    }
}
