//! Deterministic text and image writers.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::AppError;

/// 17 significant digits in scientific notation, which round-trips every `f64`.
pub fn format_float(v: f64) -> String {
    // normalize -0.0 so sign-of-zero noise cannot make otherwise equal tables differ
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

/// Header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_numbers(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.header.len());
        self.rows.push(values.iter().copied().map(format_float).collect());
    }

    pub fn push_cells(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Parsed numeric value at `row`, `column`.
    pub fn value(&self, row: usize, name: &str) -> Option<f64> {
        self.rows.get(row)?.get(self.column(name)?)?.parse().ok()
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

/// Regular sample grid of a scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major, `values[iy * xs.len() + ix]`.
    pub values: Vec<f64>,
}

impl ScalarGrid {
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.xs.len() + ix]
    }

    /// `x y value` triplets, one per line, `y` outer.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# x y value\n");
        for (iy, &y) in self.ys.iter().enumerate() {
            for (ix, &x) in self.xs.iter().enumerate() {
                let _ = writeln!(s, "{} {} {}", format_float(x), format_float(y), format_float(self.at(ix, iy)));
            }
        }
        s
    }

    /// Binary 8-bit graymap scaled to the maximum, top row at the largest `y`.
    pub fn to_pgm(&self) -> Vec<u8> {
        let (w, h) = (self.xs.len(), self.ys.len());
        let max = self.values.iter().copied().fold(0.0, f64::max);
        let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
        for iy in (0..h).rev() {
            for ix in 0..w {
                let v = if max > 0.0 { self.at(ix, iy) / max } else { 0.0 };
                out.push((v.clamp(0.0, 1.0) * 255.0).round() as u8);
            }
        }
        out
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), AppError> {
    std::fs::write(path, bytes).map_err(|source| AppError::Io { path: path.to_owned(), source })
}

pub fn write_stdout(bytes: &[u8]) -> Result<(), AppError> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|source| AppError::Io { path: PathBuf::from("<stdout>"), source })
}

/// Companion graymap path: same stem with a `.pgm` extension.
pub fn pgm_path(text_path: &Path) -> PathBuf {
    text_path.with_extension("pgm")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, std::f64::consts::PI] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(-0.0), format_float(0.0));
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_and_lookup() {
        let mut t = Table::new(&["a", "b"]);
        t.push_numbers(&[1.0, -2.5]);
        assert_eq!(t.to_csv(), "a,b\n1.0000000000000000e0,-2.5000000000000000e0\n");
        assert_eq!(t.value(0, "b"), Some(-2.5));
        assert_eq!(t.value(0, "c"), None);
    }

    #[test]
    fn graymap_layout() {
        let g = ScalarGrid { xs: vec![0.0, 1.0], ys: vec![0.0, 1.0], values: vec![0.0, 1.0, 0.5, 0.25] };
        let pgm = g.to_pgm();
        let header = b"P5\n2 2\n255\n";
        assert_eq!(&pgm[..header.len()], header);
        // top row is y = 1
        assert_eq!(&pgm[header.len()..], &[128, 64, 0, 255]);
        assert_eq!(g.to_text().lines().count(), 5);
    }
}
