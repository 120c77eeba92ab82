use std::io::Write;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Row-major `n × width` matrix of finite reals, one row per graph.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl EmbeddingMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<EmbeddingMatrix> {
        if data.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("embedding contains NaN or Inf".into()));
        }
        Ok(EmbeddingMatrix { rows, cols, data })
    }

    /// Stacks rows that must all have length `cols`.
    pub fn from_rows(rows: Vec<Vec<f64>>, cols: usize) -> Result<EmbeddingMatrix> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::InvalidParameter(format!(
                "row of width {} in a matrix of width {cols}",
                r.len()
            )));
        }
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        // chunks_exact on an empty width would panic.
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn select_rows(&self, indices: &[usize]) -> EmbeddingMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        EmbeddingMatrix {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: f64) -> EmbeddingMatrix {
        EmbeddingMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_dmatrix(m: &DMatrix<f64>) -> Result<EmbeddingMatrix> {
        let rows = (0..m.nrows())
            .map(|i| m.row(i).iter().copied().collect())
            .collect();
        Self::from_rows(rows, m.ncols())
    }

    /// Headerless CSV, row-major, 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for row in self.iter_rows() {
            let line: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(EmbeddingMatrix::new(1, 2, vec![1.0, f64::NAN]).is_err());
        assert!(EmbeddingMatrix::new(1, 2, vec![1.0]).is_err());
        assert!(EmbeddingMatrix::from_rows(vec![vec![1.0], vec![1.0, 2.0]], 1).is_err());
    }

    #[test]
    fn csv_is_exact() {
        let x = EmbeddingMatrix::new(2, 2, vec![0.1, -2.5, 1.0 / 3.0, 1e-300]).unwrap();
        let mut buf = Vec::new();
        x.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let parsed: Vec<f64> = text
            .lines()
            .flat_map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>())
            .collect();
        assert_eq!(parsed, x.as_slice());
        assert!(text.starts_with("1.0000000000000001e-1,"));
    }

    #[test]
    fn select_and_convert() {
        let x = EmbeddingMatrix::new(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let s = x.select_rows(&[2, 0, 2]);
        assert_eq!(s.as_slice(), &[5.0, 6.0, 1.0, 2.0, 5.0, 6.0]);
        let m = x.to_dmatrix();
        assert_eq!(m[(1, 0)], 3.0);
        assert_eq!(EmbeddingMatrix::from_dmatrix(&m).unwrap(), x);
    }
}
