use serde::{Deserialize, Serialize};

use super::DenseMatrix;
use crate::error::{check_len, Error, Result};

/// Compressed sparse column matrix in canonical form: sorted row indices
/// within each column and no stored zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CscMatrix {
    rows: usize,
    cols: usize,
    colptr: Vec<usize>,
    rowval: Vec<usize>,
    nzval: Vec<f64>,
}

impl CscMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        colptr: Vec<usize>,
        rowval: Vec<usize>,
        nzval: Vec<f64>,
    ) -> Result<Self> {
        check_len("CscMatrix colptr", cols + 1, colptr.len())?;
        check_len("CscMatrix rowval/nzval", rowval.len(), nzval.len())?;
        if colptr[0] != 0 || colptr[cols] != rowval.len() {
            return Err(Error::Format("column pointers must span [0, nnz]".into()));
        }
        for j in 0..cols {
            if colptr[j] > colptr[j + 1] {
                return Err(Error::Format(
                    "column pointers must be non-decreasing".into(),
                ));
            }
            let col = &rowval[colptr[j]..colptr[j + 1]];
            if col.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Format(format!(
                    "row indices of column {j} must be strictly increasing"
                )));
            }
            if col.last().is_some_and(|&r| r >= rows) {
                return Err(Error::Format(format!(
                    "row index out of range in column {j}"
                )));
            }
        }
        if nzval.iter().any(|v| *v == 0.0 || !v.is_finite()) {
            return Err(Error::Format(
                "stored values must be finite and nonzero".into(),
            ));
        }
        Ok(Self {
            rows,
            cols,
            colptr,
            rowval,
            nzval,
        })
    }

    /// Assembles from `(row, col, value)` triplets. Duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        for &(r, c, v) in &sorted {
            if r >= rows || c >= cols {
                return Err(Error::InvalidArgument(format!(
                    "triplet ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidArgument("non-finite triplet value".into()));
            }
        }
        sorted.sort_by_key(|&(r, c, _)| (c, r));
        let mut colptr = vec![0usize; cols + 1];
        let mut rowval = Vec::with_capacity(sorted.len());
        let mut nzval: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in sorted {
            if last == Some((r, c)) {
                *nzval.last_mut().unwrap() += v;
            } else {
                rowval.push(r);
                nzval.push(v);
                colptr[c + 1] += 1;
                last = Some((r, c));
            }
        }
        for j in 0..cols {
            colptr[j + 1] += colptr[j];
        }
        let mut m = Self {
            rows,
            cols,
            colptr,
            rowval,
            nzval,
        };
        m.drop_zeros();
        Ok(m)
    }

    pub fn from_dense(d: &DenseMatrix) -> Self {
        let mut triplets = Vec::new();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if d[(i, j)] != 0.0 {
                    triplets.push((i, j, d[(i, j)]));
                }
            }
        }
        Self::from_triplets(d.rows(), d.cols(), &triplets).expect("dense entries are finite")
    }

    fn drop_zeros(&mut self) {
        let mut colptr = vec![0usize; self.cols + 1];
        let mut rowval = Vec::with_capacity(self.rowval.len());
        let mut nzval = Vec::with_capacity(self.nzval.len());
        for j in 0..self.cols {
            for k in self.colptr[j]..self.colptr[j + 1] {
                if self.nzval[k] != 0.0 {
                    rowval.push(self.rowval[k]);
                    nzval.push(self.nzval[k]);
                }
            }
            colptr[j + 1] = rowval.len();
        }
        self.colptr = colptr;
        self.rowval = rowval;
        self.nzval = nzval;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.nzval.len()
    }

    pub fn colptr(&self) -> &[usize] {
        &self.colptr
    }

    pub fn rowval(&self) -> &[usize] {
        &self.rowval
    }

    pub fn nzval(&self) -> &[f64] {
        &self.nzval
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for j in 0..self.cols {
            for k in self.colptr[j]..self.colptr[j + 1] {
                d[(self.rowval[k], j)] = self.nzval[k];
            }
        }
        d
    }

    pub fn transpose(&self) -> CscMatrix {
        let mut triplets = Vec::with_capacity(self.nnz());
        for j in 0..self.cols {
            for k in self.colptr[j]..self.colptr[j + 1] {
                triplets.push((j, self.rowval[k], self.nzval[k]));
            }
        }
        CscMatrix::from_triplets(self.cols, self.rows, &triplets).expect("valid transpose")
    }

    pub fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        check_len("CscMatrix::mul_vec input", self.cols, x.len())?;
        check_len("CscMatrix::mul_vec output", self.rows, out.len())?;
        out.fill(0.0);
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0.0 {
                continue;
            }
            for k in self.colptr[j]..self.colptr[j + 1] {
                out[self.rowval[k]] += self.nzval[k] * xj;
            }
        }
        Ok(())
    }

    pub fn mul_vec_transpose_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        check_len("CscMatrix::mul_vec_transpose input", self.rows, x.len())?;
        check_len("CscMatrix::mul_vec_transpose output", self.cols, out.len())?;
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.colptr[j]..self.colptr[j + 1] {
                acc += self.nzval[k] * x[self.rowval[k]];
            }
            *o = acc;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = CscMatrix::from_triplets(
            2,
            2,
            &[
                (0, 0, 1.0),
                (0, 0, 2.0),
                (1, 1, 1.0),
                (1, 1, -1.0),
                (1, 0, 4.0),
            ],
        )
        .unwrap();
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.colptr(), &[0, 2, 2]);
        assert_eq!(m.rowval(), &[0, 1]);
        assert_eq!(m.nzval(), &[3.0, 4.0]);
    }

    #[test]
    fn rejects_unsorted_rows() {
        let err = CscMatrix::new(2, 1, vec![0, 2], vec![1, 0], vec![1.0, 1.0]);
        assert!(matches!(err, Err(Error::Format(_))));
    }

    #[test]
    fn rejects_stored_zero() {
        assert!(CscMatrix::new(1, 1, vec![0, 1], vec![0], vec![0.0]).is_err());
    }

    #[test]
    fn hand_products() {
        let m = CscMatrix::from_dense(
            &DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap(),
        );
        let mut y = vec![0.0; 2];
        m.mul_vec_into(&[1.0, 1.0], &mut y).unwrap();
        assert_eq!(y, vec![3.0, 7.0]);
        m.mul_vec_transpose_into(&[1.0, 1.0], &mut y).unwrap();
        assert_eq!(y, vec![4.0, 6.0]);
    }
}
