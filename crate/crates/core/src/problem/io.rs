//! JSON problem files.
//!
//! ```json
//! { "n": 2, "m": 1,
//!   "P": {"diag": [1, 1]},
//!   "q": [0, 0],
//!   "H": {"csc": {"colptr": [0, 1, 2], "rowval": [0, 0], "nzval": [1, 1]}},
//!   "g": [1],
//!   "D": [{"type": "full_space", "params": {"dim": 2}, "range": [0, 2]}] }
//! ```
//!
//! `P` may instead be `{"dense": [[...], ...]}` and `H` may be
//! `{"dense": [[...], ...]}`. Ranges in `D` are zero-based and half-open.

use serde::{Deserialize, Serialize};

use super::{CanonicalProblem, CostHessian};
use crate::error::{check_len, Error, Result};
use crate::linalg::{CscMatrix, DenseMatrix, Matrix};
use crate::projections::ProductSet;

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum HessianWire {
    Diag(Vec<f64>),
    Dense(Vec<Vec<f64>>),
}

#[derive(Serialize, Deserialize)]
struct CscWire {
    colptr: Vec<usize>,
    rowval: Vec<usize>,
    nzval: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ConstraintWire {
    Csc(CscWire),
    Dense(Vec<Vec<f64>>),
}

#[derive(Serialize, Deserialize)]
struct ProblemWire {
    n: usize,
    m: usize,
    #[serde(rename = "P")]
    p: HessianWire,
    q: Vec<f64>,
    #[serde(rename = "H")]
    h: ConstraintWire,
    g: Vec<f64>,
    #[serde(rename = "D")]
    d: ProductSet,
}

pub fn problem_to_json(prob: &CanonicalProblem) -> String {
    let p = match &prob.p {
        CostHessian::Diagonal(d) => HessianWire::Diag(d.clone()),
        CostHessian::Dense(m) => HessianWire::Dense(m.to_rows()),
    };
    let h = match &prob.h {
        Matrix::Sparse(s) => ConstraintWire::Csc(CscWire {
            colptr: s.colptr().to_vec(),
            rowval: s.rowval().to_vec(),
            nzval: s.nzval().to_vec(),
        }),
        Matrix::Dense(d) => ConstraintWire::Dense(d.to_rows()),
    };
    let wire = ProblemWire {
        n: prob.n(),
        m: prob.m(),
        p,
        q: prob.q.clone(),
        h,
        g: prob.g.clone(),
        d: prob.d.clone(),
    };
    serde_json::to_string(&wire).expect("problem data serializes")
}

pub fn problem_from_json(text: &str) -> Result<CanonicalProblem> {
    let wire: ProblemWire = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let (n, m) = (wire.n, wire.m);
    let p = match wire.p {
        HessianWire::Diag(d) => CostHessian::Diagonal(d),
        HessianWire::Dense(rows) => CostHessian::Dense(dense_from_rows(rows, n, n)?),
    };
    let h = match wire.h {
        ConstraintWire::Csc(c) => {
            Matrix::Sparse(CscMatrix::new(m, n, c.colptr, c.rowval, c.nzval)?)
        }
        ConstraintWire::Dense(rows) => Matrix::Dense(dense_from_rows(rows, m, n)?),
    };
    check_len("problem file n", n, wire.q.len())?;
    check_len("problem file m", m, wire.g.len())?;
    CanonicalProblem::new(p, wire.q, h, wire.g, wire.d)
}

fn dense_from_rows(rows: Vec<Vec<f64>>, nrows: usize, ncols: usize) -> Result<DenseMatrix> {
    check_len("dense matrix rows", nrows, rows.len())?;
    let mut data = Vec::with_capacity(nrows * ncols);
    for r in rows {
        check_len("dense matrix row length", ncols, r.len())?;
        data.extend(r);
    }
    DenseMatrix::from_row_major(nrows, ncols, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projections::SetDescriptor;

    #[test]
    fn reads_documented_example() {
        let text = r#"{ "n": 2, "m": 1,
          "P": {"diag": [1, 1]},
          "q": [0, 0],
          "H": {"csc": {"colptr": [0, 1, 2], "rowval": [0, 0], "nzval": [1, 1]}},
          "g": [1],
          "D": [{"type": "full_space", "params": {"dim": 2}, "range": [0, 2]}] }"#;
        let p = problem_from_json(text).unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.m(), 1);
        assert_eq!(p.h.to_dense().row(0), &[1.0, 1.0]);
    }

    #[test]
    fn dense_round_trip() {
        let p = CanonicalProblem::new(
            CostHessian::Dense(DenseMatrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap()),
            vec![0.1, -1.0 / 3.0],
            DenseMatrix::from_rows(&[vec![1.0, 1e-300]]).unwrap(),
            vec![std::f64::consts::PI],
            ProductSet::from_sets([(SetDescriptor::symmetric_box(2, 0.7), 2)]).unwrap(),
        )
        .unwrap();
        assert_eq!(problem_from_json(&problem_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn rejects_inconsistent_sizes() {
        let text = r#"{ "n": 3, "m": 1, "P": {"diag": [1, 1]}, "q": [0, 0],
          "H": {"dense": [[1, 1]]}, "g": [1],
          "D": [{"type": "full_space", "params": {"dim": 2}, "range": [0, 2]}] }"#;
        assert!(problem_from_json(text).is_err());
        assert!(matches!(problem_from_json("{"), Err(Error::Format(_))));
    }
}
