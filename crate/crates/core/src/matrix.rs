//! Dense constant matrices over a finite field.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::Field;

#[derive(Debug, Clone)]
pub struct ConstMatrix {
    pub field: Arc<Field>,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl PartialEq for ConstMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}
impl Eq for ConstMatrix {}

impl ConstMatrix {
    pub fn zeros(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        ConstMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Arc<Field>, rows: Vec<Vec<u64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let q = field.q();
        Ok(ConstMatrix {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().map(|v| v % q).collect(),
        })
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> ConstMatrix {
        let mut out = ConstMatrix::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul(&self, other: &ConstMatrix) -> Result<ConstMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = ConstMatrix::zeros(self.field.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = f.mul(a, other.get(k, c));
                    out.set(r, c, f.add(out.get(r, c), prod));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ConstMatrix) -> Result<ConstMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("add".into()));
        }
        let mut out = self.clone();
        for i in 0..self.data.len() {
            out.data[i] = self.field.add(self.data[i], other.data[i]);
        }
        Ok(out)
    }

    pub fn neg(&self) -> ConstMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = self.field.neg(*v);
        }
        out
    }

    pub fn scale(&self, s: u64) -> ConstMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = self.field.mul(*v, s);
        }
        out
    }

    pub fn pow(&self, e: usize) -> Result<ConstMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let mut acc = ConstMatrix::identity(self.field.clone(), self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn hstack(&self, other: &ConstMatrix) -> Result<ConstMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack".into()));
        }
        let mut out = ConstMatrix::zeros(self.field.clone(), self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &ConstMatrix) -> Result<ConstMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack".into()));
        }
        let mut out = ConstMatrix::zeros(self.field.clone(), self.rows + other.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        Ok(out)
    }

    pub fn select_columns(&self, idx: &[usize]) -> ConstMatrix {
        let mut out = ConstMatrix::zeros(self.field.clone(), self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> ConstMatrix {
        let mut out = ConstMatrix::zeros(self.field.clone(), idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c));
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ConstMatrix {
        self.select_rows(rows).select_columns(cols)
    }

    /// Reduced row echelon form; returns (rref, pivot column indices).
    pub fn rref(&self) -> (ConstMatrix, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let tmp = m.get(r, j);
                    m.set(r, j, m.get(pr, j));
                    m.set(pr, j, tmp);
                }
            }
            let inv = f.inv(m.get(r, c)).unwrap();
            for j in 0..m.cols {
                m.set(r, j, f.mul(m.get(r, j), inv));
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) != 0 {
                    let factor = m.get(i, c);
                    for j in 0..m.cols {
                        let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<u64> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let f = self.field.clone();
        let mut m = self.clone();
        let mut det = 1u64;
        for c in 0..m.cols {
            let Some(pr) = (c..m.rows).find(|&i| m.get(i, c) != 0) else {
                return Ok(0);
            };
            if pr != c {
                for j in 0..m.cols {
                    let tmp = m.get(c, j);
                    m.set(c, j, m.get(pr, j));
                    m.set(pr, j, tmp);
                }
                det = f.neg(det);
            }
            let piv = m.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv).unwrap();
            for i in (c + 1)..m.rows {
                let factor = f.mul(m.get(i, c), inv);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<ConstMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let aug = self.hstack(&ConstMatrix::identity(self.field.clone(), self.rows))?;
        let (r, pivots) = aug.rref();
        if pivots.len() != self.rows || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::RankDeficient);
        }
        let idx: Vec<usize> = (self.cols..2 * self.cols).collect();
        Ok(r.select_columns(&idx))
    }

    /// Solve `A x = b` for column vectors stacked in `b`; requires a unique
    /// solution (A full column rank and consistent).
    pub fn solve(&self, b: &ConstMatrix) -> Result<ConstMatrix> {
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch("solve".into()));
        }
        let aug = self.hstack(b)?;
        let (r, pivots) = aug.rref();
        let struct_pivots: Vec<usize> = pivots.iter().copied().filter(|&p| p < self.cols).collect();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::SingularSystem("inconsistent".into()));
        }
        if struct_pivots.len() != self.cols {
            return Err(Error::SingularSystem("underdetermined".into()));
        }
        let mut x = ConstMatrix::zeros(self.field.clone(), self.cols, b.cols);
        for (i, &p) in struct_pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(p, c, r.get(i, self.cols + c));
            }
        }
        Ok(x)
    }

    /// Solve `A x = b` for any one solution (free unknowns set to zero);
    /// errors only on inconsistency.
    pub fn solve_any(&self, b: &ConstMatrix) -> Result<ConstMatrix> {
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch("solve_any".into()));
        }
        let aug = self.hstack(b)?;
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::SingularSystem("inconsistent".into()));
        }
        let mut x = ConstMatrix::zeros(self.field.clone(), self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(p, c, r.get(i, self.cols + c));
            }
        }
        Ok(x)
    }

    /// Solve `A x = b` and report, per unknown, whether it is uniquely
    /// determined even when the system is underdetermined. Returns
    /// `(particular solution, determined mask)`; errors on inconsistency.
    pub fn solve_partial(&self, b: &ConstMatrix) -> Result<(ConstMatrix, Vec<bool>)> {
        if self.rows != b.rows || b.cols != 1 {
            return Err(Error::DimensionMismatch("solve_partial".into()));
        }
        let aug = self.hstack(b)?;
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::SingularSystem("inconsistent".into()));
        }
        let pivot_set: Vec<usize> = pivots;
        let is_pivot = {
            let mut v = vec![false; self.cols];
            for &p in &pivot_set {
                v[p] = true;
            }
            v
        };
        let mut x = ConstMatrix::zeros(self.field.clone(), self.cols, 1);
        let mut determined = vec![false; self.cols];
        for (i, &p) in pivot_set.iter().enumerate() {
            x.set(p, 0, r.get(i, self.cols));
            // determined iff the pivot row touches no free column
            let free_touch = (0..self.cols).any(|j| !is_pivot[j] && r.get(i, j) != 0);
            determined[p] = !free_touch;
        }
        Ok((x, determined))
    }

    /// Basis of the right kernel, as columns of the returned matrix.
    pub fn right_kernel(&self) -> ConstMatrix {
        let f = self.field.clone();
        let (r, pivots) = self.rref();
        let is_pivot = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = ConstMatrix::zeros(f.clone(), self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, 1);
            for (i, &p) in pivots.iter().enumerate() {
                out.set(p, j, f.neg(r.get(i, fc)));
            }
        }
        out
    }

    /// Basis of the left kernel, as rows of the returned matrix.
    pub fn left_kernel(&self) -> ConstMatrix {
        self.transpose().right_kernel().transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn weight(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }
}

impl std::fmt::Display for ConstMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
