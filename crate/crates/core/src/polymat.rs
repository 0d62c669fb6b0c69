//! Polynomial matrices over F_q[z]: canonical forms, primeness, minors.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::Field;
use crate::matrix::ConstMatrix;
use crate::poly::Poly;

#[derive(Debug, Clone)]
pub struct PolyMatrix {
    pub field: Arc<Field>,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Poly>,
}

impl PartialEq for PolyMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
    }
}
impl Eq for PolyMatrix {}

/// Ordering of the Smith invariant polynomials on the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmithOrder {
    /// gamma_i divides gamma_{i+1} (the usual textbook chain).
    Ascending,
    /// gamma_{i+1} divides gamma_i (largest invariant first).
    Descending,
}

/// Full Smith decomposition S = U * M * V with tracked inverses.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub s: PolyMatrix,
    pub u: PolyMatrix,
    pub v: PolyMatrix,
    pub u_inv: PolyMatrix,
    pub v_inv: PolyMatrix,
    pub invariants: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        let entries = (0..rows * cols).map(|_| Poly::zero(field.clone())).collect();
        PolyMatrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        let mut m = Self::zeros(field.clone(), n, n);
        for i in 0..n {
            m.set(i, i, Poly::constant(field.clone(), 1));
        }
        m
    }

    pub fn from_rows(field: Arc<Field>, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(PolyMatrix {
            field,
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Rows given as coefficient vectors, ascending.
    pub fn from_coeff_rows(field: Arc<Field>, rows: Vec<Vec<Vec<u64>>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|c| Poly::new(field.clone(), c))
                    .collect()
            })
            .collect();
        Self::from_rows(field, rows)
    }

    pub fn from_const(m: &ConstMatrix) -> Self {
        let mut out = Self::zeros(m.field.clone(), m.rows, m.cols);
        for r in 0..m.rows {
            for c in 0..m.cols {
                out.set(r, c, Poly::constant(m.field.clone(), m.get(r, c)));
            }
        }
        out
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.entries[r * self.cols + c] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn max_degree(&self) -> usize {
        self.entries
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }

    /// Entry-wise coefficient of z^d.
    pub fn coefficient_matrix(&self, d: usize) -> ConstMatrix {
        let mut out = ConstMatrix::zeros(self.field.clone(), self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).coeff(d));
            }
        }
        out
    }

    pub fn eval(&self, x: u64) -> ConstMatrix {
        let mut out = ConstMatrix::zeros(self.field.clone(), self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).eval(x));
            }
        }
        out
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = Self::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("add".into()));
        }
        let mut out = self.clone();
        for i in 0..self.entries.len() {
            out.entries[i] = self.entries[i].add(&other.entries[i]);
        }
        Ok(out)
    }

    pub fn neg(&self) -> PolyMatrix {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = e.neg();
        }
        out
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.field.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = a.mul(other.get(k, c));
                    out.set(r, c, out.get(r, c).add(&prod));
                }
            }
        }
        Ok(out)
    }

    pub fn hstack(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack".into()));
        }
        let mut out = Self::zeros(self.field.clone(), self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack".into()));
        }
        let mut rows = Vec::with_capacity(self.rows + other.rows);
        for r in 0..self.rows {
            rows.push((0..self.cols).map(|c| self.get(r, c).clone()).collect());
        }
        for r in 0..other.rows {
            rows.push((0..other.cols).map(|c| other.get(r, c).clone()).collect());
        }
        Self::from_rows(self.field.clone(), rows)
    }

    pub fn select_rows(&self, idx: &[usize]) -> PolyMatrix {
        let rows = idx
            .iter()
            .map(|&r| (0..self.cols).map(|c| self.get(r, c).clone()).collect())
            .collect();
        Self::from_rows(self.field.clone(), rows).unwrap()
    }

    pub fn select_columns(&self, idx: &[usize]) -> PolyMatrix {
        let rows = (0..self.rows)
            .map(|r| idx.iter().map(|&c| self.get(r, c).clone()).collect())
            .collect();
        Self::from_rows(self.field.clone(), rows).unwrap()
    }

    /// Row degrees (None for zero rows) and the highest-row-coefficient matrix.
    pub fn row_degrees_hrc(&self) -> (Vec<Option<usize>>, ConstMatrix) {
        let mut degs = Vec::with_capacity(self.rows);
        let mut hrc = ConstMatrix::zeros(self.field.clone(), self.rows, self.cols);
        for r in 0..self.rows {
            let nu = (0..self.cols).filter_map(|c| self.get(r, c).degree()).max();
            degs.push(nu);
            if let Some(nu) = nu {
                for c in 0..self.cols {
                    hrc.set(r, c, self.get(r, c).coeff(nu));
                }
            }
        }
        (degs, hrc)
    }

    /// Sum of the row degrees (the external degree); zero rows contribute 0.
    pub fn external_degree(&self) -> usize {
        self.row_degrees_hrc()
            .0
            .iter()
            .filter_map(|d| *d)
            .sum()
    }

    pub fn is_row_reduced(&self) -> bool {
        let (_, hrc) = self.row_degrees_hrc();
        hrc.rank() == self.rows
    }

    /// Row reduction by highest-coefficient cancellation. Returns (R, U) with
    /// R = U * M row reduced and U unimodular.
    pub fn row_reduce(&self) -> Result<(PolyMatrix, PolyMatrix)> {
        let f = self.field.clone();
        let mut r = self.clone();
        let mut u = Self::identity(f.clone(), self.rows);
        loop {
            let (degs, hrc) = r.row_degrees_hrc();
            if degs.iter().any(|d| d.is_none()) {
                return Err(Error::RankDeficient);
            }
            if hrc.rank() == self.rows {
                return Ok((r, u));
            }
            let kern = hrc.left_kernel();
            let w: Vec<u64> = (0..self.rows).map(|i| kern.get(0, i)).collect();
            let istar = (0..self.rows)
                .filter(|&i| w[i] != 0)
                .max_by_key(|&i| (degs[i].unwrap(), std::cmp::Reverse(i)))
                .unwrap();
            let nu_star = degs[istar].unwrap();
            for m in [&mut r, &mut u] {
                let mut new_row: Vec<Poly> = (0..m.cols)
                    .map(|_| Poly::zero(f.clone()))
                    .collect();
                for i in 0..self.rows {
                    if w[i] == 0 {
                        continue;
                    }
                    let shift = nu_star - degs[i].unwrap();
                    for (c, acc) in new_row.iter_mut().enumerate() {
                        *acc = acc.add(&m.get(i, c).scale(w[i]).shift(shift));
                    }
                }
                for (c, p) in new_row.into_iter().enumerate() {
                    m.set(istar, c, p);
                }
            }
        }
    }

    /// Row-operation echelon with Hermite normalization: H = U * M, pivots
    /// monic, entries above a pivot of strictly lower degree, zero rows last.
    fn echelon(&self) -> (PolyMatrix, PolyMatrix, usize) {
        let f = self.field.clone();
        let mut h = self.clone();
        let mut u = Self::identity(f.clone(), self.rows);
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            loop {
                let nz: Vec<usize> = (r..self.rows).filter(|&i| !h.get(i, c).is_zero()).collect();
                if nz.len() <= 1 {
                    break;
                }
                let &imin = nz
                    .iter()
                    .min_by_key(|&&i| h.get(i, c).degree().unwrap())
                    .unwrap();
                for &i in &nz {
                    if i == imin {
                        continue;
                    }
                    let (q, _) = h.get(i, c).divmod(h.get(imin, c)).unwrap();
                    h.row_sub_mul(i, imin, &q);
                    u.row_sub_mul(i, imin, &q);
                }
            }
            let Some(piv) = (r..self.rows).find(|&i| !h.get(i, c).is_zero()) else {
                continue;
            };
            h.swap_rows(r, piv);
            u.swap_rows(r, piv);
            let inv = f.inv(h.get(r, c).leading_coeff()).unwrap();
            h.scale_row(r, inv);
            u.scale_row(r, inv);
            let pd = h.get(r, c).degree().unwrap();
            for i in 0..r {
                if h.get(i, c).degree().map_or(false, |d| d >= pd) {
                    let (q, _) = h.get(i, c).divmod(h.get(r, c)).unwrap();
                    h.row_sub_mul(i, r, &q);
                    u.row_sub_mul(i, r, &q);
                }
            }
            r += 1;
        }
        (h, u, r)
    }

    /// Column Hermite form: H = U * M.
    pub fn column_hermite(&self) -> Result<(PolyMatrix, PolyMatrix)> {
        let (h, u, rank) = self.echelon();
        if rank != self.rows {
            return Err(Error::RankDeficient);
        }
        Ok((h, u))
    }

    /// Row Hermite form: H = M * U with H = [Delta 0], Delta lower triangular.
    pub fn row_hermite(&self) -> Result<(PolyMatrix, PolyMatrix)> {
        let (h, u, rank) = self.transpose().echelon();
        if rank != self.rows.min(self.cols) || rank != self.rows {
            return Err(Error::RankDeficient);
        }
        Ok((h.transpose(), u.transpose()))
    }

    fn row_sub_mul(&mut self, i: usize, j: usize, q: &Poly) {
        for c in 0..self.cols {
            let v = self.get(i, c).sub(&q.mul(self.get(j, c)));
            self.set(i, c, v);
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            let a = self.get(i, c).clone();
            let b = self.get(j, c).clone();
            self.set(i, c, b);
            self.set(j, c, a);
        }
    }

    fn scale_row(&mut self, i: usize, s: u64) {
        for c in 0..self.cols {
            let v = self.get(i, c).scale(s);
            self.set(i, c, v);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            let a = self.get(r, i).clone();
            let b = self.get(r, j).clone();
            self.set(r, i, b);
            self.set(r, j, a);
        }
    }

    fn col_sub_mul(&mut self, j: usize, i: usize, q: &Poly) {
        for r in 0..self.rows {
            let v = self.get(r, j).sub(&q.mul(self.get(r, i)));
            self.set(r, j, v);
        }
    }

    fn scale_col(&mut self, j: usize, s: u64) {
        for r in 0..self.rows {
            let v = self.get(r, j).scale(s);
            self.set(r, j, v);
        }
    }

    fn row_add_row(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            let v = self.get(i, c).add(self.get(j, c));
            self.set(i, c, v);
        }
    }

    /// Smith decomposition with invariant ordering per `order`.
    pub fn smith_form(&self, order: SmithOrder) -> SmithForm {
        let f = self.field.clone();
        let (k, n) = (self.rows, self.cols);
        let mut s = self.clone();
        let mut u = Self::identity(f.clone(), k);
        let mut u_inv = Self::identity(f.clone(), k);
        let mut v = Self::identity(f.clone(), n);
        let mut v_inv = Self::identity(f.clone(), n);
        let m = k.min(n);
        for t in 0..m {
            'pivot: loop {
                // minimal-degree nonzero entry in the trailing block
                let mut best: Option<(usize, usize, usize)> = None;
                for i in t..k {
                    for j in t..n {
                        if let Some(d) = s.get(i, j).degree() {
                            if best.map_or(true, |(_, _, bd)| d < bd) {
                                best = Some((i, j, d));
                            }
                        }
                    }
                }
                let Some((bi, bj, _)) = best else {
                    break 'pivot;
                };
                s.swap_rows(t, bi);
                u.swap_rows(t, bi);
                u_inv.swap_cols(t, bi);
                s.swap_cols(t, bj);
                v.swap_cols(t, bj);
                v_inv.swap_rows(t, bj);

                let mut dirty = false;
                for i in t + 1..k {
                    if s.get(i, t).is_zero() {
                        continue;
                    }
                    let (q, r) = s.get(i, t).divmod(s.get(t, t)).unwrap();
                    if !r.is_zero() {
                        dirty = true;
                    }
                    s.row_sub_mul(i, t, &q);
                    u.row_sub_mul(i, t, &q);
                    // inverse op: col_t += q * col_i
                    u_inv.col_sub_mul(t, i, &q.neg());
                }
                if dirty {
                    continue 'pivot;
                }
                for j in t + 1..n {
                    if s.get(t, j).is_zero() {
                        continue;
                    }
                    let (q, r) = s.get(t, j).divmod(s.get(t, t)).unwrap();
                    if !r.is_zero() {
                        dirty = true;
                    }
                    s.col_sub_mul(j, t, &q);
                    v.col_sub_mul(j, t, &q);
                    v_inv.row_sub_mul(t, j, &q.neg());
                }
                if dirty {
                    continue 'pivot;
                }
                // divisibility of the trailing block by the pivot
                let mut bad: Option<usize> = None;
                'scan: for i in t + 1..k {
                    for j in t + 1..n {
                        if s.get(i, j).is_zero() {
                            continue;
                        }
                        let (_, r) = s.get(i, j).divmod(s.get(t, t)).unwrap();
                        if !r.is_zero() {
                            bad = Some(i);
                            break 'scan;
                        }
                    }
                }
                if let Some(i) = bad {
                    s.row_add_row(t, i);
                    u.row_add_row(t, i);
                    // inverse op: col_i -= col_t
                    let one = Poly::constant(f.clone(), 1);
                    u_inv.col_sub_mul(i, t, &one);
                    continue 'pivot;
                }
                let lc = s.get(t, t).leading_coeff();
                if lc != 1 {
                    let inv = f.inv(lc).unwrap();
                    s.scale_row(t, inv);
                    u.scale_row(t, inv);
                    u_inv.scale_col(t, lc);
                }
                break 'pivot;
            }
        }
        let mut invariants: Vec<Poly> = (0..m).map(|i| s.get(i, i).clone()).collect();
        if order == SmithOrder::Descending {
            let r = invariants.iter().filter(|p| !p.is_zero()).count();
            let perm: Vec<usize> = (0..r).rev().chain(r..k.max(n)).collect();
            let row_perm: Vec<usize> = perm.iter().copied().filter(|&i| i < k).collect();
            let col_perm: Vec<usize> = perm.iter().copied().filter(|&i| i < n).collect();
            s = s.select_rows(&row_perm).select_columns(&col_perm);
            u = u.select_rows(&row_perm);
            u_inv = u_inv.select_columns(&row_perm);
            v = v.select_columns(&col_perm);
            v_inv = v_inv.select_rows(&col_perm);
            invariants[..r].reverse();
        }
        SmithForm {
            s,
            u,
            v,
            u_inv,
            v_inv,
            invariants,
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let f = self.field.clone();
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::constant(f, 1));
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = Poly::constant(f.clone(), 1);
        for t in 0..n - 1 {
            if m.get(t, t).is_zero() {
                let Some(piv) = (t + 1..n).find(|&i| !m.get(i, t).is_zero()) else {
                    return Ok(Poly::zero(f));
                };
                m.swap_rows(t, piv);
                negate = !negate;
            }
            for i in t + 1..n {
                for j in t + 1..n {
                    let num = m
                        .get(i, j)
                        .mul(m.get(t, t))
                        .sub(&m.get(i, t).mul(m.get(t, j)));
                    let (q, r) = num.divmod(&prev)?;
                    debug_assert!(r.is_zero());
                    m.set(i, j, q);
                }
            }
            for i in t + 1..n {
                m.set(i, t, Poly::zero(f.clone()));
            }
            prev = m.get(t, t).clone();
        }
        let det = m.get(n - 1, n - 1).clone();
        Ok(if negate { det.neg() } else { det })
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        let d = self.determinant()?;
        Ok(d.is_constant() && !d.is_zero())
    }

    /// All k x k minors for a k x n matrix, keyed by lexicographic column
    /// index sets.
    pub fn full_size_minors(&self) -> Result<Vec<(Vec<usize>, Poly)>> {
        if self.rows > self.cols {
            return Err(Error::DimensionMismatch("wide matrix required".into()));
        }
        let mut out = Vec::new();
        for cols in combinations(self.cols, self.rows) {
            let d = self.select_columns(&cols).determinant()?;
            out.push((cols, d));
        }
        Ok(out)
    }

    /// Maximal degree over the full-size minors.
    pub fn internal_degree(&self) -> Result<usize> {
        let minors = self.full_size_minors()?;
        let deg = minors.iter().filter_map(|(_, p)| p.degree()).max();
        deg.ok_or(Error::RankDeficient)
    }

    /// Left prime iff the Smith form is [I_k 0]; cross-checked against the
    /// gcd of all full-size minors.
    pub fn is_left_prime(&self) -> Result<bool> {
        if self.rows > self.cols {
            return Err(Error::DimensionMismatch("wide matrix required".into()));
        }
        let sf = self.smith_form(SmithOrder::Ascending);
        let one = Poly::constant(self.field.clone(), 1);
        let by_smith = sf.invariants.iter().all(|g| *g == one);
        let mut g = Poly::zero(self.field.clone());
        for (_, m) in self.full_size_minors()? {
            g = g.gcd(&m);
        }
        let by_minors = g == one;
        debug_assert_eq!(by_smith, by_minors);
        Ok(by_smith && by_minors)
    }

    /// A polynomial right inverse P with M * P = I_k, for left prime M.
    pub fn right_inverse(&self) -> Result<PolyMatrix> {
        if !self.is_left_prime()? {
            return Err(Error::NotLeftPrime);
        }
        let sf = self.smith_form(SmithOrder::Ascending);
        let cols: Vec<usize> = (0..self.rows).collect();
        let p = sf.v.select_columns(&cols).mul(&sf.u)?;
        debug_assert_eq!(
            self.mul(&p).unwrap(),
            Self::identity(self.field.clone(), self.rows)
        );
        Ok(p)
    }

    /// Rows L such that [M; L] is unimodular, for left prime k < n.
    pub fn complete_to_unimodular(&self) -> Result<PolyMatrix> {
        if self.rows >= self.cols {
            return Err(Error::DimensionMismatch("k < n required".into()));
        }
        if !self.is_left_prime()? {
            return Err(Error::NotLeftPrime);
        }
        let sf = self.smith_form(SmithOrder::Ascending);
        let idx: Vec<usize> = (self.rows..self.cols).collect();
        let l = sf.v_inv.select_rows(&idx);
        debug_assert!(self.vstack(&l).unwrap().is_unimodular().unwrap());
        Ok(l)
    }
}

/// k-subsets of {0..n-1} in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        if idx[i] == i + n - k {
            return out;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl std::fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
