//! Convolutional codes as row modules of polynomial matrices.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::Field;
use crate::poly::Poly;
use crate::polymat::{PolyMatrix, SmithOrder};

/// An (n, k, delta) convolutional code, held via a row-reduced generator.
#[derive(Debug, Clone)]
pub struct ConvolutionalCode {
    pub field: Arc<Field>,
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    /// Row-reduced generator matrix.
    pub generator: PolyMatrix,
    /// Left-prime parity-check; present iff the code is noncatastrophic.
    pub parity_check: Option<PolyMatrix>,
    pub noncatastrophic: bool,
}

impl ConvolutionalCode {
    pub fn from_generator(g: &PolyMatrix) -> Result<ConvolutionalCode> {
        let (k, n) = (g.rows, g.cols);
        if k == 0 || k >= n {
            return Err(Error::InvalidParameters(format!(
                "need 1 <= k < n, got k={k} n={n}"
            )));
        }
        let (gmin, _) = g.row_reduce()?;
        let delta = gmin.external_degree();
        let noncatastrophic = gmin.is_left_prime()?;
        let parity_check = if noncatastrophic {
            Some(parity_check_of(&gmin)?)
        } else {
            None
        };
        Ok(ConvolutionalCode {
            field: g.field.clone(),
            n,
            k,
            delta,
            generator: gmin,
            parity_check,
            noncatastrophic,
        })
    }

    pub fn from_parity_check(h: &PolyMatrix) -> Result<ConvolutionalCode> {
        let n = h.cols;
        let nk = h.rows;
        if nk == 0 || nk >= n {
            return Err(Error::InvalidParameters("parity-check shape".into()));
        }
        // reduce H to its left-prime factor before taking the kernel
        let ht = left_prime_factor(h)?;
        let sf = ht.smith_form(SmithOrder::Ascending);
        let idx: Vec<usize> = (nk..n).collect();
        let g = sf.v.select_columns(&idx).transpose();
        debug_assert!(ht.mul(&g.transpose()).unwrap().is_zero());
        Self::from_generator(&g)
    }

    /// L = floor(delta/k) + floor(delta/(n-k)).
    pub fn l_bound(&self) -> usize {
        self.delta / self.k + self.delta / (self.n - self.k)
    }

    /// M = floor(delta/k) + ceil(delta/(n-k)).
    pub fn m_bound(&self) -> usize {
        self.delta / self.k + self.delta.div_ceil(self.n - self.k)
    }

    /// Row degrees of the row-reduced generator.
    pub fn row_degrees(&self) -> Vec<usize> {
        self.generator
            .row_degrees_hrc()
            .0
            .iter()
            .map(|d| d.unwrap_or(0))
            .collect()
    }

    /// Largest row degree (the memory).
    pub fn memory(&self) -> usize {
        self.row_degrees().into_iter().max().unwrap_or(0)
    }

    pub fn encode(&self, u: &[Poly]) -> Result<Vec<Poly>> {
        if u.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "message length {} != k={}",
                u.len(),
                self.k
            )));
        }
        if u.iter().any(|p| p.field != self.field) {
            return Err(Error::MixedFields);
        }
        let um = PolyMatrix::from_rows(self.field.clone(), vec![u.to_vec()])?;
        let c = um.mul(&self.generator)?;
        Ok((0..self.n).map(|j| c.get(0, j).clone()).collect())
    }

    /// Module membership; returns the witness message when `c` is a codeword.
    /// Distinguishes the module from the parity-check kernel for
    /// catastrophic codes.
    pub fn contains(&self, c: &[Poly]) -> Result<Option<Vec<Poly>>> {
        if c.len() != self.n {
            return Err(Error::DimensionMismatch("codeword length".into()));
        }
        if c.iter().any(|p| p.field != self.field) {
            return Err(Error::MixedFields);
        }
        let sf = self.generator.smith_form(SmithOrder::Ascending);
        let cm = PolyMatrix::from_rows(self.field.clone(), vec![c.to_vec()])?;
        let d = cm.mul(&sf.v)?;
        for j in self.k..self.n {
            if !d.get(0, j).is_zero() {
                return Ok(None);
            }
        }
        let mut w = Vec::with_capacity(self.k);
        for i in 0..self.k {
            let gamma = &sf.invariants[i];
            if gamma.is_zero() {
                return Err(Error::RankDeficient);
            }
            let (q, r) = d.get(0, i).divmod(gamma)?;
            if !r.is_zero() {
                return Ok(None);
            }
            w.push(q);
        }
        let wm = PolyMatrix::from_rows(self.field.clone(), vec![w])?;
        let u = wm.mul(&sf.u)?;
        debug_assert_eq!(u.mul(&self.generator).unwrap(), cm);
        Ok(Some((0..self.k).map(|i| u.get(0, i).clone()).collect()))
    }

    pub fn dual_code(&self) -> Result<ConvolutionalCode> {
        let h = self
            .parity_check
            .as_ref()
            .ok_or_else(|| Error::Catastrophic("dual undefined".into()))?;
        ConvolutionalCode::from_generator(h)
    }

    /// The reverse code, generated by z^{nu_i} g_ij(1/z).
    pub fn reverse_code(&self) -> Result<ConvolutionalCode> {
        if !self.noncatastrophic {
            return Err(Error::Catastrophic("reverse undefined".into()));
        }
        let degs = self.row_degrees();
        let mut g = PolyMatrix::zeros(self.field.clone(), self.k, self.n);
        for i in 0..self.k {
            for j in 0..self.n {
                g.set(i, j, self.generator.get(i, j).reverse(degs[i]));
            }
        }
        ConvolutionalCode::from_generator(&g)
    }

    /// Checks the complementary-minors law: each full-size minor of G equals
    /// a single constant times the signed complementary minor of H.
    pub fn complementary_minors_check(&self) -> Result<bool> {
        let h = self
            .parity_check
            .as_ref()
            .ok_or_else(|| Error::Catastrophic("no parity-check".into()))?;
        let f = &self.field;
        let mg = self.generator.full_size_minors()?;
        let mh: std::collections::HashMap<Vec<usize>, Poly> =
            h.full_size_minors()?.into_iter().collect();
        let mut alpha: Option<u64> = None;
        for (cols, g_minor) in mg {
            let comp: Vec<usize> = (0..self.n).filter(|c| !cols.contains(c)).collect();
            let mut h_minor = mh.get(&comp).unwrap().clone();
            if cols.iter().sum::<usize>() % 2 == 1 {
                h_minor = h_minor.neg();
            }
            match (g_minor.is_zero(), h_minor.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return Ok(false),
                (false, false) => {}
            }
            let (q, r) = g_minor.divmod(&h_minor)?;
            if !r.is_zero() || !q.is_constant() {
                return Ok(false);
            }
            let a = q.coeff(0);
            match alpha {
                None => alpha = Some(a),
                Some(prev) if prev == a => {}
                Some(_) => return Ok(false),
            }
        }
        let _ = f;
        Ok(alpha.is_some())
    }

    /// Canonical left-equivalence form of the generator; two codes are the
    /// same module iff these match.
    pub fn canonical_generator(&self) -> PolyMatrix {
        self.generator.column_hermite().unwrap().0
    }

    pub fn same_code(&self, other: &ConvolutionalCode) -> bool {
        self.field == other.field
            && self.n == other.n
            && self.k == other.k
            && self.canonical_generator() == other.canonical_generator()
    }
}

/// Left-prime factor of a full-row-rank matrix: M = Delta * M1 with M1 left
/// prime, extracted through the row Hermite form.
pub fn left_prime_factor(m: &PolyMatrix) -> Result<PolyMatrix> {
    if m.is_left_prime()? {
        return Ok(m.clone());
    }
    let (_, u) = m.row_hermite()?;
    let u_inv = inverse_unimodular(&u)?;
    let idx: Vec<usize> = (0..m.rows).collect();
    let m1 = u_inv.select_rows(&idx);
    debug_assert!(m1.is_left_prime()?);
    Ok(m1)
}

pub fn inverse_unimodular(u: &PolyMatrix) -> Result<PolyMatrix> {
    let sf = u.smith_form(SmithOrder::Ascending);
    if sf.s != PolyMatrix::identity(u.field.clone(), u.rows) {
        return Err(Error::RankDeficient);
    }
    sf.v.mul(&sf.u)
}

/// Left-prime parity-check of a left-prime generator via unimodular
/// completion and inversion.
fn parity_check_of(g: &PolyMatrix) -> Result<PolyMatrix> {
    let (k, n) = (g.rows, g.cols);
    let nmat = g.complete_to_unimodular()?;
    let w = g.vstack(&nmat)?;
    let w_inv = inverse_unimodular(&w)?;
    let idx: Vec<usize> = (k..n).collect();
    let h = w_inv.select_columns(&idx).transpose();
    debug_assert!(h.mul(&g.transpose())?.is_zero());
    debug_assert!(h.is_left_prime()?);
    Ok(h)
}
