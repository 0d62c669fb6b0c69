//! Distance machinery: free and column distances, bounds, and the
//! MDS/sMDS/MDP/reverse-MDP/complete-MDP/superregular predicates.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::code::ConvolutionalCode;
use crate::error::{Error, Result};
use crate::matrix::ConstMatrix;
use crate::poly::Poly;

/// Enumeration cap for column-distance style searches (candidate count).
pub const SEARCH_BUDGET: u64 = 1 << 24;
/// Enumeration cap for minor predicates (admissible minor count).
pub const MINOR_BUDGET: u64 = 1 << 20;

pub fn weight(v: &[Poly]) -> usize {
    v.iter()
        .map(|p| p.coeffs().iter().filter(|&&c| c != 0).count())
        .sum()
}

/// Generalized Singleton bound (n-k)(floor(delta/k)+1) + delta + 1.
pub fn singleton_bound(n: usize, k: usize, delta: usize) -> usize {
    (n - k) * (delta / k + 1) + delta + 1
}

/// Column-distance bound (n-k)(j+1) + 1.
pub fn column_bound(n: usize, k: usize, j: usize) -> usize {
    (n - k) * (j + 1) + 1
}

/// Truncated sliding generator G_j^c, block row i holding G_0..G_{j-i}
/// shifted right by i blocks.
pub fn sliding_generator(c: &ConvolutionalCode, j: usize) -> ConstMatrix {
    let (k, n) = (c.k, c.n);
    let mut out = ConstMatrix::zeros(c.field.clone(), (j + 1) * k, (j + 1) * n);
    for bi in 0..=j {
        for bj in bi..=j {
            let g = c.generator.coefficient_matrix(bj - bi);
            for r in 0..k {
                for s in 0..n {
                    out.set(bi * k + r, bj * n + s, g.get(r, s));
                }
            }
        }
    }
    out
}

/// Truncated sliding parity-check H_j^c (lower block triangular).
pub fn sliding_parity(c: &ConvolutionalCode, j: usize) -> Result<ConstMatrix> {
    let h = c
        .parity_check
        .as_ref()
        .ok_or_else(|| Error::Catastrophic("no parity-check".into()))?;
    let (nk, n) = (c.n - c.k, c.n);
    let mut out = ConstMatrix::zeros(c.field.clone(), (j + 1) * nk, (j + 1) * n);
    for bi in 0..=j {
        for bj in 0..=bi {
            let hm = h.coefficient_matrix(bi - bj);
            for r in 0..nk {
                for s in 0..n {
                    out.set(bi * nk + r, bj * n + s, hm.get(r, s));
                }
            }
        }
    }
    Ok(out)
}

/// A row-reduced left-prime parity-check and its degree nu.
pub(crate) fn reduced_parity(c: &ConvolutionalCode) -> Result<(crate::polymat::PolyMatrix, usize)> {
    let h = c
        .parity_check
        .as_ref()
        .ok_or_else(|| Error::Catastrophic("no parity-check".into()))?;
    let (hr, _) = h.row_reduce()?;
    let nu = hr.max_degree();
    Ok((hr, nu))
}

/// Partial parity-check: (L+1)(n-k) x (nu+L+1)n, block row s holding
/// H_nu .. H_0 shifted right by s blocks.
pub fn partial_parity_check(c: &ConvolutionalCode) -> Result<ConstMatrix> {
    let (hr, nu) = reduced_parity(c)?;
    let l = c.l_bound();
    let (nk, n) = (c.n - c.k, c.n);
    let mut out = ConstMatrix::zeros(c.field.clone(), (l + 1) * nk, (nu + l + 1) * n);
    for s in 0..=l {
        for t in s..=(s + nu) {
            let hm = hr.coefficient_matrix(nu - (t - s));
            for r in 0..nk {
                for cdx in 0..n {
                    out.set(s * nk + r, t * n + cdx, hm.get(r, cdx));
                }
            }
        }
    }
    Ok(out)
}

/// The upper block Toeplitz matrix of reversed parity coefficients used by
/// the reverse-MDP minor criterion.
pub fn reverse_partial_parity(c: &ConvolutionalCode) -> Result<ConstMatrix> {
    let (hr, nu) = reduced_parity(c)?;
    let l = c.l_bound();
    let (nk, n) = (c.n - c.k, c.n);
    let mut out = ConstMatrix::zeros(c.field.clone(), (l + 1) * nk, (l + 1) * n);
    for bi in 0..=l {
        for bj in bi..=l {
            let d = bj - bi;
            if d > nu {
                continue;
            }
            let hm = hr.coefficient_matrix(nu - d);
            for r in 0..nk {
                for cdx in 0..n {
                    out.set(bi * nk + r, bj * n + cdx, hm.get(r, cdx));
                }
            }
        }
    }
    Ok(out)
}

/// Bundle of the truncated sliding matrices at a window length j, plus the
/// partial parity-check.
#[derive(Debug, Clone)]
pub struct SlidingMatrices {
    pub gc: ConstMatrix,
    pub hc: ConstMatrix,
    pub partial: ConstMatrix,
}

pub fn sliding_matrices(c: &ConvolutionalCode, j: usize) -> Result<SlidingMatrices> {
    Ok(SlidingMatrices {
        gc: sliding_generator(c, j),
        hc: sliding_parity(c, j)?,
        partial: partial_parity_check(c)?,
    })
}

/// j-th column distance by exhaustive search over message prefixes.
pub fn column_distance(c: &ConvolutionalCode, j: usize) -> Result<usize> {
    if !c.noncatastrophic {
        return Err(Error::Catastrophic("column distances need G_0 full rank".into()));
    }
    let f = &c.field;
    let q = f.q();
    let k = c.k;
    let total = q
        .checked_pow((k * (j + 1)) as u32)
        .filter(|&t| t <= SEARCH_BUDGET)
        .ok_or_else(|| Error::BudgetExceeded(format!("q^(k(j+1)) with j={j}")))?;
    let gc = sliding_generator(c, j);
    let qk = q.pow(k as u32);
    let rest = total / qk;
    let mut best = usize::MAX;
    let mut u = vec![0u64; (j + 1) * k];
    for u0 in 1..qk {
        let mut v = u0;
        for d in 0..k {
            u[d] = v % q;
            v /= q;
        }
        for tail in 0..rest {
            let mut v = tail;
            for d in k..(j + 1) * k {
                u[d] = v % q;
                v /= q;
            }
            let mut wt = 0usize;
            for col in 0..gc.cols {
                let mut s = 0u64;
                for (r, &ur) in u.iter().enumerate() {
                    if ur != 0 {
                        s = f.add(s, f.mul(ur, gc.get(r, col)));
                    }
                }
                if s != 0 {
                    wt += 1;
                }
            }
            if wt < best {
                best = wt;
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdMethod {
    /// Minimum-weight-path search on the shift-register state graph.
    Stategraph,
    /// Exhaustive search over messages with per-component degree <= cap.
    Bruteforce { cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeDistanceResult {
    pub value: usize,
    /// True when the value is exact; bruteforce results are estimates from a
    /// capped search and not certified.
    pub certified: bool,
    pub cap: Option<usize>,
}

pub fn free_distance(c: &ConvolutionalCode, method: FdMethod) -> Result<FreeDistanceResult> {
    match method {
        FdMethod::Stategraph => {
            if !c.noncatastrophic {
                return Err(Error::Catastrophic(
                    "stategraph search needs a noncatastrophic code".into(),
                ));
            }
            Ok(FreeDistanceResult {
                value: stategraph_free_distance(c)?,
                certified: true,
                cap: None,
            })
        }
        FdMethod::Bruteforce { cap } => {
            let value = bruteforce_free_distance(c, cap)?;
            Ok(FreeDistanceResult {
                value,
                certified: false,
                cap: Some(cap),
            })
        }
    }
}

fn bruteforce_free_distance(c: &ConvolutionalCode, cap: usize) -> Result<usize> {
    let f = &c.field;
    let q = f.q();
    let digits = c.k * (cap + 1);
    let total = q
        .checked_pow(digits as u32)
        .filter(|&t| t <= SEARCH_BUDGET)
        .ok_or_else(|| Error::BudgetExceeded(format!("q^(k(cap+1)) with cap={cap}")))?;
    let mut best = usize::MAX;
    for idx in 1..total {
        let mut v = idx;
        let mut u = Vec::with_capacity(c.k);
        for _ in 0..c.k {
            let mut coeffs = Vec::with_capacity(cap + 1);
            for _ in 0..=cap {
                coeffs.push(v % q);
                v /= q;
            }
            u.push(Poly::new(f.clone(), coeffs));
        }
        let cw = c.encode(&u)?;
        let wt = weight(&cw);
        if wt < best {
            best = wt;
        }
    }
    Ok(best)
}

/// Dijkstra over the shift-register states of the row-reduced generator,
/// zero state to zero state, excluding the empty path.
fn stategraph_free_distance(c: &ConvolutionalCode) -> Result<usize> {
    let f = &c.field;
    let q = f.q();
    let degs = c.row_degrees();
    let delta: usize = degs.iter().sum();
    let nstates = q
        .checked_pow(delta as u32)
        .ok_or_else(|| Error::BudgetExceeded("state count".into()))?;
    let ninputs = q.pow(c.k as u32);
    if nstates.checked_mul(ninputs).map_or(true, |t| t > SEARCH_BUDGET) {
        return Err(Error::BudgetExceeded("stategraph size".into()));
    }
    // digit layout: for row i, depths 1..=nu_i in order
    let mut offsets = Vec::with_capacity(c.k);
    let mut off = 0usize;
    for &d in &degs {
        offsets.push(off);
        off += d;
    }
    // coefficient rows of G: grows[i][d] = row i of G_d
    let grows: Vec<Vec<Vec<u64>>> = (0..c.k)
        .map(|i| {
            (0..=degs[i])
                .map(|d| {
                    let gm = c.generator.coefficient_matrix(d);
                    (0..c.n).map(|j| gm.get(i, j)).collect()
                })
                .collect()
        })
        .collect();
    let decode = |mut s: u64| -> Vec<u64> {
        let mut v = vec![0u64; delta];
        for d in v.iter_mut() {
            *d = s % q;
            s /= q;
        }
        v
    };
    let encode = |v: &[u64]| -> u64 {
        let mut s = 0u64;
        for &d in v.iter().rev() {
            s = s * q + d;
        }
        s
    };
    let step = |state: u64, input: u64| -> (u64, usize) {
        let sd = decode(state);
        let mut uv = vec![0u64; c.k];
        let mut v = input;
        for u in uv.iter_mut() {
            *u = v % q;
            v /= q;
        }
        let mut out = vec![0u64; c.n];
        for i in 0..c.k {
            if uv[i] != 0 {
                for j in 0..c.n {
                    out[j] = f.add(out[j], f.mul(uv[i], grows[i][0][j]));
                }
            }
            for d in 1..=degs[i] {
                let reg = sd[offsets[i] + d - 1];
                if reg != 0 {
                    for j in 0..c.n {
                        out[j] = f.add(out[j], f.mul(reg, grows[i][d][j]));
                    }
                }
            }
        }
        let mut nd = sd.clone();
        for i in 0..c.k {
            if degs[i] == 0 {
                continue;
            }
            for d in (2..=degs[i]).rev() {
                nd[offsets[i] + d - 1] = nd[offsets[i] + d - 2];
            }
            nd[offsets[i]] = uv[i];
        }
        let wt = out.iter().filter(|&&x| x != 0).count();
        (encode(&nd), wt)
    };
    let mut dist: Vec<usize> = vec![usize::MAX; nstates as usize];
    let mut heap = BinaryHeap::new();
    let mut best_zero = usize::MAX;
    for input in 1..ninputs {
        let (s, w) = step(0, input);
        if s == 0 {
            best_zero = best_zero.min(w);
        } else if w < dist[s as usize] {
            dist[s as usize] = w;
            heap.push(Reverse((w, s)));
        }
    }
    while let Some(Reverse((w, s))) = heap.pop() {
        if w > dist[s as usize] || w >= best_zero {
            continue;
        }
        for input in 0..ninputs {
            let (t, ew) = step(s, input);
            let nw = w + ew;
            if t == 0 {
                best_zero = best_zero.min(nw);
            } else if nw < dist[t as usize] {
                dist[t as usize] = nw;
                heap.push(Reverse((nw, t)));
            }
        }
    }
    Ok(best_zero)
}

#[derive(Debug, Clone)]
pub struct DistanceProfile {
    pub d_free: FreeDistanceResult,
    pub d_col: Vec<usize>,
    pub singleton: usize,
    pub column_bounds: Vec<usize>,
}

/// Distances up to j_max (default L) plus the free distance.
pub fn distance_profile(c: &ConvolutionalCode, j_max: Option<usize>) -> Result<DistanceProfile> {
    let jm = j_max.unwrap_or_else(|| c.l_bound());
    let mut d_col = Vec::with_capacity(jm + 1);
    let mut bounds = Vec::with_capacity(jm + 1);
    for j in 0..=jm {
        d_col.push(column_distance(c, j)?);
        bounds.push(column_bound(c.n, c.k, j));
    }
    let d_free = free_distance(c, FdMethod::Stategraph)?;
    Ok(DistanceProfile {
        d_free,
        d_col,
        singleton: singleton_bound(c.n, c.k, c.delta),
        column_bounds: bounds,
    })
}

pub fn is_mds(c: &ConvolutionalCode) -> Result<bool> {
    let fd = free_distance(c, FdMethod::Stategraph)?;
    Ok(fd.value == singleton_bound(c.n, c.k, c.delta))
}

pub fn is_smds(c: &ConvolutionalCode) -> Result<bool> {
    let d = column_distance(c, c.m_bound())?;
    Ok(d == singleton_bound(c.n, c.k, c.delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdpMethod {
    Distances,
    Minors,
}

/// Outcome of an admissible-minor sweep: all nonzero, or a witness set of
/// (0-based) column indices with a vanishing minor.
#[derive(Debug, Clone)]
pub struct MinorReport {
    pub ok: bool,
    pub witness: Option<Vec<usize>>,
    pub checked: u64,
}

/// Enumerates size-`rows` column sets of `m` whose sorted 0-based indices
/// satisfy lo[i] <= j_i <= hi[i], checking each full-size minor.
fn admissible_minors(m: &ConstMatrix, lo: &[usize], hi: &[usize]) -> Result<MinorReport> {
    let r = m.rows;
    let all_rows: Vec<usize> = (0..r).collect();
    let mut idx = vec![0usize; r];
    let mut checked: u64 = 0;
    let mut witness = None;
    fn rec(
        m: &ConstMatrix,
        all_rows: &[usize],
        lo: &[usize],
        hi: &[usize],
        idx: &mut Vec<usize>,
        pos: usize,
        start: usize,
        checked: &mut u64,
        witness: &mut Option<Vec<usize>>,
    ) -> Result<()> {
        let r = idx.len();
        if witness.is_some() {
            return Ok(());
        }
        if pos == r {
            *checked += 1;
            if *checked > MINOR_BUDGET {
                return Err(Error::BudgetExceeded("admissible minor count".into()));
            }
            let sub = m.submatrix(all_rows, idx);
            if sub.det()? == 0 {
                *witness = Some(idx.clone());
            }
            return Ok(());
        }
        let first = start.max(lo[pos]);
        // leave room for the remaining positions
        let last = hi[pos].min(m.cols - (r - pos));
        for j in first..=last {
            idx[pos] = j;
            rec(m, all_rows, lo, hi, idx, pos + 1, j + 1, checked, witness)?;
            if witness.is_some() {
                return Ok(());
            }
        }
        Ok(())
    }
    rec(m, &all_rows, lo, hi, &mut idx, 0, 0, &mut checked, &mut witness)?;
    Ok(MinorReport {
        ok: witness.is_none(),
        witness,
        checked,
    })
}

/// MDP minor criterion on the sliding parity-check at window L.
pub fn mdp_minor_report(c: &ConvolutionalCode) -> Result<MinorReport> {
    let l = c.l_bound();
    let hl = sliding_parity(c, l)?;
    let rows = (l + 1) * (c.n - c.k);
    let mut lo = vec![0usize; rows];
    let mut hi = vec![hl.cols - 1; rows];
    for s in 1..=l {
        // 1-based j_{s(n-k)} <= sn
        let pos = s * (c.n - c.k) - 1;
        hi[pos] = hi[pos].min(s * c.n - 1);
    }
    let _ = &mut lo;
    admissible_minors(&hl, &lo, &hi)
}

pub fn is_mdp(c: &ConvolutionalCode, method: MdpMethod) -> Result<bool> {
    match method {
        MdpMethod::Distances => {
            let l = c.l_bound();
            Ok(column_distance(c, l)? == column_bound(c.n, c.k, l))
        }
        MdpMethod::Minors => Ok(mdp_minor_report(c)?.ok),
    }
}

/// Reverse-MDP minor criterion (needs (n-k) | delta).
pub fn reverse_mdp_minor_report(c: &ConvolutionalCode) -> Result<MinorReport> {
    if c.delta % (c.n - c.k) != 0 {
        return Err(Error::InvalidParameters("(n-k) must divide delta".into()));
    }
    let l = c.l_bound();
    let fl = reverse_partial_parity(c)?;
    let rows = (l + 1) * (c.n - c.k);
    let mut lo = vec![0usize; rows];
    let hi = vec![fl.cols - 1; rows];
    for s in 1..=l {
        // 1-based j_{s(n-k)+1} > sn
        let pos = s * (c.n - c.k);
        if pos < rows {
            lo[pos] = lo[pos].max(s * c.n);
        }
    }
    admissible_minors(&fl, &lo, &hi)
}

/// True iff the reverse code is MDP; defined only for MDP inputs.
pub fn is_reverse_mdp(c: &ConvolutionalCode) -> Result<bool> {
    if !is_mdp(c, MdpMethod::Minors)? {
        return Err(Error::InvalidParameters(
            "reverse-MDP is defined for MDP codes".into(),
        ));
    }
    let rev = c.reverse_code()?;
    is_mdp(&rev, MdpMethod::Minors)
}

/// Complete-MDP minor criterion on the partial parity-check.
pub fn complete_mdp_minor_report(c: &ConvolutionalCode) -> Result<MinorReport> {
    if c.delta % (c.n - c.k) != 0 {
        return Err(Error::InvalidParameters("(n-k) must divide delta".into()));
    }
    let (_, nu) = reduced_parity(c)?;
    let l = c.l_bound();
    let frak = partial_parity_check(c)?;
    let rows = (l + 1) * (c.n - c.k);
    let mut lo = vec![0usize; rows];
    let mut hi = vec![frak.cols - 1; rows];
    for s in 1..=l {
        // 1-based: j_{(n-k)s+1} > sn and j_{(n-k)s} <= sn + nu*n
        let p1 = s * (c.n - c.k);
        if p1 < rows {
            lo[p1] = lo[p1].max(s * c.n);
        }
        let p0 = s * (c.n - c.k) - 1;
        hi[p0] = hi[p0].min(s * c.n + nu * c.n - 1);
    }
    admissible_minors(&frak, &lo, &hi)
}

pub fn is_complete_mdp(c: &ConvolutionalCode) -> Result<bool> {
    Ok(complete_mdp_minor_report(c)?.ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrShape {
    General,
    LowerTriangularToeplitz,
}

/// Superregularity: every minor whose zero-pattern admits a full nonzero
/// transversal must be nonzero.
pub fn is_superregular(a: &ConstMatrix, shape: SrShape) -> Result<bool> {
    if a.rows != a.cols {
        return Err(Error::NotSquare);
    }
    let n = a.rows;
    if shape == SrShape::LowerTriangularToeplitz {
        for r in 0..n {
            for c in 0..n {
                if c > r && a.get(r, c) != 0 {
                    return Err(Error::InvalidParameters("not lower triangular".into()));
                }
                if c <= r && r + 1 < n && a.get(r, c) != a.get(r + 1, c + 1) {
                    return Err(Error::InvalidParameters("not Toeplitz".into()));
                }
            }
        }
    }
    // Support pattern of the indeterminate matrix: for the Toeplitz shape
    // every position on or below the diagonal counts, even if the value
    // happens to vanish in this field.
    let mut mask = ConstMatrix::zeros(a.field.clone(), n, n);
    for r in 0..n {
        for c in 0..n {
            let on = match shape {
                SrShape::General => a.get(r, c) != 0,
                SrShape::LowerTriangularToeplitz => c <= r,
            };
            mask.set(r, c, on as u64);
        }
    }
    masked_minors_nonzero(a, &mask)
}

/// True iff every square submatrix whose support pattern (per `mask`)
/// admits a nonzero transversal has nonzero determinant. Works on
/// rectangular matrices.
pub(crate) fn masked_minors_nonzero(a: &ConstMatrix, mask: &ConstMatrix) -> Result<bool> {
    let rmax = a.rows.min(a.cols);
    let mut total: u64 = 0;
    for r in 1..=rmax {
        let c = binomial(a.rows as u64, r as u64);
        let d = binomial(a.cols as u64, r as u64);
        total = total.saturating_add(c.saturating_mul(d));
    }
    if total > MINOR_BUDGET {
        return Err(Error::BudgetExceeded("minor count".into()));
    }
    for r in 1..=rmax {
        for rows in crate::polymat::combinations(a.rows, r) {
            for cols in crate::polymat::combinations(a.cols, r) {
                let sub = a.submatrix(&rows, &cols);
                if sub.det()? == 0 && has_nonzero_transversal(&mask.submatrix(&rows, &cols)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Bipartite-matching test: does the support pattern contain a permutation
/// with all entries nonzero? (If not, the minor is trivially zero.)
fn has_nonzero_transversal(m: &ConstMatrix) -> bool {
    let n = m.rows;
    let mut match_col: Vec<Option<usize>> = vec![None; n];
    fn augment(
        m: &ConstMatrix,
        r: usize,
        seen: &mut Vec<bool>,
        match_col: &mut Vec<Option<usize>>,
    ) -> bool {
        for c in 0..m.cols {
            if m.get(r, c) != 0 && !seen[c] {
                seen[c] = true;
                if match_col[c].map_or(true, |r2| augment(m, r2, seen, match_col)) {
                    match_col[c] = Some(r);
                    return true;
                }
            }
        }
        false
    }
    for r in 0..n {
        let mut seen = vec![false; n];
        if !augment(m, r, &mut seen, &mut match_col) {
            return false;
        }
    }
    true
}
