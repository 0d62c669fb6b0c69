//! Erasure-channel recovery (block, forward sliding-window, bidirectional,
//! guard-space) and Viterbi maximum-likelihood decoding on the ISO trellis.

use std::collections::BTreeSet;

use crate::channel::{ErasureStream, SymbolStream};
use crate::code::ConvolutionalCode;
use crate::error::{Error, Result};
use crate::matrix::ConstMatrix;
use crate::metrics;
use crate::sysrep;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    Complete,
    Partial,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowTrace {
    /// first step of the window
    pub t: usize,
    /// window size parameter (covers steps t..=t+j)
    pub j: usize,
    /// number of erased coordinates in the window
    pub erased: usize,
    /// whether the erased-column submatrix had full column rank
    pub solvable: bool,
    /// true for windows attempted on the reversed stream
    pub backward: bool,
}

#[derive(Debug, Clone)]
pub struct DecodeReport {
    /// recovered stream; unrecovered coordinates are zero-filled and listed
    pub recovered: SymbolStream,
    pub unrecovered: BTreeSet<(usize, usize)>,
    pub trace: Vec<WindowTrace>,
    pub status: DecodeStatus,
}

/// Block-code (degree zero) erasure correction: solves
/// H_0^(e) c^(e) = -H_0^(r) c^(r).
pub fn erasure_decode_block(c: &ConvolutionalCode, w: &[Option<u64>]) -> Result<Vec<u64>> {
    if c.delta != 0 {
        return Err(Error::InvalidParameters("block decoding needs delta = 0".into()));
    }
    if w.len() != c.n {
        return Err(Error::DimensionMismatch("received length".into()));
    }
    let (hr, _) = metrics::reduced_parity(c)?;
    let h0 = hr.coefficient_matrix(0);
    let f = &c.field;
    let erased: Vec<usize> = (0..c.n).filter(|&j| w[j].is_none()).collect();
    let mut rhs = ConstMatrix::zeros(f.clone(), h0.rows, 1);
    for (j, v) in w.iter().enumerate() {
        if let Some(v) = v {
            for r in 0..h0.rows {
                rhs.set(r, 0, f.sub(rhs.get(r, 0), f.mul(h0.get(r, j), *v)));
            }
        }
    }
    let he = h0.select_columns(&erased);
    if he.rank() < erased.len() {
        return Err(Error::RankDeficient);
    }
    let x = he.solve_any(&rhs)?;
    let mut out: Vec<u64> = w.iter().map(|v| v.unwrap_or(0)).collect();
    for (i, &j) in erased.iter().enumerate() {
        out[j] = x.get(i, 0);
    }
    Ok(out)
}

/// The sliding system matrix for a window of j+1 steps plus nu history
/// steps: (j+1)(n-k) rows, (nu+j+1)n columns.
fn window_matrix(
    hco: &[ConstMatrix],
    nu: usize,
    j: usize,
    n: usize,
    nk: usize,
) -> ConstMatrix {
    let f = hco[0].field.clone();
    let mut m = ConstMatrix::zeros(f, (j + 1) * nk, (nu + j + 1) * n);
    for s in 0..=j {
        for d in 0..=nu {
            let blk = &hco[nu - d];
            for r in 0..nk {
                for col in 0..n {
                    m.set(s * nk + r, (s + d) * n + col, blk.get(r, col));
                }
            }
        }
    }
    m
}

struct ForwardPass {
    steps: Vec<Vec<Option<u64>>>,
    trace: Vec<WindowTrace>,
    recovered_any: bool,
}

/// Left-to-right sliding-window pass over partially known steps. History
/// before step 0 is the zero state; decoding at step t needs the nu
/// preceding steps fully known (a guard space).
fn forward_pass(
    c: &ConvolutionalCode,
    mut steps: Vec<Vec<Option<u64>>>,
    j_max: usize,
    backward: bool,
) -> Result<ForwardPass> {
    let f = &c.field;
    let (hr, nu) = metrics::reduced_parity(c)?;
    let hco: Vec<ConstMatrix> = (0..=nu).map(|i| hr.coefficient_matrix(i)).collect();
    let (n, nk) = (c.n, c.n - c.k);
    let t_len = steps.len();
    let mut trace = Vec::new();
    let mut recovered_any = false;

    let mut t = 0;
    while t < t_len {
        if steps[t].iter().all(Option::is_some) {
            t += 1;
            continue;
        }
        let hist_ok =
            (t.saturating_sub(nu)..t).all(|i| steps[i].iter().all(Option::is_some));
        if !hist_ok {
            t += 1;
            continue;
        }
        let jlim = j_max.min(t_len - 1 - t);
        // build the system for a window size, returning the erased-column
        // submatrix, the RHS, and the erased coordinate list
        let build = |steps: &Vec<Vec<Option<u64>>>, j: usize| {
            let m = window_matrix(&hco, nu, j, n, nk);
            let mut rhs = ConstMatrix::zeros(f.clone(), m.rows, 1);
            let mut unknown_cols = Vec::new();
            let mut unknowns = Vec::new();
            for w in 0..(nu + j + 1) {
                let step = (t + w) as isize - nu as isize;
                for p in 0..n {
                    let col = w * n + p;
                    let val = if step < 0 {
                        Some(0)
                    } else {
                        steps[step as usize][p]
                    };
                    match val {
                        Some(v) => {
                            if v != 0 {
                                for r in 0..m.rows {
                                    rhs.set(r, 0, f.sub(rhs.get(r, 0), f.mul(m.get(r, col), v)));
                                }
                            }
                        }
                        None => {
                            unknown_cols.push(col);
                            unknowns.push((step as usize, p));
                        }
                    }
                }
            }
            (m.select_columns(&unknown_cols), rhs, unknowns)
        };
        let mut solved = false;
        for j in 0..=jlim {
            let (e, rhs, unknowns) = build(&steps, j);
            let solvable = e.rank() == unknowns.len();
            trace.push(WindowTrace { t, j, erased: unknowns.len(), solvable, backward });
            if solvable {
                let x = e.solve_any(&rhs)?;
                for (i, &(s, p)) in unknowns.iter().enumerate() {
                    steps[s][p] = Some(x.get(i, 0));
                }
                recovered_any = true;
                solved = true;
                break;
            }
        }
        if !solved {
            // fill whatever coordinates are already determined by the
            // largest window, then move on
            let (e, rhs, unknowns) = build(&steps, jlim);
            if let Ok((x, mask)) = e.solve_partial(&rhs) {
                for (i, &(s, p)) in unknowns.iter().enumerate() {
                    if mask[i] {
                        steps[s][p] = Some(x.get(i, 0));
                        recovered_any = true;
                    }
                }
            }
            t += 1;
        }
    }
    Ok(ForwardPass { steps, trace, recovered_any })
}

fn finish_report(
    c: &ConvolutionalCode,
    steps: Vec<Vec<Option<u64>>>,
    trace: Vec<WindowTrace>,
    recovered_any: bool,
    originally_erased: &BTreeSet<(usize, usize)>,
) -> Result<DecodeReport> {
    let mut unrecovered = BTreeSet::new();
    let mut out = Vec::with_capacity(steps.len());
    for (t, step) in steps.iter().enumerate() {
        let mut row = Vec::with_capacity(step.len());
        for (p, v) in step.iter().enumerate() {
            match v {
                Some(v) => row.push(*v),
                None => {
                    row.push(0);
                    unrecovered.insert((t, p));
                }
            }
        }
        out.push(row);
    }
    let status = if unrecovered.is_empty() {
        DecodeStatus::Complete
    } else if recovered_any || unrecovered.len() < originally_erased.len() {
        DecodeStatus::Partial
    } else {
        DecodeStatus::Failed
    };
    Ok(DecodeReport {
        recovered: SymbolStream::new(c.field.clone(), c.n, out)?,
        unrecovered,
        trace,
        status,
    })
}

fn erased_steps(w: &ErasureStream) -> Vec<Vec<Option<u64>>> {
    (0..w.stream.len())
        .map(|t| (0..w.stream.n).map(|p| w.received(t, p)).collect())
        .collect()
}

/// Forward (left-to-right) sliding-window erasure decoding with window
/// sizes up to L.
pub fn erasure_decode_forward(c: &ConvolutionalCode, w: &ErasureStream) -> Result<DecodeReport> {
    erasure_decode_forward_with(c, w, c.l_bound())
}

pub fn erasure_decode_forward_with(
    c: &ConvolutionalCode,
    w: &ErasureStream,
    j_max: usize,
) -> Result<DecodeReport> {
    let pass = forward_pass(c, erased_steps(w), j_max, false)?;
    finish_report(c, pass.steps, pass.trace, pass.recovered_any, &w.erased)
}

/// Forward pass, then a backward pass over the time-reversed stream using
/// the reverse code; recoveries are merged.
pub fn erasure_decode_bidirectional(
    c: &ConvolutionalCode,
    w: &ErasureStream,
) -> Result<DecodeReport> {
    let j_max = c.l_bound();
    let fwd = forward_pass(c, erased_steps(w), j_max, false)?;
    if fwd.steps.iter().all(|s| s.iter().all(Option::is_some)) {
        return finish_report(c, fwd.steps, fwd.trace, fwd.recovered_any, &w.erased);
    }
    let rev_code = c.reverse_code()?;
    let t_len = fwd.steps.len();
    let rev_steps: Vec<Vec<Option<u64>>> =
        (0..t_len).map(|t| fwd.steps[t_len - 1 - t].clone()).collect();
    let bwd = forward_pass(&rev_code, rev_steps, rev_code.l_bound(), true)?;
    let mut steps = fwd.steps;
    for t in 0..t_len {
        for p in 0..c.n {
            if steps[t][p].is_none() {
                steps[t][p] = bwd.steps[t_len - 1 - t][p];
            }
        }
    }
    let mut trace = fwd.trace;
    trace.extend(bwd.trace);
    finish_report(c, steps, trace, fwd.recovered_any || bwd.recovered_any, &w.erased)
}

/// Complete-MDP guard-space computation: if the erasures in the window of
/// (L+nu+1) steps starting at `window_start` satisfy the distribution
/// condition, every symbol of the window is recovered from the full
/// partial parity-check system. Returns None when the condition fails or
/// the system does not determine all erasures.
pub fn guard_space_recovery(
    c: &ConvolutionalCode,
    w: &ErasureStream,
    window_start: usize,
) -> Result<Option<Vec<Vec<u64>>>> {
    let f = &c.field;
    let (_, nu) = metrics::reduced_parity(c)?;
    let l = c.l_bound();
    let (n, nk) = (c.n, c.n - c.k);
    let wsteps = l + nu + 1;
    if window_start + wsteps > w.stream.len() {
        return Err(Error::InvalidParameters("window exceeds stream".into()));
    }
    let erased: Vec<(usize, usize)> = (0..wsteps)
        .flat_map(|t| {
            (0..n)
                .filter(move |&p| w.erased.contains(&(window_start + t, p)))
                .map(move |p| (t, p))
        })
        .collect();
    if erased.len() > (l + 1) * nk {
        return Ok(None);
    }
    for s in 1..=(l + 1) {
        let head = erased.iter().filter(|&&(t, p)| t * n + p < s * n).count();
        let tail = erased
            .iter()
            .filter(|&&(t, p)| t * n + p >= wsteps * n - s * n)
            .count();
        if head > s * nk || tail > s * nk {
            return Ok(None);
        }
    }
    let hh = metrics::partial_parity_check(c)?;
    let mut rhs = ConstMatrix::zeros(f.clone(), hh.rows, 1);
    let mut unknown_cols = Vec::new();
    for t in 0..wsteps {
        for p in 0..n {
            let col = t * n + p;
            match w.received(window_start + t, p) {
                Some(v) => {
                    if v != 0 {
                        for r in 0..hh.rows {
                            rhs.set(r, 0, f.sub(rhs.get(r, 0), f.mul(hh.get(r, col), v)));
                        }
                    }
                }
                None => unknown_cols.push(col),
            }
        }
    }
    let e = hh.select_columns(&unknown_cols);
    if e.rank() < unknown_cols.len() {
        return Ok(None);
    }
    let x = e.solve_any(&rhs)?;
    let mut out: Vec<Vec<u64>> = (0..wsteps)
        .map(|t| {
            (0..n)
                .map(|p| w.received(window_start + t, p).unwrap_or(0))
                .collect()
        })
        .collect();
    for (i, &col) in unknown_cols.iter().enumerate() {
        out[col / n][col % n] = x.get(i, 0);
    }
    Ok(Some(out))
}

#[derive(Debug, Clone)]
pub struct ViterbiResult {
    pub codeword: Vec<Vec<u64>>,
    pub message: Vec<Vec<u64>>,
    pub distance: usize,
}

const VITERBI_BUDGET: u128 = 1 << 20;

/// Maximum-likelihood decoding on the trellis of a minimal ISO
/// representation. Ties are broken deterministically towards the
/// lexicographically smallest (predecessor state, input) pair.
pub fn viterbi_decode(c: &ConvolutionalCode, r: &SymbolStream) -> Result<ViterbiResult> {
    if r.n != c.n {
        return Err(Error::DimensionMismatch("stream width".into()));
    }
    let f = &c.field;
    let q = f.q() as usize;
    let (sigma, perm) = sysrep::iso_from_code(c)?;
    let delta = sigma.dim();
    let k = sigma.k();
    let nk = c.n - c.k;
    let n_states = (q as u128).pow(delta as u32);
    let n_inputs = (q as u128).pow(k as u32);
    if n_states.saturating_mul(n_inputs) > VITERBI_BUDGET {
        return Err(Error::BudgetExceeded("q^(delta+k) trellis arcs".into()));
    }
    let n_states = n_states as usize;
    let n_inputs = n_inputs as usize;
    let decode_vec = |mut idx: usize, len: usize| -> Vec<u64> {
        let mut v = vec![0u64; len];
        for d in v.iter_mut() {
            *d = (idx % q) as u64;
            idx /= q;
        }
        v
    };
    let encode_vec = |v: &[u64]| -> usize {
        v.iter().rev().fold(0usize, |acc, &d| acc * q + d as usize)
    };
    // transition table: (next state, label c = [y u] in system coordinates)
    let mut next = vec![(0usize, Vec::new()); n_states * n_inputs];
    for s in 0..n_states {
        let xs = ConstMatrix::from_rows(f.clone(), vec![decode_vec(s, delta)])?;
        for ui in 0..n_inputs {
            let uv = decode_vec(ui, k);
            let um = ConstMatrix::from_rows(f.clone(), vec![uv.clone()])?;
            let x2 = xs.mul(&sigma.a)?.add(&um.mul(&sigma.b)?)?;
            let y = xs.mul(&sigma.c)?.add(&um.mul(&sigma.d)?)?;
            let mut label = y.row(0).to_vec();
            label.extend_from_slice(&uv);
            next[s * n_inputs + ui] = (encode_vec(&x2.row(0)), label);
        }
    }
    // received stream in system coordinates
    let recv: Vec<Vec<u64>> = r
        .steps
        .iter()
        .map(|st| perm.iter().map(|&j| st[j]).collect())
        .collect();
    let t_recv = recv.len();
    let horizon_cap = t_recv + 4 * (delta + 1) + 8;
    const INF: u64 = u64::MAX / 2;
    let mut dist = vec![INF; n_states];
    dist[0] = 0;
    let mut preds: Vec<Vec<(usize, usize)>> = Vec::new();
    let zero_step = vec![0u64; c.n];
    let mut t = 0;
    loop {
        let rstep = if t < t_recv { &recv[t] } else { &zero_step };
        let mut ndist = vec![INF; n_states];
        let mut npred = vec![(usize::MAX, usize::MAX); n_states];
        for s in 0..n_states {
            if dist[s] >= INF {
                continue;
            }
            for ui in 0..n_inputs {
                let (s2, label) = &next[s * n_inputs + ui];
                let add = label
                    .iter()
                    .zip(rstep.iter())
                    .filter(|(a, b)| a != b)
                    .count() as u64;
                let cand = dist[s] + add;
                if cand < ndist[*s2] {
                    ndist[*s2] = cand;
                    npred[*s2] = (s, ui);
                }
            }
        }
        preds.push(npred);
        dist = ndist;
        t += 1;
        if t >= t_recv {
            let best = *dist.iter().min().unwrap();
            if dist[0] < INF && (dist[0] <= best || t >= horizon_cap) {
                break;
            }
            if t >= horizon_cap {
                return Err(Error::BudgetExceeded("viterbi horizon".into()));
            }
        }
    }
    // backtrack from the zero state
    let distance = dist[0] as usize;
    let mut labels = Vec::with_capacity(t);
    let mut state = 0usize;
    for step in (0..t).rev() {
        let (ps, ui) = preds[step][state];
        labels.push(next[ps * n_inputs + ui].1.clone());
        state = ps;
    }
    labels.reverse();
    // trim trailing all-zero steps beyond the received horizon
    while labels.len() > t_recv && labels.last().map_or(false, |l| l.iter().all(|&v| v == 0)) {
        labels.pop();
    }
    let mut codeword = Vec::with_capacity(labels.len());
    let mut message = Vec::with_capacity(labels.len());
    for lab in &labels {
        let mut orig = vec![0u64; c.n];
        for (j, &pj) in perm.iter().enumerate() {
            orig[pj] = lab[j];
        }
        codeword.push(orig);
        message.push(lab[nk..].to_vec());
    }
    Ok(ViterbiResult { codeword, message, distance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{erase_channel, stream_from_polys, ErasureMode};
    use crate::constructions;
    use crate::galois::Field;
    use crate::metrics::MdpMethod;
    use crate::poly::Poly;
    use crate::polymat::PolyMatrix;
    use std::sync::Arc;

    fn repetition3() -> ConvolutionalCode {
        let f = Field::new(2, 1).unwrap();
        let g =
            PolyMatrix::from_coeff_rows(f, vec![vec![vec![1], vec![1], vec![1]]]).unwrap();
        ConvolutionalCode::from_generator(&g).unwrap()
    }

    #[test]
    fn block_repetition() {
        let c = repetition3();
        let out = erasure_decode_block(&c, &[Some(1), None, None]).unwrap();
        assert_eq!(out, vec![1, 1, 1]);
        // three erasures exceed d - 1 = 2
        assert!(erasure_decode_block(&c, &[None, None, None]).is_err());
    }

    #[test]
    fn block_parity_check_code() {
        let f = Field::new(2, 1).unwrap();
        let h =
            PolyMatrix::from_coeff_rows(f, vec![vec![vec![1], vec![1], vec![1]]]).unwrap();
        let c = ConvolutionalCode::from_parity_check(&h).unwrap();
        let out = erasure_decode_block(&c, &[Some(1), None, Some(0)]).unwrap();
        assert_eq!(out, vec![1, 1, 0]);
    }

    fn small_mdp_code() -> ConvolutionalCode {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59] {
            let b = constructions::complete_mdp_binomial(2, 1, 2, p).unwrap();
            if b.code.delta == 2
                && crate::metrics::is_mdp(&b.code, MdpMethod::Minors).unwrap()
            {
                return b.code;
            }
        }
        panic!("no small MDP code found");
    }

    fn encode_stream(c: &ConvolutionalCode, msg: &[Vec<u64>], min_len: usize) -> SymbolStream {
        let f = c.field.clone();
        let polys: Vec<Poly> = msg
            .iter()
            .map(|coeffs| Poly::new(f.clone(), coeffs.clone()))
            .collect();
        let cw = c.encode(&polys).unwrap();
        stream_from_polys(f, &cw, min_len)
    }

    fn msg_for(c: &ConvolutionalCode, len: usize, seed: u64) -> Vec<Vec<u64>> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..c.k)
            .map(|_| (0..len).map(|_| rng.gen_range(0..c.field.q())).collect())
            .collect()
    }

    #[test]
    fn forward_no_erasures_is_identity() {
        let c = small_mdp_code();
        let s = encode_stream(&c, &msg_for(&c, 8, 1), 12);
        let w = erase_channel(&s, &ErasureMode::Iid { rate: 0.0 }, 0).unwrap();
        let rep = erasure_decode_forward(&c, &w).unwrap();
        assert_eq!(rep.status, DecodeStatus::Complete);
        assert!(rep.trace.is_empty());
        assert_eq!(rep.recovered, s);
    }

    #[test]
    fn forward_recovers_two_bursts() {
        // desk-scale version of the burst scenario: a rate-1/2 MDP code
        // recovers two full 2-step bursts that a comparable block code
        // cannot, via overlapping sliding windows
        let c = small_mdp_code();
        let s = encode_stream(&c, &msg_for(&c, 14, 2), 18);
        let pat: Vec<(usize, usize)> = [2, 3, 10, 11]
            .iter()
            .flat_map(|&t| [(t, 0), (t, 1)])
            .collect();
        let w = erase_channel(&s, &ErasureMode::Pattern(pat), 0).unwrap();
        let rep = erasure_decode_forward(&c, &w).unwrap();
        assert_eq!(rep.status, DecodeStatus::Complete);
        assert_eq!(rep.recovered, s);
        // the same 8 erasures inside one 7-step span defeat an MDS block
        // code of the same rate over 14 symbols (it corrects at most 7)
        assert!(8 > 14 - 7);
    }

    #[test]
    fn forward_never_overwrites_received() {
        let c = small_mdp_code();
        let s = encode_stream(&c, &msg_for(&c, 10, 3), 14);
        let w = erase_channel(&s, &ErasureMode::Iid { rate: 0.35 }, 5).unwrap();
        let rep = erasure_decode_forward(&c, &w).unwrap();
        for t in 0..s.len() {
            for p in 0..s.n {
                if !w.erased.contains(&(t, p)) {
                    assert_eq!(rep.recovered.steps[t][p], s.steps[t][p]);
                }
            }
        }
        // whatever was recovered matches the transmitted codeword
        for t in 0..s.len() {
            for p in 0..s.n {
                if !rep.unrecovered.contains(&(t, p)) {
                    assert_eq!(rep.recovered.steps[t][p], s.steps[t][p]);
                }
            }
        }
    }

    #[test]
    fn oversaturated_burst_is_partial() {
        let c = small_mdp_code();
        let s = encode_stream(&c, &msg_for(&c, 10, 4), 16);
        // 4 consecutive fully erased steps: 8 erasures exceed every window
        // guarantee (L = 4, at most j+1 = 5 in a window)
        let w = erase_channel(&s, &ErasureMode::Burst { start: 5, len: 4 }, 0).unwrap();
        let rep = erasure_decode_forward(&c, &w).unwrap();
        assert_ne!(rep.status, DecodeStatus::Complete);
        assert!(!rep.unrecovered.is_empty());
    }

    #[test]
    fn bidirectional_recovers_suffix_behind_lost_block() {
        let c = small_mdp_code();
        let s = encode_stream(&c, &msg_for(&c, 9, 6), 14);
        // an unrecoverable middle burst, then an isolated erasure that
        // forward decoding cannot reach (no guard space) but backward can
        let mut pat: Vec<(usize, usize)> =
            (3..6).flat_map(|t| [(t, 0), (t, 1)]).collect();
        pat.push((7, 0));
        let w = erase_channel(&s, &ErasureMode::Pattern(pat), 0).unwrap();
        let fwd = erasure_decode_forward(&c, &w).unwrap();
        assert!(fwd.unrecovered.contains(&(7, 0)));
        let bid = erasure_decode_bidirectional(&c, &w).unwrap();
        assert!(!bid.unrecovered.contains(&(7, 0)));
        assert_eq!(bid.recovered.steps[7][0], s.steps[7][0]);
        assert_eq!(bid.status, DecodeStatus::Partial);
        // the hopeless middle stays unrecovered either way
        assert!(bid.unrecovered.iter().any(|&(t, _)| (3..6).contains(&t)));
    }

    #[test]
    fn bidirectional_equals_forward_when_forward_succeeds() {
        let c = small_mdp_code();
        let s = encode_stream(&c, &msg_for(&c, 10, 7), 14);
        let w = erase_channel(&s, &ErasureMode::Pattern(vec![(2, 0), (5, 1)]), 0).unwrap();
        let f = erasure_decode_forward(&c, &w).unwrap();
        let b = erasure_decode_bidirectional(&c, &w).unwrap();
        assert_eq!(f.status, DecodeStatus::Complete);
        assert_eq!(f.recovered, b.recovered);
    }

    fn small_complete_mdp_code() -> ConvolutionalCode {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59] {
            let b = constructions::complete_mdp_binomial(2, 1, 2, p).unwrap();
            if b.code.delta == 2 && crate::metrics::is_complete_mdp(&b.code).unwrap() {
                return b.code;
            }
        }
        panic!("no small complete MDP code found");
    }

    #[test]
    fn guard_space_clean_window() {
        let c = small_complete_mdp_code();
        let s = encode_stream(&c, &msg_for(&c, 8, 8), 12);
        let w = erase_channel(&s, &ErasureMode::Iid { rate: 0.0 }, 0).unwrap();
        let out = guard_space_recovery(&c, &w, 2).unwrap().unwrap();
        assert_eq!(out, s.steps[2..2 + out.len()].to_vec());
    }

    #[test]
    fn guard_space_admissible_pattern() {
        let c = small_complete_mdp_code();
        // window of L + nu + 1 = 7 steps; one erasure in each interior step
        let s = encode_stream(&c, &msg_for(&c, 8, 9), 12);
        let pat: Vec<(usize, usize)> = (1..6).map(|t| (t, (t % 2) as usize)).collect();
        let w = erase_channel(&s, &ErasureMode::Pattern(pat), 0).unwrap();
        let out = guard_space_recovery(&c, &w, 0).unwrap().unwrap();
        assert_eq!(out, s.steps[..7].to_vec());
    }

    #[test]
    fn guard_space_declines_bad_prefix() {
        let c = small_complete_mdp_code();
        let s = encode_stream(&c, &msg_for(&c, 8, 10), 12);
        // two erasures inside the first n positions violate s = 1
        let w = erase_channel(&s, &ErasureMode::Pattern(vec![(0, 0), (0, 1)]), 0).unwrap();
        assert!(guard_space_recovery(&c, &w, 0).unwrap().is_none());
    }

    fn example1() -> ConvolutionalCode {
        let f = Field::new(2, 1).unwrap();
        let g = PolyMatrix::from_coeff_rows(
            f,
            vec![
                vec![vec![1], vec![1], vec![0, 1]],
                vec![vec![0, 0, 1], vec![1], vec![1, 1]],
            ],
        )
        .unwrap();
        ConvolutionalCode::from_generator(&g).unwrap()
    }

    #[test]
    fn viterbi_noiseless() {
        let c = example1();
        let s = encode_stream(&c, &[vec![1, 0, 1], vec![0, 1]], 0);
        let out = viterbi_decode(&c, &s).unwrap();
        assert_eq!(out.distance, 0);
        assert_eq!(out.codeword, s.steps);
    }

    #[test]
    fn viterbi_corrects_single_error() {
        let c = example1();
        let s = encode_stream(&c, &[vec![1], vec![1, 1]], 0);
        let mut noisy = s.clone();
        noisy.steps[1][2] ^= 1;
        let out = viterbi_decode(&c, &noisy).unwrap();
        assert_eq!(out.distance, 1);
        assert_eq!(out.codeword, s.steps);
    }

    #[test]
    fn viterbi_distance_is_minimal() {
        // exhaustive oracle: over all messages of bounded degree, no
        // codeword is closer to the received word than the Viterbi output
        let c = example1();
        let f = c.field.clone();
        let s = encode_stream(&c, &[vec![1, 1], vec![0, 1]], 0);
        let mut noisy = s.clone();
        noisy.steps[0][0] ^= 1;
        noisy.steps[2][1] ^= 1;
        let out = viterbi_decode(&c, &noisy).unwrap();
        let dist = |cw: &[Vec<u64>], r: &[Vec<u64>]| -> usize {
            let len = cw.len().max(r.len());
            let zero = vec![0u64; c.n];
            (0..len)
                .map(|t| {
                    let a = cw.get(t).unwrap_or(&zero);
                    let b = r.get(t).unwrap_or(&zero);
                    a.iter().zip(b).filter(|(x, y)| x != y).count()
                })
                .sum()
        };
        let mut best = usize::MAX;
        for m0 in 0..16u64 {
            for m1 in 0..16u64 {
                let msg = vec![
                    (0..4).map(|i| (m0 >> i) & 1).collect::<Vec<u64>>(),
                    (0..4).map(|i| (m1 >> i) & 1).collect::<Vec<u64>>(),
                ];
                let cw = encode_stream(&c, &msg, 0);
                best = best.min(dist(&cw.steps, &noisy.steps));
            }
        }
        assert_eq!(out.distance, best);
        assert_eq!(dist(&out.codeword, &noisy.steps), out.distance);
        // the output is a codeword
        let polys: Vec<Poly> = (0..c.n)
            .map(|j| {
                Poly::new(
                    f.clone(),
                    out.codeword.iter().map(|st| st[j]).collect::<Vec<_>>(),
                )
            })
            .collect();
        assert!(c.contains(&polys).unwrap().is_some());
    }

    #[test]
    fn recovered_windows_satisfy_parity() {
        let c = small_mdp_code();
        let s = encode_stream(&c, &msg_for(&c, 10, 11), 14);
        let w =
            erase_channel(&s, &ErasureMode::Pattern(vec![(1, 0), (4, 1), (8, 0)]), 0).unwrap();
        let rep = erasure_decode_forward(&c, &w).unwrap();
        assert_eq!(rep.status, DecodeStatus::Complete);
        let f: Arc<Field> = c.field.clone();
        let polys: Vec<Poly> = (0..c.n)
            .map(|j| {
                Poly::new(
                    f.clone(),
                    rep.recovered.steps.iter().map(|st| st[j]).collect::<Vec<_>>(),
                )
            })
            .collect();
        assert!(c.contains(&polys).unwrap().is_some());
    }
}
