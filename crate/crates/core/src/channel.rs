//! Deterministic, seedable channel models: erasure channels (iid, explicit
//! pattern, burst) and the q-ary symmetric channel.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::galois::Field;

/// A codeword stream: one width-n symbol vector per time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolStream {
    pub field: Arc<Field>,
    pub n: usize,
    pub steps: Vec<Vec<u64>>,
}

impl SymbolStream {
    pub fn new(field: Arc<Field>, n: usize, steps: Vec<Vec<u64>>) -> Result<SymbolStream> {
        if steps.iter().any(|s| s.len() != n) {
            return Err(Error::DimensionMismatch("stream width".into()));
        }
        Ok(SymbolStream { field, n, steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// A stream after an erasure channel: the original values are retained for
/// scoring, the erased coordinates are listed as (time, position) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasureStream {
    pub stream: SymbolStream,
    pub erased: BTreeSet<(usize, usize)>,
}

impl ErasureStream {
    /// What the receiver sees at (t, pos): None if erased.
    pub fn received(&self, t: usize, pos: usize) -> Option<u64> {
        if self.erased.contains(&(t, pos)) {
            None
        } else {
            Some(self.stream.steps[t][pos])
        }
    }

    pub fn erased_in_step(&self, t: usize) -> Vec<usize> {
        (0..self.stream.n).filter(|&p| self.erased.contains(&(t, p))).collect()
    }
}

/// Lays out a codeword (vector of n polynomials) as a stream of at least
/// `min_len` time steps.
pub fn stream_from_polys(
    field: Arc<Field>,
    polys: &[crate::poly::Poly],
    min_len: usize,
) -> SymbolStream {
    let n = polys.len();
    let len = polys
        .iter()
        .filter_map(|p| p.degree())
        .map(|d| d + 1)
        .max()
        .unwrap_or(0)
        .max(min_len);
    let steps = (0..len)
        .map(|t| (0..n).map(|j| polys[j].coeff(t)).collect())
        .collect();
    SymbolStream { field, n, steps }
}

#[derive(Debug, Clone)]
pub enum ErasureMode {
    /// Each coordinate independently erased with probability `rate`.
    Iid { rate: f64 },
    /// Exactly the listed (time, position) coordinates are erased.
    Pattern(Vec<(usize, usize)>),
    /// All n coordinates of `len` consecutive steps starting at `start`.
    Burst { start: usize, len: usize },
}

pub fn erase_channel(s: &SymbolStream, mode: &ErasureMode, seed: u64) -> Result<ErasureStream> {
    let mut erased = BTreeSet::new();
    match mode {
        ErasureMode::Iid { rate } => {
            if !(0.0..=1.0).contains(rate) {
                return Err(Error::InvalidParameters("rate out of [0,1]".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for t in 0..s.len() {
                for p in 0..s.n {
                    if rng.gen::<f64>() < *rate {
                        erased.insert((t, p));
                    }
                }
            }
        }
        ErasureMode::Pattern(pat) => {
            for &(t, p) in pat {
                if t >= s.len() || p >= s.n {
                    return Err(Error::InvalidParameters(format!(
                        "pattern index ({t},{p}) out of range"
                    )));
                }
                erased.insert((t, p));
            }
        }
        ErasureMode::Burst { start, len } => {
            if start + len > s.len() {
                return Err(Error::InvalidParameters("burst exceeds stream".into()));
            }
            for t in *start..start + len {
                for p in 0..s.n {
                    erased.insert((t, p));
                }
            }
        }
    }
    Ok(ErasureStream { stream: s.clone(), erased })
}

/// q-ary symmetric channel: each symbol is independently replaced by a
/// uniformly random different field element with probability eps.
pub fn qsc_channel(s: &SymbolStream, eps: f64, seed: u64) -> Result<SymbolStream> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameters("eps out of [0,1]".into()));
    }
    let q = s.field.q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = s.clone();
    for step in out.steps.iter_mut() {
        for v in step.iter_mut() {
            if rng.gen::<f64>() < eps {
                let mut w = rng.gen_range(0..q - 1);
                if w >= *v {
                    w += 1;
                }
                *v = w;
            }
        }
    }
    Ok(out)
}
