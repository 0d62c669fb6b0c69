//! Univariate polynomials over a finite field, coefficients ascending.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::Field;

/// A polynomial in z over F_q. The coefficient vector carries no trailing
/// zeros, so the zero polynomial is the empty vector.
#[derive(Debug, Clone)]
pub struct Poly {
    pub field: Arc<Field>,
    coeffs: Vec<u64>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for Poly {}

impl Poly {
    pub fn new(field: Arc<Field>, mut coeffs: Vec<u64>) -> Self {
        let q = field.q();
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: Arc<Field>) -> Self {
        Poly { field, coeffs: vec![] }
    }

    pub fn constant(field: Arc<Field>, c: u64) -> Self {
        Poly::new(field, vec![c])
    }

    pub fn monomial(field: Arc<Field>, c: u64, deg: usize) -> Self {
        let mut v = vec![0u64; deg + 1];
        v[deg] = c;
        Poly::new(field, v)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of z^i (0 beyond the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = f.add(self.coeff(i), other.coeff(i));
        }
        Poly::new(self.field.clone(), out)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(
            self.field.clone(),
            self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field.clone());
        }
        let f = &self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(self.field.clone(), out)
    }

    pub fn scale(&self, s: u64) -> Poly {
        let f = &self.field;
        Poly::new(
            self.field.clone(),
            self.coeffs.iter().map(|&c| f.mul(c, s)).collect(),
        )
    }

    /// Multiply by z^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0u64; k];
        v.extend_from_slice(&self.coeffs);
        Poly::new(self.field.clone(), v)
    }

    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field.clone();
        let dd = divisor.degree().unwrap();
        let lead_inv = f.inv(divisor.leading_coeff())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let lead = *rem.last().unwrap();
            let shift = rem.len() - 1 - dd;
            if lead != 0 {
                let qc = f.mul(lead, lead_inv);
                quot[shift] = qc;
                for (j, &c) in divisor.coeffs.iter().enumerate() {
                    rem[shift + j] = f.sub(rem[shift + j], f.mul(qc, c));
                }
            }
            rem.pop();
            while rem.last() == Some(&0) {
                rem.pop();
            }
            if rem.len() <= dd {
                break;
            }
        }
        Ok((Poly::new(f.clone(), quot), Poly::new(f, rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).unwrap();
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.scale(self.field.inv(a.leading_coeff()).unwrap())
        }
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = &self.field;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// g(z) -> z^d * g(1/z) for a chosen degree bound d >= deg g.
    pub fn reverse(&self, d: usize) -> Poly {
        let mut v = vec![0u64; d + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[d - i] = c;
        }
        Poly::new(self.field.clone(), v)
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let p = f.p();
        let mut out = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            let m = (i as u64) % p;
            // scalar i acts through the prime subfield
            let mut term = 0u64;
            for _ in 0..m {
                term = f.add(term, c);
            }
            out.push(term);
        }
        Poly::new(self.field.clone(), out)
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(fm, "0");
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let s = match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "z".to_string(),
                (1, _) => format!("{c}z"),
                (_, 1) => format!("z^{i}"),
                _ => format!("{c}z^{i}"),
            };
            parts.push(s);
        }
        write!(fm, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Arc<Field> {
        Field::new(5, 1).unwrap()
    }

    #[test]
    fn degree_and_trim() {
        let f = f5();
        let p = Poly::new(f.clone(), vec![1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Poly::zero(f).degree(), None);
    }

    #[test]
    fn divmod_roundtrip() {
        let f = f5();
        let a = Poly::new(f.clone(), vec![3, 1, 4, 2]);
        let b = Poly::new(f.clone(), vec![1, 2]);
        let (q, r) = a.divmod(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_multiples() {
        let f = f5();
        let g = Poly::new(f.clone(), vec![1, 1]); // z + 1
        let a = g.mul(&Poly::new(f.clone(), vec![2, 3]));
        let b = g.mul(&Poly::new(f.clone(), vec![0, 0, 4]));
        let d = a.gcd(&b);
        assert_eq!(d, g); // already monic
    }

    #[test]
    fn reverse_matches_definition() {
        let f = f5();
        // g = 1 + 2z; z^2 g(1/z) = z^2 + 2z
        let g = Poly::new(f.clone(), vec![1, 2]);
        assert_eq!(g.reverse(2), Poly::new(f, vec![0, 2, 1]));
    }

    #[test]
    fn eval_horner() {
        let f = f5();
        let p = Poly::new(f, vec![1, 2, 3]); // 1 + 2z + 3z^2
        assert_eq!(p.eval(2), (1 + 4 + 12) % 5);
    }
}
