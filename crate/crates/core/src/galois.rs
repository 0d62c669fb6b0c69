//! Exact arithmetic in prime and extension fields F_{p^N}.
//!
//! Elements are carried as their canonical integer encoding
//! `value = sum coeffs[i] * p^i` in `[0, q-1]`, where `coeffs` is the
//! little-endian polynomial-in-alpha representation over F_p. The [`Field`]
//! owns the modulus and precomputed exp/log tables for a verified primitive
//! element; all per-element operations are `u64 -> u64`.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Field sizes are capped so exhaustive tables and searches stay cheap.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// A finite field F_{p^N} with a designated primitive element.
#[derive(Debug)]
pub struct Field {
    p: u64,
    n: usize,
    q: u64,
    /// Monic irreducible modulus, ascending coefficients, length n+1.
    modulus: Vec<u64>,
    alpha: u64,
    exp: Vec<u64>,
    log: Vec<u64>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}
impl Eq for Field {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

// -- dense polynomial helpers over F_p (coefficients ascending) --

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(&mut out);
    out
}

/// Remainder of `a` modulo monic `m`.
fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (j, &c) in m.iter().enumerate() {
                let idx = shift + j;
                r[idx] = (r[idx] + p - lead * c % p) % p;
            }
        }
        fp_trim(&mut r);
        if r.len() <= dm && r.len() + 1 > 0 {
            break;
        }
    }
    // loop above may leave high terms when lead == 0; normalize fully
    loop {
        fp_trim(&mut r);
        if r.len() <= dm {
            break;
        }
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (j, &c) in m.iter().enumerate() {
            let idx = shift + j;
            r[idx] = (r[idx] + p - lead * c % p) % p;
        }
    }
    r
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        // make b monic for fp_rem
        let lead = *b.last().unwrap();
        let inv = mod_inv(lead, p);
        let bm: Vec<u64> = b.iter().map(|&c| c * inv % p).collect();
        let r = fp_rem(&a, &bm, p);
        a = b;
        b = r;
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and small.
    mod_pow(a, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// x^(p^e) mod f, by repeated Frobenius.
fn fp_pow_frobenius(base: &[u64], p: u64, e: usize, f: &[u64]) -> Vec<u64> {
    let mut x = base.to_vec();
    for _ in 0..e {
        // x^p mod f via square-and-multiply on exponent p
        let mut acc = vec![1u64];
        let mut sq = x.clone();
        let mut exp = p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = fp_rem(&fp_mul(&acc, &sq, p), f, p);
            }
            sq = fp_rem(&fp_mul(&sq, &sq, p), f, p);
            exp >>= 1;
        }
        x = acc;
    }
    x
}

fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    // x^(p^n) == x mod f
    let xq = fp_pow_frobenius(&x, p, n, f);
    let mut diff: Vec<u64> = vec![0; xq.len().max(2)];
    for (i, &c) in xq.iter().enumerate() {
        diff[i] = c;
    }
    diff[1] = (diff[1] + p - 1) % p;
    fp_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    // gcd(x^(p^(n/r)) - x, f) == 1 for every prime r | n
    for r in prime_factors(n as u64) {
        let e = n / r as usize;
        let xe = fp_pow_frobenius(&x, p, e, f);
        let mut diff: Vec<u64> = vec![0; xe.len().max(2)];
        for (i, &c) in xe.iter().enumerate() {
            diff[i] = c;
        }
        diff[1] = (diff[1] + p - 1) % p;
        fp_trim(&mut diff);
        let g = fp_gcd(&diff, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl Field {
    /// Build F_{p^N}, selecting the lowest canonical-encoding irreducible
    /// monic modulus when none is given.
    pub fn new(p: u64, n: usize) -> Result<Arc<Field>> {
        Self::create(p, n, None)
    }

    pub fn with_modulus(p: u64, n: usize, modulus: Vec<u64>) -> Result<Arc<Field>> {
        Self::create(p, n, Some(modulus))
    }

    pub fn create(p: u64, n: usize, modulus: Option<Vec<u64>>) -> Result<Arc<Field>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::BadDegree);
        }
        let mut q: u64 = 1;
        for _ in 0..n {
            q = q.checked_mul(p).ok_or(Error::FieldTooLarge(u64::MAX))?;
            if q > MAX_FIELD_SIZE {
                return Err(Error::FieldTooLarge(q));
            }
        }
        let modulus = match modulus {
            Some(m) => {
                let mut m = m;
                for c in m.iter_mut() {
                    *c %= p;
                }
                if m.len() != n + 1 || *m.last().unwrap() != 1 {
                    return Err(Error::BadModulus);
                }
                if n > 1 && !fp_is_irreducible(&m, p) {
                    return Err(Error::BadModulus);
                }
                if n == 1 && !fp_is_irreducible(&m, p) {
                    return Err(Error::BadModulus);
                }
                m
            }
            None => {
                if n == 1 {
                    vec![0, 1]
                } else {
                    Self::lowest_irreducible(p, n)?
                }
            }
        };
        let mut field = Field {
            p,
            n,
            q,
            modulus,
            alpha: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.alpha = field.find_primitive()?;
        field.build_tables();
        Ok(Arc::new(field))
    }

    fn lowest_irreducible(p: u64, n: usize) -> Result<Vec<u64>> {
        let mut low = 0u64;
        let bound = {
            let mut b = 1u64;
            for _ in 0..n {
                b *= p;
            }
            b
        };
        while low < bound {
            let mut f = Vec::with_capacity(n + 1);
            let mut v = low;
            for _ in 0..n {
                f.push(v % p);
                v /= p;
            }
            f.push(1);
            if fp_is_irreducible(&f, p) {
                return Ok(f);
            }
            low += 1;
        }
        Err(Error::BadModulus)
    }

    fn find_primitive(&self) -> Result<u64> {
        if self.q == 2 {
            return Ok(1);
        }
        let factors = prime_factors(self.q - 1);
        for cand in 1..self.q {
            if cand == 0 {
                continue;
            }
            let full = self.pow_raw(cand, self.q - 1);
            if full != 1 {
                continue;
            }
            let mut primitive = true;
            for &r in &factors {
                if self.pow_raw(cand, (self.q - 1) / r) == 1 {
                    primitive = false;
                    break;
                }
            }
            if primitive {
                return Ok(cand);
            }
        }
        Err(Error::BadModulus)
    }

    fn build_tables(&mut self) {
        let order = (self.q - 1) as usize;
        let mut exp = vec![0u64; order.max(1)];
        let mut log = vec![0u64; self.q as usize];
        let mut cur = 1u64;
        for (i, e) in exp.iter_mut().enumerate() {
            *e = cur;
            log[cur as usize] = i as u64;
            cur = self.mul_raw(cur, self.alpha);
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn extension_degree(&self) -> usize {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    /// The designated primitive element (generator of the unit group).
    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn decode(&self, value: u64) -> Vec<u64> {
        let mut coeffs = Vec::with_capacity(self.n);
        let mut v = value;
        for _ in 0..self.n {
            coeffs.push(v % self.p);
            v /= self.p;
        }
        coeffs
    }

    pub fn encode(&self, coeffs: &[u64]) -> u64 {
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            v = v * self.p + c % self.p;
        }
        v
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.n == 1 {
            return (a + b) % self.p;
        }
        let ca = self.decode(a);
        let cb = self.decode(b);
        let sum: Vec<u64> = ca.iter().zip(&cb).map(|(&x, &y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.n == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let ca = self.decode(a);
        let neg: Vec<u64> = ca.iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&neg)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.n == 1 {
            return a * b % self.p;
        }
        let ca = self.decode(a);
        let cb = self.decode(b);
        let prod = fp_rem(&fp_mul(&ca, &cb, self.p), &self.modulus, self.p);
        self.encode(&prod)
    }

    fn pow_raw(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, b);
            }
            b = self.mul_raw(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.exp.is_empty() {
            return self.mul_raw(a, b);
        }
        let order = self.q - 1;
        if order == 1 {
            return 1;
        }
        let idx = (self.log[a as usize] + self.log[b as usize]) % order;
        self.exp[idx as usize]
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        if order == 1 {
            return Ok(1);
        }
        let idx = (order - self.log[a as usize]) % order;
        Ok(self.exp[idx as usize])
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any signed exponent; negative exponents require `a != 0`.
    pub fn pow(&self, a: u64, e: i64) -> Result<u64> {
        if a == 0 {
            return if e > 0 {
                Ok(0)
            } else if e == 0 {
                Ok(1)
            } else {
                Err(Error::DivisionByZero)
            };
        }
        let order = (self.q - 1) as i64;
        if order == 0 {
            return Ok(1);
        }
        let r = e.rem_euclid(order) as u64;
        Ok(self.pow_raw(a, r))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut ord = 1u64;
        let mut cur = a;
        while cur != 1 {
            cur = self.mul(cur, a);
            ord += 1;
        }
        Ok(ord)
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }
}

/// An element bundled with its field; checked arithmetic for the public API.
#[derive(Debug, Clone)]
pub struct FieldElement {
    pub field: Arc<Field>,
    pub value: u64,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}
impl Eq for FieldElement {}

impl FieldElement {
    pub fn new(field: Arc<Field>, value: u64) -> Self {
        FieldElement {
            value: value % field.q(),
            field,
        }
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        Ok(())
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.field.decode(self.value)
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(FieldElement::new(self.field.clone(), self.field.add(self.value, other.value)))
    }
    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(FieldElement::new(self.field.clone(), self.field.sub(self.value, other.value)))
    }
    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(FieldElement::new(self.field.clone(), self.field.mul(self.value, other.value)))
    }
    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(FieldElement::new(self.field.clone(), self.field.div(self.value, other.value)?))
    }
    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement::new(self.field.clone(), self.field.inv(self.value)?))
    }
    pub fn neg(&self) -> FieldElement {
        FieldElement::new(self.field.clone(), self.field.neg(self.value))
    }
    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        Ok(FieldElement::new(self.field.clone(), self.field.pow(self.value, e)?))
    }
}

/// The designated primitive element of a field.
pub fn primitive_element(field: &Arc<Field>) -> FieldElement {
    FieldElement::new(field.clone(), field.alpha())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_basics() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.alpha(), 1);
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
    }

    #[test]
    fn f4_from_given_modulus() {
        // x^2 + x + 1
        let f = Field::with_modulus(2, 2, vec![1, 1, 1]).unwrap();
        assert_eq!(f.alpha(), 2);
        // alpha * alpha = alpha + 1 -> encoding 3
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn f5_primitive_is_two() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.alpha(), 2);
        assert_eq!(f.element_order(2).unwrap(), 4);
        assert_eq!(f.inv(4).unwrap(), 4);
    }

    #[test]
    fn default_modulus_is_lowest_irreducible() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let f8 = Field::new(2, 3).unwrap();
        // x^3 + x + 1 encodes lower than x^3 + x^2 + 1
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Field::new(4, 1).is_err());
        assert!(Field::new(2, 0).is_err());
        assert!(Field::with_modulus(2, 2, vec![0, 0, 1]).is_err()); // x^2 reducible
        assert!(Field::new(2, 21).is_err()); // over the size cap
    }

    #[test]
    fn powers_of_alpha_enumerate_units() {
        for (p, n) in [(2, 3), (3, 2), (7, 1)] {
            let f = Field::new(p, n).unwrap();
            let mut seen = std::collections::HashSet::new();
            let mut cur = 1u64;
            for _ in 0..(f.q() - 1) {
                assert!(seen.insert(cur));
                cur = f.mul(cur, f.alpha());
            }
            assert_eq!(cur, 1);
            assert_eq!(seen.len() as u64, f.q() - 1);
        }
    }

    #[test]
    fn mixed_field_rejected() {
        let f4 = Field::new(2, 2).unwrap();
        let f8 = Field::new(2, 3).unwrap();
        let a = FieldElement::new(f4, 2);
        let b = FieldElement::new(f8, 2);
        assert!(matches!(a.add(&b), Err(Error::MixedFields)));
    }

    #[test]
    fn negative_pow() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.pow(2, -1).unwrap(), 3); // 2*3 = 6 = 1
        assert_eq!(f.pow(2, -2).unwrap(), f.inv(4).unwrap());
        assert!(f.pow(0, -1).is_err());
    }
}
