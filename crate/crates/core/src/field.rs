//! Arithmetic in GF(p^k) for small prime powers.
//!
//! Elements are polynomials of degree < k over the integers mod p, reduced
//! modulo the lexicographically smallest monic irreducible polynomial of
//! degree k. Coefficient vectors are stored low degree first.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order accepted by [`FieldCtx::new`].
pub const DEFAULT_ORDER_CAP: u64 = 1024;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `n` as `p^k` with `p` prime, if possible.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|&d| n.is_multiple_of(d))?;
    let mut rest = n;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    /// Monic, `k + 1` coefficients, low degree first.
    modulus: Vec<u32>,
}

impl FieldCtx {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        Self::with_cap(p, k, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(p: u64, k: u32, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("extension degree must be positive".into()));
        }
        if p == 2 && k > 1 {
            return Err(Error::UnsupportedCharTwo(k));
        }
        let order = p
            .checked_pow(k)
            .filter(|&q| q <= cap)
            .ok_or(Error::FieldTooLarge { order: p.saturating_pow(k), cap })?;
        let p = p as u32;
        let modulus = smallest_irreducible(p, k as usize);
        Ok(FieldCtx { p, k, q: order as u32, modulus })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.k as usize {
            return Err(Error::BadElement(format!(
                "expected {} coefficients, got {}",
                self.k,
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::BadElement(format!("coefficient {c} not reduced mod {}", self.p)));
        }
        Ok(FieldElement { coeffs: coeffs.to_vec() })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.k as usize] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_prime(1)
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_prime(&self, c: u32) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = c % self.p;
        e
    }

    /// Element whose base-p digits (low degree first) spell `index`.
    pub fn from_index(&self, index: u32) -> FieldElement {
        assert!(index < self.q, "index {index} out of range for GF({})", self.q);
        let mut rest = index;
        let coeffs = (0..self.k)
            .map(|_| {
                let c = rest % self.p;
                rest /= self.p;
                c
            })
            .collect();
        FieldElement { coeffs }
    }

    pub fn index(&self, x: &FieldElement) -> u32 {
        x.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| self.from_index(i))
    }

    pub fn is_zero(&self, x: &FieldElement) -> bool {
        x.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| (a + b) % p).collect(),
        }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement { coeffs: x.coeffs.iter().map(|&a| (p - a) % p).collect() }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let p = self.p as u64;
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p;
            }
        }
        // x^d = x^{d-k} * (x^k - modulus)
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                let t = c * m as u64 % p;
                prod[d - k + j] = (prod[d - k + j] + p - t) % p;
            }
        }
        FieldElement { coeffs: prod[..k].iter().map(|&c| c as u32).collect() }
    }

    pub fn pow(&self, x: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: &FieldElement) -> Option<FieldElement> {
        if self.is_zero(x) {
            return None;
        }
        Some(self.pow(x, self.q as u64 - 2))
    }

    /// Absolute trace `x + x^p + ... + x^{p^{k-1}}`, an element of the prime field.
    pub fn trace(&self, x: &FieldElement) -> u32 {
        let mut acc = self.zero();
        let mut frob = x.clone();
        for _ in 0..self.k {
            acc = self.add(&acc, &frob);
            frob = self.pow(&frob, self.p as u64);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace left the prime field");
        acc.coeffs[0]
    }
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let dm = m.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    if r.len() <= dm {
        return a.to_vec();
    }
    for d in (dm..r.len()).rev() {
        let c = r[d];
        if c == 0 {
            continue;
        }
        for (j, &mj) in m.iter().enumerate() {
            let t = c * mj as u64 % p;
            r[d - dm + j] = (r[d - dm + j] + p - t) % p;
        }
    }
    r.truncate(dm);
    r.into_iter().map(|c| c as u32).collect()
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `idx`, with the constant term as the most significant digit.
fn monic_from_lex_index(mut idx: u64, deg: usize, p: u32) -> Vec<u32> {
    let mut coeffs = vec![0u32; deg + 1];
    for j in (0..deg).rev() {
        coeffs[j] = (idx % p as u64) as u32;
        idx /= p as u64;
    }
    coeffs[deg] = 1;
    coeffs
}

pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let g = monic_from_lex_index(idx, d, p);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    let count = (p as u64).pow(k as u32);
    (0..count)
        .map(|idx| monic_from_lex_index(idx, k, p))
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial exists for every degree")
}
