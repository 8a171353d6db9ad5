//! Exact arithmetic in GF(p) and GF(p^e).
//!
//! Elements are stored as canonical `u64` codes: a residue in `0..p` for the
//! prime field, and the base-p packing `sum c_i p^i` of the coefficient list
//! `c_0..c_{e-1}` for an extension. The modulus of GF(p^e) is the first
//! irreducible monic polynomial in a deterministic lexicographic search, so
//! two runs always agree on the representation.

use crate::error::{Error, Result};
use rand_core::RngCore;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Field {
    p: u64,
    e: u32,
    /// Coefficients c_0..c_e of the monic modulus (c_e = 1); empty for e = 1.
    modulus: Vec<u64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Field { p, e: 1, modulus: Vec::new() })
    }

    /// GF(p^e) with the first irreducible monic modulus in lexicographic
    /// order (constant coefficient varies fastest).
    pub fn extension(p: u64, e: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        if e == 1 {
            return Field::prime(p);
        }
        let count = p.checked_pow(e).ok_or_else(|| {
            Error::InvalidField(format!("field order p^e = {p}^{e} overflows"))
        })?;
        for n in 0..count {
            let mut coeffs = decode_digits(n, p, e as usize);
            coeffs.push(1); // monic
            if poly_is_irreducible(&coeffs, p) {
                return Ok(Field { p, e, modulus: coeffs });
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over GF(p)")
    }

    /// GF(p^e) with an explicitly given monic modulus `c_0..c_e`.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic of degree >= 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficients must be reduced mod p".into()));
        }
        let e = (modulus.len() - 1) as u32;
        if e == 1 {
            return Field::prime(p);
        }
        if !poly_is_irreducible(&modulus, p) {
            return Err(Error::InvalidField("modulus is reducible over GF(p)".into()));
        }
        Ok(Field { p, e, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.e)
    }

    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    pub fn is_element(&self, x: u64) -> bool {
        x < self.order()
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let p = self.p;
        let (mut out, mut scale, mut a, mut b) = (0u64, 1u64, a, b);
        for _ in 0..self.e {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.e == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let p = self.p;
        let (mut out, mut scale, mut a) = (0u64, 1u64, a);
        for _ in 0..self.e {
            out += ((p - a % p) % p) * scale;
            a /= p;
            scale *= p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return (a * b) % self.p;
        }
        let pa = decode_digits(a, self.p, self.e as usize);
        let pb = decode_digits(b, self.p, self.e as usize);
        let prod = poly_rem(&poly_mul(&pa, &pb, self.p), &self.modulus, self.p);
        encode_digits(&prod, self.p)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if self.e == 1 {
            return Some(self.pow(a, self.p - 2));
        }
        let pa = decode_digits(a, self.p, self.e as usize);
        let inv = poly_modular_inverse(&pa, &self.modulus, self.p)?;
        Some(encode_digits(&inv, self.p))
    }

    pub fn pow(&self, a: u64, mut n: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Embedding of a prime-field residue as a constant polynomial.
    pub fn embed(&self, residue: u64) -> u64 {
        residue % self.p
    }

    pub fn random_element(&self, rng: &mut impl RngCore) -> u64 {
        rng.next_u64() % self.order()
    }

    /// All field elements in code order. Intended for small fields only.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order()
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.e == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.e)
        }
    }
}

fn decode_digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for d in out.iter_mut() {
        *d = n % p;
        n /= p;
    }
    out
}

fn encode_digits(coeffs: &[u64], p: u64) -> u64 {
    let mut out = 0u64;
    for &c in coeffs.iter().rev() {
        out = out * p + c;
    }
    out
}

// --- dense polynomials over GF(p), little-endian coefficient vectors ---

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
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
    poly_trim(&mut out);
    out
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo `m`; `m` need not be monic.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while r.len() > dm {
        let coef = (r[r.len() - 1] * lead_inv) % p;
        let shift = r.len() - 1 - dm;
        for (i, &mc) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - (coef * mc) % p) % p;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    // normalize monic
    if let Some(&lead) = x.last() {
        let li = inv_mod_p(lead, p);
        for c in x.iter_mut() {
            *c = (*c * li) % p;
        }
    }
    x
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // p is prime and a != 0 mod p
    let mut acc = 1u64;
    let mut base = a % p;
    let mut n = p - 2;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        n >>= 1;
    }
    acc
}

fn poly_pow_mod(a: &[u64], mut n: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = poly_rem(a, m, p);
    while n > 0 {
        if n & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, p), m, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), m, p);
        n >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the monic irreducible `m`, via extended Euclid.
fn poly_modular_inverse(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = m.to_vec();
    let mut r1 = poly_rem(a, m, p);
    if r1.is_empty() {
        return None;
    }
    let mut s0: Vec<u64> = vec![];
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // r0 = q r1 + r2
        let (q, r2) = poly_divmod(&r0, &r1, p);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 = gcd (a constant, since m is irreducible and a != 0)
    debug_assert_eq!(r0.len(), 1);
    let c = inv_mod_p(r0[0], p);
    let mut out: Vec<u64> = s0.iter().map(|&x| x * c % p).collect();
    poly_trim(&mut out);
    Some(poly_rem(&out, m, p))
}

fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    while r.len() > db {
        let coef = (r[r.len() - 1] * lead_inv) % p;
        let shift = r.len() - 1 - db;
        q[shift] = coef;
        for (i, &bc) in b.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - (coef * bc) % p) % p;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    poly_trim(&mut q);
    (q, r)
}

/// Degree-e monic f is irreducible over GF(p) iff it shares no factor with
/// x^(p^k) - x for any k <= e/2 (a reducible f has an irreducible factor of
/// degree at most e/2, and factors of degree d divide x^(p^d) - x).
fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let e = f.len() - 1;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    if f[0] == 0 {
        return false; // divisible by x
    }
    let x = vec![0u64, 1];
    let mut t = x.clone(); // x^(p^k) mod f, starting at k = 0
    for _ in 1..=(e / 2) {
        t = poly_pow_mod(&t, p, f, p);
        let g = poly_gcd(f, &poly_sub(&t, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.neg(2), 3);
        assert_eq!(f.inv(3), Some(2));
        assert_eq!(f.inv(0), None);
        assert!(Field::prime(6).is_err());
        assert!(Field::prime(1).is_err());
    }

    #[test]
    fn gf9_modulus_is_x2_plus_1() {
        // lexicographic search over GF(3): x^2, x^2+1 -> x^2+1 is irreducible
        let f = Field::extension(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.order(), 9);
        // x * x = -1 = 2
        let x = 3u64; // code of the polynomial "x"
        assert_eq!(f.mul(x, x), 2);
    }

    #[test]
    fn extension_inverses() {
        for (p, e) in [(2u64, 2u32), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3)] {
            let f = Field::extension(p, e).unwrap();
            for a in 1..f.order().min(200) {
                let b = f.inv(a).unwrap();
                assert_eq!(f.mul(a, b), 1, "inverse failed in {f} for {a}");
            }
        }
    }

    #[test]
    fn with_modulus_rejects_reducible() {
        // x^2 + 2x + 1 = (x+1)^2 over GF(3)
        assert!(Field::with_modulus(3, vec![1, 2, 1]).is_err());
        assert!(Field::with_modulus(3, vec![1, 0, 1]).is_ok());
    }

    #[test]
    fn frobenius_fixes_prime_subfield() {
        let f = Field::extension(3, 3).unwrap();
        for a in 0..3u64 {
            assert_eq!(f.pow(a, 3), a);
        }
        // and moves some element outside it
        let moved = (0..f.order()).any(|a| f.pow(a, 3) != a);
        assert!(moved);
    }
}
