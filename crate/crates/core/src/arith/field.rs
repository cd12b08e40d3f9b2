use std::fmt::Debug;
use std::hash::Hash;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use super::poly;
use super::primes::is_prime;
use crate::{Error, Result};

/// Exact arithmetic in a finite field. Elements are canonical, so `==` is field equality.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    /// Number of elements.
    fn order(&self) -> BigUint;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// Deterministic enumeration of the field, `n < order`.
    fn nth_element(&self, n: u64) -> Self::Elem;
    /// Inverse of the absolute Frobenius `x -> x^p`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        self.pow(a, &BigUint::from(e))
    }

    fn is_square(&self, a: &Self::Elem) -> bool {
        if self.is_zero(a) || self.characteristic() == 2 {
            return true;
        }
        let e = (self.order() - 1u32) >> 1;
        self.is_one(&self.pow(a, &e))
    }

    /// Smallest non-square in the `nth_element` enumeration.
    fn nonresidue(&self) -> Self::Elem {
        (1..)
            .map(|n| self.nth_element(n))
            .find(|c| !self.is_square(c))
            .expect("odd-order field has non-squares")
    }

    /// Tonelli–Shanks square root, or `None` for non-squares.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if !self.is_square(a) {
            return None;
        }
        let q1 = self.order() - 1u32;
        let s = q1.trailing_zeros().unwrap_or(0);
        let t = &q1 >> s;
        let z = self.nonresidue();
        let mut m = s;
        let mut c = self.pow(&z, &t);
        let mut x = self.pow(a, &((&t + 1u32) >> 1));
        let mut b = self.pow(a, &t);
        while !self.is_one(&b) {
            let mut i = 0;
            let mut b2 = b.clone();
            while !self.is_one(&b2) {
                b2 = self.square(&b2);
                i += 1;
            }
            let mut d = c.clone();
            for _ in 0..(m - i - 1) {
                d = self.square(&d);
            }
            x = self.mul(&x, &d);
            c = self.square(&d);
            b = self.mul(&b, &c);
            m = i;
        }
        Some(x)
    }
}

/// The prime field `F_p`, `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    /// Representative in `(-p/2, p/2]`.
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(s0.rem_euclid(self.p as i64) as u64)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn nth_element(&self, n: u64) -> u64 {
        n % self.p
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
    fn pow_u64(&self, a: &u64, mut e: u64) -> u64 {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }
}

/// `F_{p^k} = F_p[z]/(m(z))` with a monic irreducible `m` of degree `k`.
///
/// Elements are coefficient vectors of length exactly `k`, low degree first.
#[derive(Debug)]
pub struct ExtField {
    base: PrimeField,
    modulus: Vec<u64>,
    k: usize,
    frobenius: OnceLock<Vec<Vec<u64>>>,
    nonresidue: OnceLock<Vec<u64>>,
}

impl Clone for ExtField {
    fn clone(&self) -> Self {
        ExtField {
            base: self.base,
            modulus: self.modulus.clone(),
            k: self.k,
            frobenius: self.frobenius.clone(),
            nonresidue: self.nonresidue.clone(),
        }
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.modulus == other.modulus
    }
}
impl Eq for ExtField {}

impl ExtField {
    /// The canonical degree-`k` extension: the first monic irreducible polynomial in
    /// lexicographic order of its coefficient digits (constant term fastest).
    pub fn new(p: u64, k: usize) -> Result<Self> {
        let base = PrimeField::new(p)?;
        if k == 0 || k > 64 {
            return Err(Error::SizeCap(format!("extension degree {k}")));
        }
        if k == 1 {
            return Self::with_modulus(p, vec![0, 1]);
        }
        let mut counter: u128 = 0;
        loop {
            let mut m = vec![0u64; k + 1];
            m[k] = 1;
            let mut c = counter;
            for coeff in m.iter_mut().take(k) {
                *coeff = (c % p as u128) as u64;
                c /= p as u128;
            }
            counter += 1;
            if m[0] == 0 {
                continue;
            }
            if poly::is_irreducible(&base, &m) {
                return Ok(Self::from_parts(base, m));
            }
        }
    }

    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let m = poly::trim(&base, modulus);
        if m.len() < 2 || m[m.len() - 1] != 1 || !poly::is_irreducible(&base, &m) {
            return Err(Error::NotIrreducible);
        }
        Ok(Self::from_parts(base, m))
    }

    fn from_parts(base: PrimeField, modulus: Vec<u64>) -> Self {
        let k = modulus.len() - 1;
        ExtField {
            base,
            modulus,
            k,
            frobenius: OnceLock::new(),
            nonresidue: OnceLock::new(),
        }
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn from_base(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = c % self.base.p();
        v
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Vec<u64>> {
        if coeffs.len() != self.k || coeffs.iter().any(|&c| c >= self.p()) {
            return Err(Error::InvalidData("field element out of range".into()));
        }
        Ok(coeffs.to_vec())
    }

    /// Whether the element lies in the prime field.
    pub fn in_base(&self, a: &[u64]) -> bool {
        a.iter().skip(1).all(|&c| c == 0)
    }

    fn frob_matrix(&self) -> &Vec<Vec<u64>> {
        self.frobenius.get_or_init(|| {
            // column i = z^{i p}
            let zp = self.pow_u64(&self.generator(), self.p());
            let mut cols = Vec::with_capacity(self.k);
            let mut cur = self.one();
            for _ in 0..self.k {
                cols.push(cur.clone());
                cur = self.mul(&cur, &zp);
            }
            cols
        })
    }

    /// The class of `z`.
    pub fn generator(&self) -> Vec<u64> {
        let mut v = vec![0; self.k];
        if self.k == 1 {
            v[0] = (p_neg(self.modulus[0], self.p())) % self.p();
        } else {
            v[1] = 1;
        }
        v
    }

    /// `a^p`, via the precomputed linear map.
    pub fn frobenius(&self, a: &[u64]) -> Vec<u64> {
        if self.k == 1 {
            return a.to_vec();
        }
        let cols = self.frob_matrix();
        let p = self.p();
        let mut out = vec![0u64; self.k];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (o, &c) in out.iter_mut().zip(cols[i].iter()) {
                *o = (*o + ai * c) % p;
            }
        }
        out
    }

    /// `a^(p^n)`.
    pub fn frobenius_pow(&self, a: &[u64], n: usize) -> Vec<u64> {
        let mut x = a.to_vec();
        for _ in 0..(n % self.k) {
            x = self.frobenius(&x);
        }
        x
    }

    fn reduce(&self, mut r: Vec<u64>) -> Vec<u64> {
        let p = self.p();
        let k = self.k;
        for i in (k..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            r[i] = 0;
            for j in 0..k {
                let t = c * self.modulus[j] % p;
                r[i - k + j] = (r[i - k + j] + p - t) % p;
            }
        }
        r.truncate(k);
        r.resize(k, 0);
        r
    }
}

fn p_neg(a: u64, p: u64) -> u64 {
    (p - a % p) % p
}

impl Field for ExtField {
    type Elem = Vec<u64>;

    fn characteristic(&self) -> u64 {
        self.p()
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.p()).pow(self.k as u32)
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.k]
    }
    fn one(&self) -> Vec<u64> {
        self.from_base(1)
    }
    fn from_i64(&self, v: i64) -> Vec<u64> {
        self.from_base(self.base.from_i64(v))
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.p();
        a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.p();
        a.iter().zip(b).map(|(x, y)| (x + p - y) % p).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        let p = self.p();
        a.iter().map(|x| (p - x) % p).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.p();
        if self.k == 1 {
            return vec![a[0] * b[0] % p];
        }
        let mut r = vec![0u64; 2 * self.k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % p;
            }
        }
        self.reduce(r)
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        let f = poly::trim(&self.base, a.clone());
        let (g, s, _) = poly::xgcd(&self.base, &f, &self.modulus);
        // g is a nonzero constant since the modulus is irreducible
        let gi = self.base.inv(&g[0])?;
        let s = poly::scale(&self.base, &s, &gi);
        let mut out = self.reduce(s);
        out.resize(self.k, 0);
        Some(out)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.k).map(|_| rng.gen_range(0..self.p())).collect()
    }
    fn nth_element(&self, mut n: u64) -> Vec<u64> {
        let p = self.p();
        let mut v = vec![0; self.k];
        for c in v.iter_mut() {
            *c = n % p;
            n /= p;
        }
        v
    }
    fn pth_root(&self, a: &Vec<u64>) -> Vec<u64> {
        self.frobenius_pow(a, self.k - 1)
    }
    fn nonresidue(&self) -> Vec<u64> {
        self.nonresidue
            .get_or_init(|| {
                (1..)
                    .map(|n| self.nth_element(n))
                    .find(|c| !self.is_square(c))
                    .expect("odd-order field has non-squares")
            })
            .clone()
    }
}

/// Canonical primitive `n`-th root of unity: `c^((q-1)/n)` for the first `c` in the
/// `nth_element` enumeration where that power has exact order `n` (n prime).
pub fn canonical_root_of_unity<F: Field>(field: &F, n: u64) -> Option<F::Elem> {
    let q1 = field.order() - 1u32;
    let nb = BigUint::from(n);
    if !(&q1 % &nb).is_zero() {
        return None;
    }
    let e = &q1 / &nb;
    let bound = field.order().min(BigUint::from(1u64 << 20));
    let bound: u64 = bound.try_into().unwrap_or(u64::MAX);
    (1..bound).map(|i| field.nth_element(i)).find_map(|c| {
        let w = field.pow(&c, &e);
        (!field.is_one(&w)).then_some(w)
    })
}

/// Multiplicative order of `a` given the group exponent `q - 1` and its factorization.
pub fn mult_order<F: Field>(field: &F, a: &F::Elem, factors: &[(BigUint, u32)]) -> BigUint {
    let mut order = field.order() - 1u32;
    for (r, _) in factors {
        while (&order % r).is_zero() {
            let cand = &order / r;
            if field.is_one(&field.pow(a, &cand)) {
                order = cand;
            } else {
                break;
            }
        }
    }
    if order.is_zero() {
        BigUint::one()
    } else {
        order
    }
}
