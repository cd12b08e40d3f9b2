//! Jacobians of genus-2 curves `y^2 = f(x)`, `f` monic of degree 5, in Mumford form.

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::field::{ExtField, Field, PrimeField};
use crate::arith::poly::{self, Poly};
use crate::{Error, Result};

/// Reduced divisor class `[u, v]`: `u` monic, `deg v < deg u <= 2`, `u | v^2 - f`.
/// The identity is `u = 1, v = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mumford {
    pub u: Vec<Vec<u64>>,
    pub v: Vec<Vec<u64>>,
}

impl Mumford {
    pub fn identity(k: &ExtField) -> Self {
        Mumford { u: vec![k.one()], v: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.u.len() == 1
    }

    pub fn degree(&self) -> usize {
        self.u.len() - 1
    }
}

/// A function on the curve produced by Cantor's algorithm, kept in factored form
/// so it can be evaluated at divisors.
#[derive(Clone, Debug)]
pub enum CantorFactor {
    /// `d(x)` in the numerator.
    Poly(Poly<ExtField>),
    /// `(y - v(x)) / u(x)`.
    Reduction { v: Poly<ExtField>, u: Poly<ExtField> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Genus2Curve {
    pub p: u64,
    /// `f`, low degree first, monic of degree 5.
    pub f: Vec<u64>,
}

impl Genus2Curve {
    pub fn new(p: u64, f: Vec<i64>) -> Result<Self> {
        let base = PrimeField::new(p)?;
        if p == 2 {
            return Err(Error::OutOfScope("characteristic 2".into()));
        }
        let f: Vec<u64> = poly::trim(&base, f.iter().map(|&c| base.from_i64(c)).collect());
        if f.len() != 6 || f[5] != 1 {
            return Err(Error::InvalidData("genus-2 model needs monic degree-5 f".into()));
        }
        let g = poly::gcd(&base, &f, &poly::derivative(&base, &f));
        if g.len() > 1 {
            return Err(Error::SingularCurve);
        }
        Ok(Genus2Curve { p, f })
    }

    fn f_over(&self, k: &ExtField) -> Poly<ExtField> {
        self.f.iter().map(|&c| k.from_base(c)).collect()
    }

    pub fn contains(&self, k: &ExtField, d: &Mumford) -> bool {
        let u = &d.u;
        if u.is_empty() || u.last() != Some(&k.one()) || d.v.len() >= u.len() || u.len() > 3 {
            return false;
        }
        if d.u.iter().chain(&d.v).any(|c| c.len() != k.degree()) {
            return false;
        }
        let f = self.f_over(k);
        let r = poly::sub(k, &poly::mul(k, &d.v, &d.v), &f);
        poly::rem(k, &r, u).is_empty()
    }

    pub fn neg(&self, k: &ExtField, d: &Mumford) -> Mumford {
        Mumford { u: d.u.clone(), v: poly::rem(k, &poly::neg(k, &d.v), &d.u) }
    }

    /// Cantor composition followed by reduction; returns the sum and the functions
    /// `h` with `D1 + D2 = D + div(prod h)`.
    pub fn add_with_functions(&self, k: &ExtField, d1: &Mumford, d2: &Mumford) -> (Mumford, Vec<CantorFactor>) {
        let f = self.f_over(k);
        let (e, e1, e2) = poly::xgcd(k, &d1.u, &d2.u);
        let vsum = poly::add(k, &d1.v, &d2.v);
        let (d, c1, c2) = poly::xgcd(k, &e, &vsum);
        let lc_inv = k.inv(d.last().expect("gcd nonzero")).expect("nonzero");
        let d = poly::scale(k, &d, &lc_inv);
        let s1 = poly::scale(k, &poly::mul(k, &c1, &e1), &lc_inv);
        let s2 = poly::scale(k, &poly::mul(k, &c1, &e2), &lc_inv);
        let s3 = poly::scale(k, &c2, &lc_inv);
        let u = poly::div_exact(k, &poly::mul(k, &d1.u, &d2.u), &poly::mul(k, &d, &d)).expect("d^2 | u1 u2");
        let t1 = poly::mul(k, &poly::mul(k, &s1, &d1.u), &d2.v);
        let t2 = poly::mul(k, &poly::mul(k, &s2, &d2.u), &d1.v);
        let t3 = poly::mul(k, &s3, &poly::add(k, &poly::mul(k, &d1.v, &d2.v), &f));
        let num = poly::add(k, &poly::add(k, &t1, &t2), &t3);
        let v = poly::div_exact(k, &num, &d).expect("d divides");
        let mut v = poly::rem(k, &v, &u);
        let mut u = u;
        let mut fns = Vec::new();
        if d.len() > 1 {
            fns.push(CantorFactor::Poly(d));
        }
        while u.len() > 3 {
            let un = poly::div_exact(k, &poly::sub(k, &f, &poly::mul(k, &v, &v)), &u).expect("u | f - v^2");
            let un = poly::monic(k, &un);
            fns.push(CantorFactor::Reduction { v: v.clone(), u: un.clone() });
            v = poly::rem(k, &poly::neg(k, &v), &un);
            u = un;
        }
        (Mumford { u, v }, fns)
    }

    pub fn add(&self, k: &ExtField, d1: &Mumford, d2: &Mumford) -> Mumford {
        if d1.is_identity() {
            return d2.clone();
        }
        if d2.is_identity() {
            return d1.clone();
        }
        self.add_with_functions(k, d1, d2).0
    }

    /// Random class of degree 2 from a random monic quadratic `u` with a square root of `f`
    /// modulo `u`; roughly uniform on the Jacobian.
    pub fn random_divisor<R: Rng + ?Sized>(&self, k: &ExtField, rng: &mut R) -> Mumford {
        let f = self.f_over(k);
        loop {
            let u = vec![k.random(rng), k.random(rng), k.one()];
            let disc_zero = {
                let (s, t) = (&u[1], &u[0]);
                let disc = k.sub(&k.square(s), &k.mul(&k.from_i64(4), t));
                k.is_zero(&disc)
            };
            if disc_zero {
                continue;
            }
            let q = QuadExt::new(k.clone(), u[0].clone(), u[1].clone());
            let fr = poly::rem(k, &f, &u);
            let a = q.from_poly(&fr);
            let Some(w) = q.sqrt(&a) else { continue };
            let w = if rng.gen::<bool>() { q.neg(&w) } else { w };
            let v = poly::trim(k, vec![w.0, w.1]);
            let d = Mumford { u, v };
            debug_assert!(self.contains(k, &d));
            return d;
        }
    }

    /// Coefficient-wise Frobenius.
    pub fn frobenius(&self, k: &ExtField, d: &Mumford) -> Mumford {
        Mumford {
            u: d.u.iter().map(|c| k.frobenius(c)).collect(),
            v: d.v.iter().map(|c| k.frobenius(c)).collect(),
        }
    }

    /// `(x, y) -> (z x, y)` for a fifth root of unity `z` (needs `f = x^5 + c`).
    pub fn zeta5(&self, k: &ExtField, d: &Mumford) -> Result<Mumford> {
        if self.f[1..5].iter().any(|&c| c != 0) {
            return Err(Error::GeneratorUndefined("zeta5 needs f = x^5 + c".into()));
        }
        let z = fifth_root_of_unity(k)
            .ok_or_else(|| Error::GeneratorUndefined(format!("zeta5 over degree {}", k.degree())))?;
        let zi = k.inv(&z).expect("unit");
        let deg = d.degree();
        // u'(x) = z^deg u(x / z), v'(x) = v(x / z)
        let mut pw = k.one();
        let mut zpow = Vec::with_capacity(3);
        for _ in 0..3 {
            zpow.push(pw.clone());
            pw = k.mul(&pw, &zi);
        }
        let zdeg = k.pow_u64(&z, deg as u64);
        let u = d.u.iter().enumerate().map(|(j, c)| k.mul(&zdeg, &k.mul(c, &zpow[j]))).collect();
        let v = poly::trim(k, d.v.iter().enumerate().map(|(j, c)| k.mul(c, &zpow[j])).collect());
        Ok(Mumford { u, v })
    }

    /// Points on the affine model over `F_{p^k}` plus the one point at infinity,
    /// by enumeration of `x`.
    pub fn count_curve_points(&self, k: &ExtField) -> Result<u64> {
        let n: u64 = k
            .order()
            .try_into()
            .ok()
            .filter(|&n: &u64| n <= 1 << 24)
            .ok_or_else(|| Error::SizeCap("curve point enumeration".into()))?;
        let f = self.f_over(k);
        let mut total = 1u64;
        for i in 0..n {
            let x = k.nth_element(i);
            let y2 = poly::eval(k, &f, &x);
            total += if k.is_zero(&y2) {
                1
            } else if k.is_square(&y2) {
                2
            } else {
                0
            };
        }
        Ok(total)
    }
}

/// The smallest root of `x^4 + x^3 + x^2 + x + 1` in the field's canonical order.
pub fn fifth_root_of_unity(k: &ExtField) -> Option<Vec<u64>> {
    let f = vec![k.one(); 5];
    let mut rng = crate::rng::seeded(0);
    poly::roots(k, &f, &mut rng).into_iter().next()
}

/// `F[X]/(X^2 + s X + t)` for irreducible or split quadratics; square roots are only
/// requested for field cases and never for zero divisors in the split case.
#[derive(Clone, Debug)]
pub struct QuadExt {
    k: ExtField,
    t: Vec<u64>,
    s: Vec<u64>,
}

impl QuadExt {
    pub fn new(k: ExtField, t: Vec<u64>, s: Vec<u64>) -> Self {
        QuadExt { k, t, s }
    }

    fn from_poly(&self, a: &[Vec<u64>]) -> (Vec<u64>, Vec<u64>) {
        let z = self.k.zero();
        (a.first().cloned().unwrap_or(z.clone()), a.get(1).cloned().unwrap_or(z))
    }

    fn is_field(&self) -> bool {
        let k = &self.k;
        let disc = k.sub(&k.square(&self.s), &k.mul(&k.from_i64(4), &self.t));
        !k.is_square(&disc)
    }
}

impl Field for QuadExt {
    type Elem = (Vec<u64>, Vec<u64>);

    fn characteristic(&self) -> u64 {
        self.k.characteristic()
    }
    fn order(&self) -> BigUint {
        let q = self.k.order();
        &q * &q
    }
    fn zero(&self) -> Self::Elem {
        (self.k.zero(), self.k.zero())
    }
    fn one(&self) -> Self::Elem {
        (self.k.one(), self.k.zero())
    }
    fn from_i64(&self, v: i64) -> Self::Elem {
        (self.k.from_i64(v), self.k.zero())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.k.is_zero(&a.0) && self.k.is_zero(&a.1)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.k.add(&a.0, &b.0), self.k.add(&a.1, &b.1))
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.k.sub(&a.0, &b.0), self.k.sub(&a.1, &b.1))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        (self.k.neg(&a.0), self.k.neg(&a.1))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.k;
        // X^2 = -s X - t
        let c0 = k.mul(&a.0, &b.0);
        let c1 = k.add(&k.mul(&a.0, &b.1), &k.mul(&a.1, &b.0));
        let c2 = k.mul(&a.1, &b.1);
        (k.sub(&c0, &k.mul(&c2, &self.t)), k.sub(&c1, &k.mul(&c2, &self.s)))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let k = &self.k;
        // conjugate of a0 + a1 X is (a0 - s a1) - a1 X; norm a0^2 - s a0 a1 + t a1^2
        let n = k.add(&k.sub(&k.square(&a.0), &k.mul(&self.s, &k.mul(&a.0, &a.1))), &k.mul(&self.t, &k.square(&a.1)));
        let ni = k.inv(&n)?;
        let c0 = k.sub(&a.0, &k.mul(&self.s, &a.1));
        Some((k.mul(&c0, &ni), k.neg(&k.mul(&a.1, &ni))))
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        (self.k.random(rng), self.k.random(rng))
    }
    fn nth_element(&self, n: u64) -> Self::Elem {
        (self.k.nth_element(n), self.k.zero())
    }
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        // p-th root of x is x^(|F|^2 / p)
        let e = self.order() / BigUint::from(self.characteristic());
        self.pow(a, &e)
    }
    fn is_square(&self, a: &Self::Elem) -> bool {
        if self.is_field() {
            let e = (self.order() - 1u32) >> 1;
            self.is_zero(a) || self.is_one(&self.pow(a, &e))
        } else {
            self.split_sqrt(a).is_some()
        }
    }
    fn nonresidue(&self) -> Self::Elem {
        let mut c = 0;
        loop {
            let cand = (self.k.nth_element(c), self.k.one());
            if !self.is_square(&cand) {
                return cand;
            }
            c += 1;
        }
    }
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if !self.is_field() {
            return self.split_sqrt(a);
        }
        if self.is_zero(a) {
            return Some(self.zero());
        }
        let e = (self.order() - 1u32) >> 1;
        if !self.is_one(&self.pow(a, &e)) {
            return None;
        }
        tonelli(self, a)
    }
}

impl QuadExt {
    /// Square root through the CRT split `F[X]/(X - r1) x F[X]/(X - r2)`.
    fn split_sqrt(&self, a: &(Vec<u64>, Vec<u64>)) -> Option<(Vec<u64>, Vec<u64>)> {
        let k = &self.k;
        let mut rng = crate::rng::seeded(0);
        let u = vec![self.t.clone(), self.s.clone(), k.one()];
        let rs = poly::roots(k, &u, &mut rng);
        let (r1, r2) = (rs.first()?.clone(), rs.get(1)?.clone());
        let e1 = k.add(&a.0, &k.mul(&a.1, &r1));
        let e2 = k.add(&a.0, &k.mul(&a.1, &r2));
        let (w1, w2) = (k.sqrt(&e1)?, k.sqrt(&e2)?);
        // w(X) = w1 + (w2 - w1) (X - r1) / (r2 - r1)
        let slope = k.div(&k.sub(&w2, &w1), &k.sub(&r2, &r1))?;
        Some((k.sub(&w1, &k.mul(&slope, &r1)), slope))
    }
}

fn tonelli<F: Field>(f: &F, a: &F::Elem) -> Option<F::Elem> {
    let q1 = f.order() - 1u32;
    let s = q1.trailing_zeros().unwrap_or(0);
    let t = &q1 >> s;
    let z = f.nonresidue();
    let mut m = s;
    let mut c = f.pow(&z, &t);
    let mut x = f.pow(a, &((&t + 1u32) >> 1));
    let mut b = f.pow(a, &t);
    while !f.is_one(&b) {
        let mut i = 0;
        let mut b2 = b.clone();
        while !f.is_one(&b2) {
            b2 = f.square(&b2);
            i += 1;
            if i == m {
                return None;
            }
        }
        let mut d = c.clone();
        for _ in 0..(m - i - 1) {
            d = f.square(&d);
        }
        x = f.mul(&x, &d);
        c = f.square(&d);
        b = f.mul(&b, &c);
        m = i;
    }
    Some(x)
}
