//! Dense univariate polynomials over a [`Field`], coefficients low degree first.
//! The zero polynomial is the empty vector; otherwise the leading coefficient is nonzero.

use num_bigint::BigUint;
use rand::Rng;

use super::field::Field;

pub type Poly<F> = Vec<<F as Field>::Elem>;

pub fn trim<F: Field>(f: &F, mut a: Poly<F>) -> Poly<F> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn degree<F: Field>(a: &[F::Elem]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn constant<F: Field>(f: &F, c: F::Elem) -> Poly<F> {
    trim(f, vec![c])
}

/// `x`.
pub fn x<F: Field>(f: &F) -> Poly<F> {
    vec![f.zero(), f.one()]
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, out)
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, out)
}

pub fn neg<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F> {
    a.iter().map(|c| f.neg(c)).collect()
}

pub fn scale<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> Poly<F> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Quotient and remainder; panics on division by the zero polynomial.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lc_inv = f.inv(&b[db]).expect("leading coefficient is nonzero");
    let mut q = vec![f.zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = f.mul(&r[i], &lc_inv);
        if f.is_zero(&c) {
            continue;
        }
        for j in 0..=db {
            r[i - db + j] = f.sub(&r[i - db + j], &f.mul(&c, &b[j]));
        }
        q[i - db] = c;
    }
    (trim(f, q), trim(f, r))
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    divrem(f, a, b).1
}

/// Exact quotient, or `None` if `b` does not divide `a`.
pub fn div_exact<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Option<Poly<F>> {
    let (q, r) = divrem(f, a, b);
    r.is_empty().then_some(q)
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = f.inv(lc).expect("nonzero leading coefficient");
            scale(f, a, &inv)
        }
    }
}

/// Monic gcd.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    while !r1.is_empty() {
        let r = rem(f, &r0, &r1);
        r0 = r1;
        r1 = r;
    }
    monic(f, &r0)
}

/// `(g, s, t)` with `g = s a + t b`, `g` not normalized.
pub fn xgcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>, Poly<F>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        let t = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter()
        .rev()
        .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn derivative<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
        .collect();
    trim(f, out)
}

pub fn mulmod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Poly<F> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod<F: Field>(f: &F, a: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Poly<F> {
    let mut acc = rem(f, &[f.one()], m);
    let base = rem(f, a, m);
    for i in (0..e.bits()).rev() {
        acc = mulmod(f, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(f, &acc, &base, m);
        }
    }
    acc
}

/// `x^(q^n) mod m`, q the field order.
fn x_qpow_mod<F: Field>(f: &F, n: usize, m: &[F::Elem]) -> Poly<F> {
    let q = f.order();
    let mut r = rem(f, &x(f), m);
    for _ in 0..n {
        r = powmod(f, &r, &q, m);
    }
    r
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible<F: Field>(f: &F, m: &[F::Elem]) -> bool {
    let m = trim(f, m.to_vec());
    let Some(n) = degree::<F>(&m) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let xx = x(f);
    if sub(f, &x_qpow_mod(f, n, &m), &rem(f, &xx, &m)).iter().any(|c| !f.is_zero(c)) {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| {
        let h = sub(f, &x_qpow_mod(f, n / r, &m), &xx);
        degree::<F>(&gcd(f, &h, &m)) == Some(0)
    })
}

/// Square-free factorization: pairs `(g, e)` with `f = lc * prod g^e`, each `g` monic square-free.
pub fn squarefree_factorization<F: Field>(f: &F, a: &[F::Elem]) -> Vec<(Poly<F>, usize)> {
    let a = monic(f, a);
    let mut out = Vec::new();
    if a.len() <= 1 {
        return out;
    }
    sqf_rec(f, &a, 1, &mut out);
    out.sort_by(|x, y| x.1.cmp(&y.1));
    out
}

fn sqf_rec<F: Field>(f: &F, a: &[F::Elem], mult: usize, out: &mut Vec<(Poly<F>, usize)>) {
    let p = f.characteristic() as usize;
    let da = derivative(f, a);
    if da.is_empty() {
        // a = b(x^p): take the p-th root
        let b: Poly<F> = a.iter().step_by(p).map(|c| f.pth_root(c)).collect();
        sqf_rec(f, &b, mult * p, out);
        return;
    }
    let mut c = gcd(f, a, &da);
    let mut w = div_exact(f, a, &c).expect("gcd divides");
    let mut i = 1;
    while w.len() > 1 {
        let y = gcd(f, &w, &c);
        let fac = div_exact(f, &w, &y).expect("gcd divides");
        if fac.len() > 1 {
            push_factor::<F>(out, fac, i * mult);
        }
        w = y;
        c = div_exact(f, &c, &w).expect("gcd divides");
        i += 1;
    }
    if c.len() > 1 {
        let b: Poly<F> = c.iter().step_by(p).map(|x| f.pth_root(x)).collect();
        sqf_rec(f, &b, mult * p, out);
    }
}

fn push_factor<F: Field>(out: &mut Vec<(Poly<F>, usize)>, fac: Poly<F>, e: usize) {
    if let Some(entry) = out.iter_mut().find(|(g, _)| *g == fac) {
        entry.1 += e;
    } else {
        out.push((fac, e));
    }
}

/// Distinct-degree factorization of a monic square-free polynomial.
pub fn distinct_degree<F: Field>(f: &F, a: &[F::Elem]) -> Vec<(Poly<F>, usize)> {
    let mut out = Vec::new();
    let mut rest = monic(f, a);
    let q = f.order();
    let xx = x(f);
    let mut h = rem(f, &xx, &rest);
    let mut d = 1;
    while rest.len() > 1 && 2 * d < rest.len() {
        h = powmod(f, &h, &q, &rest);
        let g = gcd(f, &sub(f, &h, &xx), &rest);
        if g.len() > 1 {
            rest = div_exact(f, &rest, &g).expect("gcd divides");
            h = rem(f, &h, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.len() > 1 {
        let dd = rest.len() - 1;
        out.push((rest, dd));
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting of a monic square-free product of
/// irreducibles of degree `d` (odd characteristic).
pub fn equal_degree<F: Field, R: Rng + ?Sized>(
    f: &F,
    a: &[F::Elem],
    d: usize,
    rng: &mut R,
) -> Vec<Poly<F>> {
    let n = a.len() - 1;
    if n == d {
        return vec![monic(f, a)];
    }
    let e = (f.order().pow(d as u32) - 1u32) >> 1;
    loop {
        let r: Poly<F> = trim(f, (0..n).map(|_| f.random(rng)).collect());
        if r.len() <= 1 {
            continue;
        }
        let g = gcd(f, &r, a);
        let split = if g.len() > 1 && g.len() < a.len() {
            g
        } else {
            let t = sub(f, &powmod(f, &r, &e, a), &[f.one()]);
            gcd(f, &t, a)
        };
        if split.len() > 1 && split.len() < a.len() {
            let other = div_exact(f, a, &split).expect("gcd divides");
            let mut out = equal_degree(f, &split, d, rng);
            out.extend(equal_degree(f, &other, d, rng));
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities, sorted by
/// (degree, multiplicity, coefficients) for determinism of the report.
pub fn factor<F: Field, R: Rng + ?Sized>(f: &F, a: &[F::Elem], rng: &mut R) -> Vec<(Poly<F>, usize)>
where
    F::Elem: Ord,
{
    let mut out = Vec::new();
    for (sf, e) in squarefree_factorization(f, a) {
        for (g, d) in distinct_degree(f, &sf) {
            for h in equal_degree(f, &g, d, rng) {
                out.push((h, e));
            }
        }
    }
    out.sort_by(|x, y| {
        (x.0.len(), x.1)
            .cmp(&(y.0.len(), y.1))
            .then_with(|| x.0.iter().rev().cmp(y.0.iter().rev()))
    });
    out
}

/// Distinct roots of `a` in the field.
pub fn roots<F: Field, R: Rng + ?Sized>(f: &F, a: &[F::Elem], rng: &mut R) -> Vec<F::Elem>
where
    F::Elem: Ord,
{
    let a = trim(f, a.to_vec());
    if a.len() <= 1 {
        return Vec::new();
    }
    let a = monic(f, &a);
    let xq = powmod(f, &x(f), &f.order(), &a);
    let g = gcd(f, &sub(f, &xq, &x(f)), &a);
    if g.len() <= 1 {
        return Vec::new();
    }
    let mut out: Vec<F::Elem> = equal_degree(f, &g, 1, rng)
        .into_iter()
        .map(|lin| f.neg(&lin[0]))
        .collect();
    out.sort();
    out
}

/// `a(b(x))`.
pub fn compose<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    a.iter()
        .rev()
        .fold(Vec::new(), |acc, c| add(f, &mul(f, &acc, b), &constant(f, c.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{ExtField, PrimeField};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn rng() -> rand_chacha::ChaCha20Rng {
        rand_chacha::ChaCha20Rng::seed_from_u64(11)
    }

    fn scan_roots(f: &PrimeField, a: &[u64]) -> Vec<u64> {
        (0..f.p()).filter(|x| eval(f, a, x) == 0).collect()
    }

    #[test]
    fn root_examples() {
        let f5 = PrimeField::new(5).unwrap();
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(scan_roots(&f5, &[1, 0, 1]), vec![2, 3]);
        assert_eq!(roots(&f5, &[1, 0, 1], &mut rng()), vec![2, 3]);
        assert_eq!(roots(&f7, &[6, 1], &mut rng()), vec![1]);
        assert_eq!(scan_roots(&f7, &[1, 0, 1]), Vec::<u64>::new());
        assert!(roots(&f7, &[1, 0, 1], &mut rng()).is_empty());
    }

    #[test]
    fn factor_reassembles() {
        let f = PrimeField::new(3).unwrap();
        // (x^2+1)^3 (x+1)^2 x over F_3: exercises the p-th power branch
        let a = mul(&f, &mul(&f, &[1, 0, 1], &[1, 0, 1]), &[1, 0, 1]);
        let a = mul(&f, &mul(&f, &a, &[1, 1]), &mul(&f, &[1, 1], &[0, 1]));
        let fac = factor(&f, &a, &mut rng());
        let mut prod = vec![1u64];
        for (g, e) in &fac {
            assert!(is_irreducible(&f, g));
            for _ in 0..*e {
                prod = mul(&f, &prod, g);
            }
        }
        assert_eq!(prod, a);
        assert_eq!(fac.len(), 3);
    }

    #[test]
    fn ext_field_basics() {
        let k = ExtField::new(7, 4).unwrap();
        assert_eq!(k.degree(), 4);
        let mut r = rng();
        for _ in 0..50 {
            let a = k.random(&mut r);
            if k.is_zero(&a) {
                continue;
            }
            let ai = k.inv(&a).unwrap();
            assert!(k.is_one(&k.mul(&a, &ai)));
            assert_eq!(k.frobenius(&a), k.pow_u64(&a, 7));
            assert_eq!(k.frobenius_pow(&a, 4), a);
            let sq = k.square(&a);
            let s = k.sqrt(&sq).unwrap();
            assert_eq!(k.square(&s), sq);
        }
        let nr = k.nonresidue();
        assert!(k.sqrt(&nr).is_none());
        // roots of x^2 + 1 over F_49 exist since 49 ≡ 1 mod 4
        let k2 = ExtField::new(7, 2).unwrap();
        let minus1 = k2.from_i64(-1);
        let i = k2.sqrt(&minus1).unwrap();
        assert_eq!(k2.square(&i), minus1);
        assert!(ExtField::with_modulus(7, vec![1, 0, 1]).is_ok());
        assert_eq!(ExtField::with_modulus(5, vec![1, 0, 1]).unwrap_err(), crate::Error::NotIrreducible);
    }

    #[test]
    fn roots_over_extension() {
        let k = ExtField::new(11, 2).unwrap();
        let mut r = rng();
        // x^2 + 1 splits over F_121
        let one = k.one();
        let a = vec![one.clone(), k.zero(), one];
        let rs = roots(&k, &a, &mut r);
        assert_eq!(rs.len(), 2);
        for x in rs {
            assert!(k.is_zero(&eval(&k, &a, &x)));
        }
    }

    proptest! {
        #[test]
        fn reported_roots_divide(coeffs in proptest::collection::vec(0u64..13, 2..8), pi in 0usize..5, seed in 0u64..1000) {
            let p = [3u64, 5, 7, 11, 13][pi];
            let f = PrimeField::new(p).unwrap();
            let a = trim(&f, coeffs.iter().map(|c| c % p).collect());
            prop_assume!(a.len() >= 2);
            let mut r = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
            let rs = roots(&f, &a, &mut r);
            prop_assert_eq!(&rs, &scan_roots(&f, &a));
            let prod = rs.iter().fold(vec![1u64], |acc, &x| mul(&f, &acc, &[f.neg(&x), 1]));
            prop_assert!(div_exact(&f, &a, &prod).is_some());
        }
    }
}
