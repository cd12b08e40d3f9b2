//! Bases of `A[l']`, the field where they live, and endomorphisms as matrices on them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::Rng;

use crate::arith::intpoly;
use crate::arith::linalg::MatFp;
use crate::arith::primes::{divisors, is_prime};
use crate::arith::field::{Field, PrimeField};
use crate::pairing::pair_theta;
use crate::rng;
use crate::varieties::{AbelianVariety, Backend, Domain, GroupPoint, DISTORTION, ZETA5};
use crate::{Error, Result};

/// Cap on extension degrees searched for torsion.
pub const K_MAX: usize = 24;

/// Matrix of an endomorphism on a torsion basis; `p` of the matrix is `l'`.
pub type EndoMatrix = MatFp;

#[derive(Debug)]
pub struct TorsionBasis {
    pub ell: u64,
    /// Extension degree of the field holding the points (1 for the model).
    pub k: usize,
    pub domain: Domain,
    pub points: Vec<GroupPoint>,
    /// `gram[i][j]` = exponent of `e^Theta(points[i], points[j])`.
    pub gram: MatFp,
    gram_inv: MatFp,
    generator_mats: Mutex<HashMap<String, EndoMatrix>>,
}

fn check_ell(av: &AbelianVariety, ell: u64) -> Result<()> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell > 127 {
        return Err(Error::SizeCap(format!("torsion level {ell}")));
    }
    if !av.is_model() && ell == av.q() {
        return Err(Error::CharacteristicPrime(ell));
    }
    Ok(())
}

/// Least `k` with `x^k = 1` modulo the squarefree part of the Frobenius polynomial mod `l'`:
/// an upper bound for the torsion field degree.
fn frobenius_order_bound(av: &AbelianVariety, ell: u64) -> Result<usize> {
    let p = av.frobenius_char_poly()?;
    let sqf = intpoly::squarefree_part(&p);
    let f = PrimeField::new(ell)?;
    let m = intpoly::reduce_mod(&sqf, ell);
    let x = crate::arith::poly::x(&f);
    let mut cur = crate::arith::poly::rem(&f, &x, &m);
    for k in 1..=K_MAX {
        if cur == vec![1] {
            return Ok(k);
        }
        cur = crate::arith::poly::mulmod(&f, &cur, &x, &m);
    }
    Err(Error::TorsionFieldTooLarge(ell))
}

fn valuation(n: &BigUint, ell: u64) -> u32 {
    let mut n = n.clone();
    let l = BigUint::from(ell);
    let mut v = 0;
    while !n.is_zero() && (&n % &l).is_zero() {
        n /= &l;
        v += 1;
    }
    v
}

/// Least `k <= K_MAX` with `A[l'] ⊆ A(F_{q^k})`: divisors of the Frobenius-order bound are
/// tested in increasing order, first by `l'^{2g} | #A(F_{q^k})`, then by building a basis.
pub fn torsion_field_degree(av: &AbelianVariety, ell: u64) -> Result<usize> {
    check_ell(av, ell)?;
    if av.is_model() {
        return Ok(1);
    }
    let bound = frobenius_order_bound(av, ell)?;
    for d in divisors(bound as u64) {
        let d = d as usize;
        if d == bound {
            return Ok(d);
        }
        let dom = av.curve_domain(d)?;
        if valuation(&av.group_order(&dom)?, ell) < av.dim() as u32 {
            continue;
        }
        let mut r = rng::stream(0xde9, ell * 1000 + d as u64);
        if build_basis(av, &dom, ell, &mut r, 24).is_ok() {
            return Ok(d);
        }
    }
    Ok(bound)
}

/// Least degree over which the backend's generator constants exist (`i` for the
/// distortion map, a fifth root of unity for `zeta5`).
pub fn generator_degree(av: &AbelianVariety) -> usize {
    let q = av.q();
    let need = |n: u64| (1..).find(|&d| (q.pow(d as u32) - 1) % n == 0).expect("finite order");
    let mut d = 1;
    for g in &av.descriptor.generators {
        let e = match (&av.backend, g.as_str()) {
            (Backend::Elliptic(_), DISTORTION) => need(4),
            (Backend::Genus2(_), ZETA5) => need(5),
            _ => 1,
        };
        d = num_integer::lcm(d, e);
    }
    d
}

/// Degree used for torsion bases: the torsion field degree, enlarged so every generator
/// is defined there.
pub fn working_degree(av: &AbelianVariety, ell: u64) -> Result<usize> {
    let k = torsion_field_degree(av, ell)?;
    let k = num_integer::lcm(k, generator_degree(av));
    if k > K_MAX {
        return Err(Error::TorsionFieldTooLarge(ell));
    }
    Ok(k)
}

/// Random element of `A[l']`: cofactor multiple of a random point, multiplied by `l'`
/// until the next multiple would vanish.
fn random_torsion_point<R: Rng + ?Sized>(
    av: &AbelianVariety,
    dom: &Domain,
    ell: u64,
    cofactor: &BigInt,
    rng: &mut R,
) -> Result<GroupPoint> {
    let mut p = av.mul_big(dom, cofactor, &av.random_point(dom, rng)?)?;
    if av.is_identity(&p) {
        return Ok(p);
    }
    loop {
        let next = av.mul(dom, ell as i64, &p)?;
        if av.is_identity(&next) {
            return Ok(p);
        }
        p = next;
    }
}

fn theta(av: &AbelianVariety, dom: &Domain, a: &GroupPoint, b: &GroupPoint, ell: u64) -> Result<u64> {
    Ok(pair_theta(av, dom, a, b, ell)?.exponent)
}

/// Symplectic Gram–Schmidt on random torsion points: each new pair is projected away from
/// the span of the earlier pairs.
fn build_basis<R: Rng + ?Sized>(
    av: &AbelianVariety,
    dom: &Domain,
    ell: u64,
    rng: &mut R,
    budget: usize,
) -> Result<TorsionBasis> {
    let g = av.g();
    let n = av.group_order(dom)?;
    let v = valuation(&n, ell);
    if v < 2 * g as u32 {
        return Err(Error::SamplingExhausted(format!("A[{ell}] not rational over degree {}", dom.degree())));
    }
    let cofactor = BigInt::from(n / BigUint::from(ell).pow(v));
    let f = PrimeField::new(ell)?;
    let mut es: Vec<GroupPoint> = Vec::new();
    let mut fs: Vec<GroupPoint> = Vec::new();
    let project = |p: GroupPoint, es: &[GroupPoint], fs: &[GroupPoint]| -> Result<GroupPoint> {
        // p - w(p, f_i) e_i + w(p, e_i) f_i with w(e_i, f_i) = 1
        let mut out = p.clone();
        for (e, fi) in es.iter().zip(fs) {
            let a = theta(av, dom, &p, fi, ell)?;
            let b = theta(av, dom, &p, e, ell)?;
            out = av.sub(dom, &out, &av.mul(dom, a as i64, e)?)?;
            out = av.add(dom, &out, &av.mul(dom, b as i64, fi)?)?;
        }
        Ok(out)
    };
    'pairs: for _ in 0..g {
        for _ in 0..budget {
            let e = project(random_torsion_point(av, dom, ell, &cofactor, rng)?, &es, &fs)?;
            if av.is_identity(&e) {
                continue;
            }
            for _ in 0..budget {
                let fc = project(random_torsion_point(av, dom, ell, &cofactor, rng)?, &es, &fs)?;
                let w = theta(av, dom, &e, &fc, ell)?;
                if w != 0 {
                    let winv = f.inv(&w).expect("nonzero");
                    es.push(e);
                    fs.push(av.mul(dom, winv as i64, &fc)?);
                    continue 'pairs;
                }
            }
        }
        return Err(Error::SamplingExhausted(format!("torsion basis for l' = {ell}")));
    }
    let points: Vec<GroupPoint> = es.into_iter().chain(fs).collect();
    finish_basis(av, dom.clone(), ell, points)
}

fn finish_basis(av: &AbelianVariety, dom: Domain, ell: u64, points: Vec<GroupPoint>) -> Result<TorsionBasis> {
    let d = points.len();
    let mut gram = MatFp::zeros(ell, d, d);
    for i in 0..d {
        for j in 0..d {
            gram.set(i, j, theta(av, &dom, &points[i], &points[j], ell)?);
        }
    }
    let gram_inv = gram.inverse().map_err(|_| Error::Degenerate("basis pairing table is singular".into()))?;
    Ok(TorsionBasis { ell, k: dom.degree(), domain: dom, points, gram, gram_inv, generator_mats: Mutex::default() })
}

/// A fresh basis of `A[l']` from `rng`.
pub fn torsion_basis<R: Rng + ?Sized>(av: &AbelianVariety, ell: u64, rng: &mut R) -> Result<TorsionBasis> {
    check_ell(av, ell)?;
    if let Some(m) = av.model() {
        let d = m.dim();
        let points = (0..d)
            .map(|i| GroupPoint::Model((0..d).map(|j| u64::from(i == j)).collect()))
            .collect();
        return finish_basis(av, Domain::Model { level: ell }, ell, points);
    }
    let k = working_degree(av, ell)?;
    let dom = av.curve_domain(k)?;
    build_basis(av, &dom, ell, rng, 64)
}

/// The variety's canonical basis at `l'`, built once from a fixed stream and cached.
pub fn basis_for(av: &AbelianVariety, ell: u64) -> Result<Arc<TorsionBasis>> {
    if let Some(b) = av.cached_basis(ell) {
        return Ok(b);
    }
    let b = torsion_basis(av, ell, &mut rng::stream(0xba515, ell))?;
    Ok(av.store_basis(ell, Arc::new(b)))
}

impl TorsionBasis {
    pub fn dim(&self) -> usize {
        self.points.len()
    }

    /// `sum c_j e_j`.
    pub fn point(&self, av: &AbelianVariety, coords: &[u64]) -> Result<GroupPoint> {
        let mut acc = av.identity(&self.domain);
        for (c, e) in coords.iter().zip(&self.points) {
            if *c != 0 {
                acc = av.add(&self.domain, &acc, &av.mul(&self.domain, *c as i64, e)?)?;
            }
        }
        Ok(acc)
    }

    /// Coordinates by dual-basis projection: pairing against the basis and applying
    /// the inverse Gram table; the result is checked by recombination.
    pub fn coords(&self, av: &AbelianVariety, x: &GroupPoint) -> Result<Vec<u64>> {
        if let GroupPoint::Model(v) = x {
            return Ok(v.iter().map(|c| c % self.ell).collect());
        }
        if !av.is_identity(&av.mul(&self.domain, self.ell as i64, x)?) {
            return Err(Error::NotTorsion(self.ell));
        }
        let row: Vec<u64> =
            self.points.iter().map(|e| theta(av, &self.domain, e, x, self.ell)).collect::<Result<_>>()?;
        let c = self.gram_inv.mul_vec(&row);
        if self.point(av, &c)? != *x {
            return Err(Error::Verification("torsion coordinates do not recombine".into()));
        }
        Ok(c)
    }

    /// Coordinates by scanning all of `(Z/l')^{2g}`; a slow oracle for small `l'`.
    pub fn coords_exhaustive(&self, av: &AbelianVariety, x: &GroupPoint) -> Result<Option<Vec<u64>>> {
        let d = self.dim();
        let total = self.ell.pow(d as u32);
        if total > 1 << 16 {
            return Err(Error::SizeCap("exhaustive span".into()));
        }
        for n in 0..total {
            let c: Vec<u64> = (0..d).map(|i| (n / self.ell.pow(i as u32)) % self.ell).collect();
            if self.point(av, &c)? == *x {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    /// Matrix whose column `j` holds the coordinates of `f(e_j)`.
    pub fn matrix_of_map<F>(&self, av: &AbelianVariety, f: F) -> Result<EndoMatrix>
    where
        F: Fn(&GroupPoint) -> Result<GroupPoint>,
    {
        let cols: Vec<Vec<u64>> = self
            .points
            .iter()
            .map(|e| {
                let img = f(e)?;
                if !av.contains(&self.domain, &img) {
                    return Err(Error::BackendMismatch);
                }
                self.coords(av, &img)
            })
            .collect::<Result<_>>()?;
        Ok(MatFp::from_columns(self.ell, &cols))
    }

    /// Matrix of a named generator, computed once per basis.
    pub fn generator_matrix(&self, av: &AbelianVariety, name: &str) -> Result<EndoMatrix> {
        if let Some(m) = self.generator_mats.lock().expect("poisoned").get(name) {
            return Ok(m.clone());
        }
        let m = self.matrix_of_map(av, |p| av.apply_generator(&self.domain, name, p))?;
        self.generator_mats.lock().expect("poisoned").insert(name.to_string(), m.clone());
        Ok(m)
    }

    /// `G^{-1} M^T G`: the adjoint with respect to `e^Theta`.
    pub fn adjoint(&self, m: &EndoMatrix) -> EndoMatrix {
        self.gram_inv.mul(&m.transpose()).mul(&self.gram)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::Field;
    use crate::varieties::{EcPoint, FROBENIUS};

    /// All points of E(F_{q^k}) of order dividing 3 by scanning x over the field.
    fn three_torsion_by_scan(av: &AbelianVariety, k: usize) -> Vec<GroupPoint> {
        let dom = av.curve_domain(k).unwrap();
        let f = dom.field().unwrap().clone();
        let Backend::Elliptic(e) = &av.backend else { unreachable!() };
        let mut out = vec![GroupPoint::Ec(EcPoint::Infinity)];
        for i in 0..f.order().try_into().unwrap() {
            let x = f.nth_element(i);
            if let Some(y) = f.sqrt(&e.rhs(&f, &x)) {
                for y in [y.clone(), f.neg(&y)] {
                    let p = GroupPoint::Ec(EcPoint::Affine { x: x.clone(), y });
                    if !out.contains(&p) && av.is_identity(&av.mul(&dom, 3, &p).unwrap()) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn degrees_match_enumeration() {
        let e11 = AbelianVariety::named("ec-ss-11").unwrap();
        // the least k with nine 3-torsion points over F_{11^k}
        let k_scan = (1..=4).find(|&k| three_torsion_by_scan(&e11, k).len() == 9).unwrap();
        assert_eq!(k_scan, 2);
        assert_eq!(torsion_field_degree(&e11, 3).unwrap(), k_scan);
        assert_eq!(torsion_field_degree(&e11, 5).unwrap(), 4);
        assert!(matches!(torsion_field_degree(&e11, 11), Err(Error::CharacteristicPrime(11))));
        let m = AbelianVariety::named("model").unwrap();
        assert_eq!(torsion_field_degree(&m, 5).unwrap(), 1);
        let j = AbelianVariety::named("g2-19").unwrap();
        assert_eq!(torsion_field_degree(&j, 3).unwrap(), 4);
        assert_eq!(torsion_field_degree(&j, 5).unwrap(), 2);
    }

    #[test]
    fn basis_spans_three_torsion() {
        let e11 = AbelianVariety::named("ec-ss-11").unwrap();
        let b = basis_for(&e11, 3).unwrap();
        assert_eq!(b.k, 2);
        assert_ne!(b.gram.get(0, 1), 0);
        let all = three_torsion_by_scan(&e11, 2);
        assert_eq!(all.len(), 9);
        let mut span = Vec::new();
        for n in 0..9u64 {
            span.push(b.point(&e11, &[n % 3, n / 3]).unwrap());
        }
        for p in &all {
            assert!(span.contains(p));
            let c = b.coords(&e11, p).unwrap();
            assert_eq!(Some(c), b.coords_exhaustive(&e11, p).unwrap());
        }
    }

    #[test]
    fn frobenius_matrix_has_degree_q() {
        let e7 = AbelianVariety::named("ec-ss-7").unwrap();
        let b = basis_for(&e7, 3).unwrap();
        let m = b.matrix_of_map(&e7, |p| e7.apply_generator(&b.domain, FROBENIUS, p)).unwrap();
        assert_eq!(m.det(), 7 % 3);
        assert_eq!(m.char_poly(), vec![1, 0, 1]);
        let id = b.matrix_of_map(&e7, |p| Ok(p.clone())).unwrap();
        assert_eq!(id, MatFp::identity(3, 2));
        let two = b.matrix_of_map(&e7, |p| e7.mul(&b.domain, 2, p)).unwrap();
        assert_eq!(two, MatFp::scalar(3, 2, 2));
    }

    #[test]
    fn model_standard_basis() {
        let m = AbelianVariety::named("model").unwrap();
        let b = basis_for(&m, 5).unwrap();
        assert_eq!(b.points[0], GroupPoint::Model(vec![1, 0, 0, 0]));
        assert_eq!(b.gram.get(0, 2), 1);
    }

    #[test]
    fn genus2_basis_and_projection_oracle() {
        let j = AbelianVariety::named("g2-19").unwrap();
        let b = basis_for(&j, 3).unwrap();
        assert_eq!(b.dim(), 4);
        let mut r = rng::seeded(1);
        for _ in 0..5 {
            let c: Vec<u64> = (0..4).map(|_| r.gen_range(0..3)).collect();
            let p = b.point(&j, &c).unwrap();
            assert_eq!(b.coords(&j, &p).unwrap(), c);
            assert_eq!(b.coords_exhaustive(&j, &p).unwrap(), Some(c));
        }
    }
}
