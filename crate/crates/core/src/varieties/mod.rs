//! Abelian-variety backends behind one handle: elliptic curves, genus-2 Jacobians and
//! the synthetic matrix model.

pub mod descriptor;
pub mod elliptic;
pub mod genus2;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::field::{ExtField, Field};
use crate::arith::intpoly::IntPoly;
use crate::model::ModelVariety;
use crate::torsion::TorsionBasis;
use crate::{Error, Result};

pub use descriptor::{Descriptor, Kind};
pub use elliptic::{EcPoint, EllipticCurve};
pub use genus2::{Genus2Curve, Mumford};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    Elliptic(EllipticCurve),
    Genus2(Genus2Curve),
    Model(ModelVariety),
}

/// Where points live: a finite field for curves, a level `m` for the model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Curve(Arc<ExtField>),
    Model { level: u64 },
}

impl Domain {
    pub fn field(&self) -> Option<&ExtField> {
        match self {
            Domain::Curve(k) => Some(k),
            Domain::Model { .. } => None,
        }
    }

    /// Extension degree over the prime field (1 for the model).
    pub fn degree(&self) -> usize {
        self.field().map_or(1, |k| k.degree())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupPoint {
    Ec(EcPoint),
    Jac(Mumford),
    Model(Vec<u64>),
}

#[derive(Debug)]
pub struct AbelianVariety {
    pub descriptor: Descriptor,
    pub backend: Backend,
    fields: Mutex<HashMap<usize, Arc<ExtField>>>,
    frob_poly: OnceLock<std::result::Result<IntPoly, Error>>,
    bases: Mutex<HashMap<u64, Arc<TorsionBasis>>>,
}

pub const FROBENIUS: &str = "frobenius";
pub const VERSCHIEBUNG: &str = "verschiebung";
pub const DISTORTION: &str = "distortion";
pub const ZETA5: &str = "zeta5";

impl AbelianVariety {
    pub fn from_descriptor(d: &Descriptor) -> Result<Arc<Self>> {
        let backend = match d.kind {
            Kind::Elliptic => {
                let [a, b] = d.coeffs[..] else {
                    return Err(Error::InvalidData("elliptic coeffs must be [a, b]".into()));
                };
                Backend::Elliptic(EllipticCurve::new(d.p, a, b)?)
            }
            Kind::Genus2 => Backend::Genus2(Genus2Curve::new(d.p, d.coeffs.clone())?),
            Kind::Model => {
                let name = d.fixture.as_deref().ok_or_else(|| Error::InvalidData("model needs a fixture".into()))?;
                Backend::Model(ModelVariety::from_json(&descriptor::load_fixture(name)?)?)
            }
        };
        let allowed: Vec<String> = match &backend {
            Backend::Elliptic(_) => vec![FROBENIUS.into(), DISTORTION.into()],
            Backend::Genus2(_) => vec![FROBENIUS.into(), ZETA5.into()],
            Backend::Model(m) => m.generator_names(),
        };
        if let Some(bad) = d.generators.iter().find(|g| !allowed.contains(g)) {
            return Err(Error::UnknownGenerator(bad.clone()));
        }
        Ok(Arc::new(AbelianVariety {
            descriptor: d.clone(),
            backend,
            fields: Mutex::new(HashMap::new()),
            frob_poly: OnceLock::new(),
            bases: Mutex::new(HashMap::new()),
        }))
    }

    pub fn named(name: &str) -> Result<Arc<Self>> {
        Self::from_descriptor(&Descriptor::named(name)?)
    }

    pub fn g(&self) -> usize {
        match &self.backend {
            Backend::Elliptic(_) => 1,
            Backend::Genus2(_) => 2,
            Backend::Model(m) => m.g,
        }
    }

    /// Base field size `q` (0 for the model).
    pub fn q(&self) -> u64 {
        self.descriptor.p
    }

    pub fn is_model(&self) -> bool {
        matches!(self.backend, Backend::Model(_))
    }

    pub fn model(&self) -> Option<&ModelVariety> {
        match &self.backend {
            Backend::Model(m) => Some(m),
            _ => None,
        }
    }

    pub fn field(&self, k: usize) -> Result<Arc<ExtField>> {
        let mut cache = self.fields.lock().expect("field cache");
        if let Some(f) = cache.get(&k) {
            return Ok(f.clone());
        }
        let f = Arc::new(ExtField::new(self.q(), k)?);
        cache.insert(k, f.clone());
        Ok(f)
    }

    pub fn curve_domain(&self, k: usize) -> Result<Domain> {
        if self.is_model() {
            return Err(Error::BackendMismatch);
        }
        Ok(Domain::Curve(self.field(k)?))
    }

    pub fn cached_basis(&self, ell: u64) -> Option<Arc<TorsionBasis>> {
        self.bases.lock().expect("basis cache").get(&ell).cloned()
    }

    pub fn store_basis(&self, ell: u64, b: Arc<TorsionBasis>) -> Arc<TorsionBasis> {
        self.bases.lock().expect("basis cache").entry(ell).or_insert(b).clone()
    }

    pub fn identity(&self, dom: &Domain) -> GroupPoint {
        match (&self.backend, dom) {
            (Backend::Elliptic(_), _) => GroupPoint::Ec(EcPoint::Infinity),
            (Backend::Genus2(_), Domain::Curve(k)) => GroupPoint::Jac(Mumford::identity(k)),
            (Backend::Model(m), _) => GroupPoint::Model(vec![0; m.dim()]),
            (Backend::Genus2(_), Domain::Model { .. }) => unreachable!("genus-2 points need a field"),
        }
    }

    pub fn is_identity(&self, p: &GroupPoint) -> bool {
        match p {
            GroupPoint::Ec(e) => e.is_infinity(),
            GroupPoint::Jac(d) => d.is_identity(),
            GroupPoint::Model(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn contains(&self, dom: &Domain, p: &GroupPoint) -> bool {
        match (&self.backend, dom, p) {
            (Backend::Elliptic(e), Domain::Curve(k), GroupPoint::Ec(pt)) => e.contains(k, pt),
            (Backend::Genus2(c), Domain::Curve(k), GroupPoint::Jac(d)) => c.contains(k, d),
            (Backend::Model(m), Domain::Model { level }, GroupPoint::Model(v)) => {
                v.len() == m.dim() && v.iter().all(|c| c < level)
            }
            _ => false,
        }
    }

    pub fn add(&self, dom: &Domain, a: &GroupPoint, b: &GroupPoint) -> Result<GroupPoint> {
        Ok(match (&self.backend, dom, a, b) {
            (Backend::Elliptic(e), Domain::Curve(k), GroupPoint::Ec(p), GroupPoint::Ec(q)) => {
                GroupPoint::Ec(e.add(k, p, q))
            }
            (Backend::Genus2(c), Domain::Curve(k), GroupPoint::Jac(p), GroupPoint::Jac(q)) => {
                GroupPoint::Jac(c.add(k, p, q))
            }
            (Backend::Model(_), Domain::Model { level }, GroupPoint::Model(p), GroupPoint::Model(q)) => {
                GroupPoint::Model(p.iter().zip(q).map(|(x, y)| (x + y) % level).collect())
            }
            _ => return Err(Error::BackendMismatch),
        })
    }

    pub fn neg(&self, dom: &Domain, a: &GroupPoint) -> Result<GroupPoint> {
        Ok(match (&self.backend, dom, a) {
            (Backend::Elliptic(e), Domain::Curve(k), GroupPoint::Ec(p)) => GroupPoint::Ec(e.neg(k, p)),
            (Backend::Genus2(c), Domain::Curve(k), GroupPoint::Jac(p)) => GroupPoint::Jac(c.neg(k, p)),
            (Backend::Model(_), Domain::Model { level }, GroupPoint::Model(p)) => {
                GroupPoint::Model(p.iter().map(|x| (level - x) % level).collect())
            }
            _ => return Err(Error::BackendMismatch),
        })
    }

    pub fn sub(&self, dom: &Domain, a: &GroupPoint, b: &GroupPoint) -> Result<GroupPoint> {
        self.add(dom, a, &self.neg(dom, b)?)
    }

    pub fn mul_big(&self, dom: &Domain, n: &BigInt, a: &GroupPoint) -> Result<GroupPoint> {
        if let (Domain::Model { level }, GroupPoint::Model(p)) = (dom, a) {
            let l = BigInt::from(*level);
            let c: u64 = ((n % &l + &l) % &l).try_into().expect("reduced");
            return Ok(GroupPoint::Model(
                p.iter().map(|x| ((*x as u128 * c as u128) % *level as u128) as u64).collect(),
            ));
        }
        let base = if n.sign() == Sign::Minus { self.neg(dom, a)? } else { a.clone() };
        let m = n.abs().to_biguint().expect("nonnegative");
        let mut acc = self.identity(dom);
        for i in (0..m.bits()).rev() {
            acc = self.add(dom, &acc, &acc)?;
            if m.bit(i) {
                acc = self.add(dom, &acc, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn mul(&self, dom: &Domain, n: i64, a: &GroupPoint) -> Result<GroupPoint> {
        self.mul_big(dom, &BigInt::from(n), a)
    }

    pub fn random_point<R: Rng + ?Sized>(&self, dom: &Domain, rng: &mut R) -> Result<GroupPoint> {
        Ok(match (&self.backend, dom) {
            (Backend::Elliptic(e), Domain::Curve(k)) => GroupPoint::Ec(e.random_point(k, rng)),
            (Backend::Genus2(c), Domain::Curve(k)) => GroupPoint::Jac(c.random_divisor(k, rng)),
            (Backend::Model(m), Domain::Model { level }) => {
                GroupPoint::Model((0..m.dim()).map(|_| rng.gen_range(0..*level)).collect())
            }
            _ => return Err(Error::BackendMismatch),
        })
    }

    /// Generator names usable in words: the descriptor's list, plus Verschiebung
    /// whenever Frobenius is present.
    pub fn word_generators(&self) -> Vec<String> {
        let mut g = self.descriptor.generators.clone();
        if g.iter().any(|s| s == FROBENIUS) {
            g.push(VERSCHIEBUNG.into());
        }
        g
    }

    /// Evaluate a named generator on a point.
    pub fn apply_generator(&self, dom: &Domain, name: &str, a: &GroupPoint) -> Result<GroupPoint> {
        if !self.word_generators().iter().any(|g| g == name) {
            return Err(Error::UnknownGenerator(name.into()));
        }
        match (&self.backend, dom, a, name) {
            (Backend::Elliptic(e), Domain::Curve(k), GroupPoint::Ec(p), FROBENIUS) => {
                Ok(GroupPoint::Ec(e.frobenius(k, p)))
            }
            (Backend::Elliptic(e), Domain::Curve(k), GroupPoint::Ec(p), DISTORTION) => {
                Ok(GroupPoint::Ec(e.distortion(k, p)?))
            }
            (Backend::Genus2(c), Domain::Curve(k), GroupPoint::Jac(p), FROBENIUS) => {
                Ok(GroupPoint::Jac(c.frobenius(k, p)))
            }
            (Backend::Genus2(c), Domain::Curve(k), GroupPoint::Jac(p), ZETA5) => Ok(GroupPoint::Jac(c.zeta5(k, p)?)),
            (Backend::Elliptic(_) | Backend::Genus2(_), Domain::Curve(k), _, VERSCHIEBUNG) => {
                // q * pi^(k-1), since pi^k fixes every point over F_{q^k}
                let mut b = a.clone();
                for _ in 1..k.degree() {
                    b = self.apply_generator(dom, FROBENIUS, &b)?;
                }
                self.mul(dom, self.q() as i64, &b)
            }
            (Backend::Model(m), Domain::Model { level }, GroupPoint::Model(p), _) => {
                let i: usize = name[1..].parse::<usize>().map_err(|_| Error::UnknownGenerator(name.into()))? - 1;
                let b = &m.basis[i];
                let d = m.dim();
                let l = *level as i128;
                Ok(GroupPoint::Model(
                    (0..d)
                        .map(|r| (0..d).map(|c| b.get(r, c) * p[c] as i128).sum::<i128>().rem_euclid(l) as u64)
                        .collect(),
                ))
            }
            _ => Err(Error::BackendMismatch),
        }
    }

    /// Adjoint of a generator as integer-linear terms of generator products
    /// (rightmost factor applied first).
    pub fn generator_adjoint(&self, name: &str) -> Result<Vec<(i64, Vec<String>)>> {
        let one = |s: &str| vec![(1, vec![s.to_string()])];
        match (&self.backend, name) {
            (_, FROBENIUS) => Ok(one(VERSCHIEBUNG)),
            (_, VERSCHIEBUNG) => Ok(one(FROBENIUS)),
            (Backend::Elliptic(_), DISTORTION) => Ok(vec![(-1, vec![DISTORTION.into()])]),
            (Backend::Genus2(_), ZETA5) => Ok(vec![(1, vec![ZETA5.to_string(); 4])]),
            (Backend::Model(m), _) if m.generator_names().iter().any(|g| g == name) => {
                let i: usize = name[1..].parse::<usize>().expect("checked") - 1;
                Ok(m.adjoints[i]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(j, c)| (*c, vec![format!("B{}", j + 1)]))
                    .collect())
            }
            _ => Err(Error::UnknownGenerator(name.into())),
        }
    }

    /// `|A(F_{q^k})|` by enumeration: elliptic curves directly; genus 2 from curve counts
    /// over degrees `k` and `2k`. For the model, `k` is read as the level `m` and the
    /// answer is the product of the elementary divisors of `(Z/m)^{2g}`.
    pub fn count_points(&self, k: usize) -> Result<BigUint> {
        match &self.backend {
            Backend::Elliptic(e) => {
                let f = self.field(k)?;
                let n: u64 = f
                    .order()
                    .try_into()
                    .ok()
                    .filter(|&n: &u64| n <= 1 << 24)
                    .ok_or_else(|| Error::SizeCap("point enumeration".into()))?;
                let mut total = 1u64;
                for i in 0..n {
                    let x = f.nth_element(i);
                    let r = e.rhs(&f, &x);
                    total += if f.is_zero(&r) {
                        1
                    } else if f.is_square(&r) {
                        2
                    } else {
                        0
                    };
                }
                Ok(BigUint::from(total))
            }
            Backend::Genus2(c) => {
                let m1 = c.count_curve_points(&*self.field(k)?)?;
                let m2 = c.count_curve_points(&*self.field(2 * k)?)?;
                let qk = BigInt::from(self.q()).pow(k as u32);
                // s1 = sum of alpha_i^k, s2 = sum of alpha_i^{2k}
                let s1 = &qk + 1 - BigInt::from(m1);
                let s2 = &qk * &qk + 1 - BigInt::from(m2);
                let e2 = (&s1 * &s1 - s2) / 2;
                // P(1) = 1 - e1 + e2 - q^k e1 + q^{2k}
                let n: BigInt = BigInt::one() - &s1 + e2 - &qk * &s1 + &qk * &qk;
                Ok(n.to_biguint().expect("positive group order"))
            }
            Backend::Model(m) => Ok(BigUint::from(k as u64).pow(2 * m.g as u32)),
        }
    }

    /// Characteristic polynomial of Frobenius from point counts, verified by applying
    /// `P(pi)` to random points over degrees 1..=4.
    pub fn frobenius_char_poly(&self) -> Result<IntPoly> {
        self.frob_poly.get_or_init(|| self.compute_frobenius_char_poly()).clone()
    }

    fn compute_frobenius_char_poly(&self) -> Result<IntPoly> {
        let q = self.q() as i128;
        let poly = match &self.backend {
            Backend::Model(_) => return Err(Error::OutOfScope("model backend has no Frobenius".into())),
            Backend::Elliptic(e) => {
                let t = q + 1 - e.count_base_points() as i128;
                vec![q, -t, 1]
            }
            Backend::Genus2(c) => {
                let m1 = c.count_curve_points(&*self.field(1)?)? as i128;
                let m2 = c.count_curve_points(&*self.field(2)?)? as i128;
                let s1 = q + 1 - m1;
                let s2 = q * q + 1 - m2;
                let e2 = (s1 * s1 - s2) / 2;
                vec![q * q, -q * s1, e2, -s1, 1]
            }
        };
        let mut rng = crate::rng::seeded(0x5eed);
        for k in 1..=4 {
            let dom = self.curve_domain(k)?;
            for _ in 0..3 {
                let p = self.random_point(&dom, &mut rng)?;
                let r = self.eval_frobenius_poly(&dom, &poly, &p)?;
                if !self.is_identity(&r) {
                    return Err(Error::Verification(format!("Frobenius polynomial fails over degree {k}")));
                }
            }
        }
        Ok(poly)
    }

    /// `sum c_i pi^i (P)`.
    pub fn eval_frobenius_poly(&self, dom: &Domain, poly: &[i128], p: &GroupPoint) -> Result<GroupPoint> {
        let mut acc = self.identity(dom);
        let mut cur = p.clone();
        for c in poly {
            if *c != 0 {
                acc = self.add(dom, &acc, &self.mul_big(dom, &BigInt::from(*c), &cur)?)?;
            }
            cur = self.apply_generator(dom, FROBENIUS, &cur)?;
        }
        Ok(acc)
    }

    /// `|A(F_{q^k})| = prod (1 - alpha_i^k)` from the Frobenius polynomial.
    pub fn group_order(&self, dom: &Domain) -> Result<BigUint> {
        match dom {
            Domain::Model { level } => Ok(BigUint::from(*level).pow(self.dim() as u32)),
            Domain::Curve(k) => {
                let p = self.frobenius_char_poly()?;
                let sums = power_sums(&p, 2 * self.g() * k.degree());
                let k = k.degree();
                let n = 2 * self.g();
                // power sums of alpha_i^k, then elementary symmetric functions by Newton
                let pk: Vec<BigInt> = (1..=n).map(|j| sums[j * k].clone()).collect();
                let mut e = vec![BigInt::one()];
                for m in 1..=n {
                    let mut acc = BigInt::zero();
                    for i in 1..=m {
                        let term = &e[m - i] * &pk[i - 1];
                        if i % 2 == 1 {
                            acc += term;
                        } else {
                            acc -= term;
                        }
                    }
                    e.push(acc / BigInt::from(m));
                }
                let total: BigInt =
                    e.iter().enumerate().map(|(j, ej)| if j % 2 == 0 { ej.clone() } else { -ej }).sum();
                total.to_biguint().ok_or_else(|| Error::Verification("negative group order".into()))
            }
        }
    }

    /// Dimension `2g` of the torsion modules.
    pub fn dim(&self) -> usize {
        2 * self.g()
    }

    /// True iff the coefficient of `x^g` in the Frobenius polynomial is prime to `p`.
    /// The model declares itself non-ordinary.
    pub fn is_ordinary(&self) -> Result<bool> {
        if self.is_model() {
            return Ok(false);
        }
        let p = self.frobenius_char_poly()?;
        Ok(p[self.g()].rem_euclid(self.q() as i128) != 0)
    }
}

/// `s_j = sum alpha_i^j` for `j = 0..=n` from a monic integer polynomial.
pub fn power_sums(p: &[i128], n: usize) -> Vec<BigInt> {
    let d = p.len() - 1;
    let c: Vec<BigInt> = p.iter().map(|&v| BigInt::from(v)).collect();
    let mut s = vec![BigInt::from(d as u64)];
    for j in 1..=n {
        // s_j = -(sum_{i=1}^{min(j-1,d)} c_{d-i} s_{j-i}) - j c_{d-j} (if j <= d)
        let mut acc = BigInt::zero();
        for i in 1..=j.min(d) {
            if i < j {
                acc -= &c[d - i] * &s[j - i];
            } else {
                acc -= BigInt::from(j as u64) * &c[d - j];
            }
        }
        s.push(acc);
    }
    s
}
