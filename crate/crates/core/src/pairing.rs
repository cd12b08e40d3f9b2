//! Weil pairings via Miller's algorithm, returned in exponent form against the
//! canonical primitive `l`-th root of unity of the field.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::dlog::bsgs_dlog;
use crate::arith::field::{canonical_root_of_unity, ExtField, Field};
use crate::arith::poly;
use crate::endo::Endomorphism;
use crate::rng;
use crate::varieties::genus2::{CantorFactor, Genus2Curve, Mumford};
use crate::varieties::{AbelianVariety, Backend, Domain, EcPoint, EllipticCurve, GroupPoint};
use crate::{Error, Result};

/// `raw = omega^exponent`, `omega` the canonical root of unity; the model has no raw value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairingValue {
    pub ell: u64,
    pub exponent: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<Vec<u64>>,
}

impl PairingValue {
    pub fn is_one(&self) -> bool {
        self.exponent == 0
    }
}

const RETRIES: usize = 16;

fn check_torsion(av: &AbelianVariety, dom: &Domain, p: &GroupPoint, ell: u64) -> Result<()> {
    if !av.contains(dom, p) {
        return Err(Error::BackendMismatch);
    }
    if !av.is_identity(&av.mul(dom, ell as i64, p)?) {
        return Err(Error::NotTorsion(ell));
    }
    Ok(())
}

fn to_exponent(k: &ExtField, raw: Vec<u64>, ell: u64) -> Result<PairingValue> {
    if !k.is_one(&k.pow_u64(&raw, ell)) {
        return Err(Error::Verification("pairing value outside mu_l".into()));
    }
    let omega = canonical_root_of_unity(k, ell).ok_or(Error::NotInSubgroup)?;
    let t = bsgs_dlog(&omega, &raw, ell, &k.one(), |a, b| k.mul(a, b))?;
    Ok(PairingValue { ell, exponent: t, raw: Some(raw) })
}

/// The Weil pairing `e_l(P, Q)` with a fixed internal stream for the auxiliary translations.
pub fn weil_pairing(av: &AbelianVariety, dom: &Domain, p: &GroupPoint, q: &GroupPoint, ell: u64) -> Result<PairingValue> {
    weil_pairing_with(av, dom, p, q, ell, &mut rng::stream(0x9a17, ell))
}

/// As [`weil_pairing`], drawing translations from `rng`; the value does not depend on them.
pub fn weil_pairing_with<R: Rng + ?Sized>(
    av: &AbelianVariety,
    dom: &Domain,
    p: &GroupPoint,
    q: &GroupPoint,
    ell: u64,
    rng: &mut R,
) -> Result<PairingValue> {
    check_torsion(av, dom, p, ell)?;
    check_torsion(av, dom, q, ell)?;
    match (&av.backend, dom, p, q) {
        (Backend::Model(m), Domain::Model { .. }, GroupPoint::Model(a), GroupPoint::Model(b)) => {
            Ok(PairingValue { ell, exponent: m.pairing(ell, a, b), raw: None })
        }
        (Backend::Elliptic(e), Domain::Curve(k), GroupPoint::Ec(a), GroupPoint::Ec(b)) => {
            if a.is_infinity() || b.is_infinity() {
                return Ok(PairingValue { ell, exponent: 0, raw: Some(k.one()) });
            }
            for _ in 0..RETRIES {
                if let Some(raw) = ec_weil(e, k, a, b, ell, rng) {
                    return to_exponent(k, raw, ell);
                }
            }
            Err(Error::SupportCollision)
        }
        (Backend::Genus2(c), Domain::Curve(k), GroupPoint::Jac(a), GroupPoint::Jac(b)) => {
            if a.is_identity() || b.is_identity() {
                return Ok(PairingValue { ell, exponent: 0, raw: Some(k.one()) });
            }
            for _ in 0..RETRIES {
                if let Some(raw) = g2_weil(c, k, a, b, ell, rng) {
                    return to_exponent(k, raw, ell);
                }
            }
            Err(Error::SupportCollision)
        }
        _ => Err(Error::BackendMismatch),
    }
}

/// `e^Theta(alpha, beta) = e(alpha, phi_Theta(beta))`. With `Theta = (O)` on an elliptic
/// curve `phi_Theta(b) = -b`, so this is the inverse Weil pairing; the genus-2 backend uses
/// the same sign; the model uses its form directly.
pub fn pair_theta(av: &AbelianVariety, dom: &Domain, a: &GroupPoint, b: &GroupPoint, ell: u64) -> Result<PairingValue> {
    let w = weil_pairing(av, dom, a, b, ell)?;
    if av.is_model() {
        return Ok(w);
    }
    let k = dom.field().expect("curve domain");
    let raw = w.raw.as_ref().map(|r| k.inv(r).expect("unit"));
    Ok(PairingValue { ell, exponent: (ell - w.exponent) % ell, raw })
}

/// `e^D(alpha, beta) = e^Theta(alpha, lambda_D(beta))`.
pub fn pair_ed(
    lambda: &Endomorphism,
    dom: &Domain,
    a: &GroupPoint,
    b: &GroupPoint,
    ell: u64,
) -> Result<PairingValue> {
    let av = lambda.variety();
    let lb = lambda.apply(dom, b)?;
    pair_theta(av, dom, a, &lb, ell)
}

// ---- elliptic curves ----

/// Values at each `x` of the Miller function with divisor `l(P) - l(O)`, or `None` on
/// a zero or pole.
fn ec_miller(e: &EllipticCurve, k: &ExtField, p: &EcPoint, ell: u64, xs: &[EcPoint]) -> Option<Vec<Vec<u64>>> {
    let mut f = vec![k.one(); xs.len()];
    let mut t = p.clone();
    let step = |f: &mut Vec<Vec<u64>>, t: &EcPoint, r: &EcPoint| -> Option<EcPoint> {
        let s = e.add(k, t, r);
        let EcPoint::Affine { x: xt, y: yt } = t else { return None };
        for (fi, x) in f.iter_mut().zip(xs) {
            let EcPoint::Affine { x: xx, y: xy } = x else { return None };
            let (num, den) = match e.slope(k, t, r) {
                None => (k.sub(xx, xt), k.one()),
                Some(m) => {
                    let l = k.sub(&k.sub(xy, yt), &k.mul(&m, &k.sub(xx, xt)));
                    let EcPoint::Affine { x: xs3, .. } = &s else { return None };
                    (l, k.sub(xx, xs3))
                }
            };
            if k.is_zero(&num) || k.is_zero(&den) {
                return None;
            }
            *fi = k.mul(fi, &k.div(&num, &den)?);
        }
        Some(s)
    };
    let bits = 64 - ell.leading_zeros();
    for i in (0..bits - 1).rev() {
        for fi in f.iter_mut() {
            *fi = k.square(fi);
        }
        let tt = t.clone();
        t = step(&mut f, &tt, &tt)?;
        if (ell >> i) & 1 == 1 {
            let tt = t.clone();
            t = step(&mut f, &tt, p)?;
        }
    }
    t.is_infinity().then_some(f)
}

/// `[f_P(Q+S)/f_P(S)] / [f_Q(P-S)/f_Q(-S)]`.
fn ec_weil<R: Rng + ?Sized>(
    e: &EllipticCurve,
    k: &ExtField,
    p: &EcPoint,
    q: &EcPoint,
    ell: u64,
    rng: &mut R,
) -> Option<Vec<u64>> {
    let s = e.random_point(k, rng);
    let ms = e.neg(k, &s);
    let qs = e.add(k, q, &s);
    let ps = e.add(k, p, &ms);
    if [&s, &ms, &qs, &ps].iter().any(|x| x.is_infinity()) {
        return None;
    }
    let fp = ec_miller(e, k, p, ell, &[qs, s])?;
    let fq = ec_miller(e, k, q, ell, &[ps, ms])?;
    let num = k.div(&fp[0], &fp[1])?;
    let den = k.div(&fq[0], &fq[1])?;
    k.div(&num, &den)
}

// ---- genus 2 ----

/// `prod a(x_i)` over the affine support points of an effective divisor of degree 2
/// with `u = x^2 + s x + t`, given `c = c0 + c1 x` reduced mod `u`.
fn norm2(k: &ExtField, u: &[Vec<u64>], c: &[Vec<u64>]) -> Vec<u64> {
    let z = k.zero();
    let c0 = c.first().unwrap_or(&z);
    let c1 = c.get(1).unwrap_or(&z);
    let (t, s) = (&u[0], &u[1]);
    let a = k.square(c0);
    let b = k.mul(s, &k.mul(c0, c1));
    let d = k.mul(t, &k.square(c1));
    k.add(&k.sub(&a, &b), &d)
}

fn eval_factor(k: &ExtField, fac: &CantorFactor, at: &Mumford) -> Option<Vec<u64>> {
    let (num, den) = match fac {
        CantorFactor::Poly(d) => (norm2(k, &at.u, &poly::rem(k, d, &at.u)), k.one()),
        CantorFactor::Reduction { v, u } => {
            let n = norm2(k, &at.u, &poly::rem(k, &poly::sub(k, &at.v, v), &at.u));
            let d = norm2(k, &at.u, &poly::rem(k, u, &at.u));
            (n, d)
        }
    };
    if k.is_zero(&num) || k.is_zero(&den) {
        return None;
    }
    k.div(&num, &den)
}

/// Values at each effective degree-2 divisor of `h` with `l (A - 2 inf) = (R - deg R inf) + div(h)`,
/// `R` the reduced representative of `l [A]`.
fn g2_miller(c: &Genus2Curve, k: &ExtField, a: &Mumford, ell: u64, at: &[&Mumford]) -> Option<(Vec<Vec<u64>>, Mumford)> {
    let mut f = vec![k.one(); at.len()];
    let mut t = a.clone();
    let absorb = |f: &mut Vec<Vec<u64>>, fns: &[CantorFactor]| -> Option<()> {
        for (fi, e) in f.iter_mut().zip(at) {
            for fac in fns {
                *fi = k.mul(fi, &eval_factor(k, fac, e)?);
            }
        }
        Some(())
    };
    let bits = 64 - ell.leading_zeros();
    for i in (0..bits - 1).rev() {
        for fi in f.iter_mut() {
            *fi = k.square(fi);
        }
        let (t2, fns) = c.add_with_functions(k, &t, &t);
        absorb(&mut f, &fns)?;
        t = t2;
        if (ell >> i) & 1 == 1 {
            let (t2, fns) = c.add_with_functions(k, &t, a);
            absorb(&mut f, &fns)?;
            t = t2;
        }
    }
    Some((f, t))
}

/// Degree-0 divisor `A - S` in the class of `D`, with `A, S` effective of degree 2.
fn translate<R: Rng + ?Sized>(c: &Genus2Curve, k: &ExtField, d: &Mumford, rng: &mut R) -> Option<(Mumford, Mumford)> {
    let s = c.random_divisor(k, rng);
    let a = c.add(k, d, &s);
    (a.degree() == 2).then_some((a, s))
}

fn g2_weil<R: Rng + ?Sized>(
    c: &Genus2Curve,
    k: &ExtField,
    d1: &Mumford,
    d2: &Mumford,
    ell: u64,
    rng: &mut R,
) -> Option<Vec<u64>> {
    let (a1, s1) = translate(c, k, d1, rng)?;
    let (a2, s2) = translate(c, k, d2, rng)?;
    let (ha1, ra1) = g2_miller(c, k, &a1, ell, &[&a2, &s2])?;
    let (hs1, rs1) = g2_miller(c, k, &s1, ell, &[&a2, &s2])?;
    let (ha2, ra2) = g2_miller(c, k, &a2, ell, &[&a1, &s1])?;
    let (hs2, rs2) = g2_miller(c, k, &s2, ell, &[&a1, &s1])?;
    debug_assert!(ra1 == rs1 && ra2 == rs2);
    // g1(A2 - S2) with g1 = h_{A1} / h_{S1}
    let g1 = k.div(&k.mul(&ha1[0], &hs1[1]), &k.mul(&hs1[0], &ha1[1]))?;
    let g2 = k.div(&k.mul(&ha2[0], &hs2[1]), &k.mul(&hs2[0], &ha2[1]))?;
    k.div(&g1, &g2)
}

/// Pairing exponents of `a` against each of `bs`, i.e. one row of a Gram table.
pub fn gram_row(av: &AbelianVariety, dom: &Domain, a: &GroupPoint, bs: &[GroupPoint], ell: u64) -> Result<Vec<u64>> {
    bs.iter().map(|b| pair_theta(av, dom, a, b, ell).map(|v| v.exponent)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::{symmetric_sample, Endomorphism};
    use crate::torsion::basis_for;

    fn span(av: &AbelianVariety, b: &crate::torsion::TorsionBasis) -> Vec<GroupPoint> {
        let d = b.dim() as u32;
        let l = b.ell;
        (0..l.pow(d)).map(|n| b.point(av, &(0..d).map(|i| (n / l.pow(i)) % l).collect::<Vec<_>>()).unwrap()).collect()
    }

    #[test]
    fn elliptic_three_torsion_table() {
        let av = AbelianVariety::named("ec-ss-11").unwrap();
        let b = basis_for(&av, 3).unwrap();
        let dom = &b.domain;
        let pts = span(&av, &b);
        let e12 = weil_pairing(&av, dom, &b.points[0], &b.points[1], 3).unwrap();
        assert_ne!(e12.exponent, 0);
        for x in &pts {
            assert!(weil_pairing(&av, dom, x, x, 3).unwrap().is_one());
            let mut kernel = true;
            for y in &pts {
                let w = weil_pairing(&av, dom, x, y, 3).unwrap();
                let t = pair_theta(&av, dom, x, y, 3).unwrap();
                assert_eq!((w.exponent + t.exponent) % 3, 0);
                assert_eq!((w.exponent + weil_pairing(&av, dom, y, x, 3).unwrap().exponent) % 3, 0);
                kernel &= w.is_one();
            }
            assert_eq!(kernel, av.is_identity(x));
        }
    }

    #[test]
    fn translation_independence() {
        for (name, ell) in [("ec-ss-11", 3), ("g2-19", 3), ("ec-ord-7", 5)] {
            let av = AbelianVariety::named(name).unwrap();
            let b = basis_for(&av, ell).unwrap();
            let d = b.dim();
            for s in 0..6u64 {
                let (p, q) = (&b.points[s as usize % d], &b.points[(s as usize + 1) % d]);
                let v1 = weil_pairing_with(&av, &b.domain, p, q, ell, &mut rng::seeded(s)).unwrap();
                let v2 = weil_pairing_with(&av, &b.domain, p, q, ell, &mut rng::seeded(s + 100)).unwrap();
                assert_eq!(v1, v2);
            }
        }
    }

    #[test]
    fn genus2_bilinear_on_basis() {
        let av = AbelianVariety::named("g2-19").unwrap();
        let b = basis_for(&av, 3).unwrap();
        let dom = &b.domain;
        let (p, q) = (&b.points[0], &b.points[2]);
        let t = pair_theta(&av, dom, p, q, 3).unwrap().exponent;
        assert_ne!(t, 0);
        for a in 0..3 {
            for c in 0..3 {
                let ap = av.mul(dom, a, p).unwrap();
                let cq = av.mul(dom, c, q).unwrap();
                assert_eq!(pair_theta(&av, dom, &ap, &cq, 3).unwrap().exponent, (a as u64 * c as u64 * t) % 3);
            }
        }
        assert!(matches!(
            weil_pairing(&av, dom, &av.random_point(dom, &mut rng::seeded(1)).unwrap(), p, 3),
            Err(Error::NotTorsion(3))
        ));
    }

    #[test]
    fn model_ed_skew() {
        let av = AbelianVariety::named("model").unwrap();
        let b = basis_for(&av, 3).unwrap();
        let pts = span(&av, &b);
        let mut r = rng::seeded(3);
        let lam = symmetric_sample(&av, &mut r).unwrap();
        let three = Endomorphism::scalar(&av, 3).compose(&lam);
        for x in pts.iter().step_by(7) {
            for y in &pts {
                let u = pair_ed(&lam, &b.domain, x, y, 3).unwrap().exponent;
                let v = pair_ed(&lam, &b.domain, y, x, 3).unwrap().exponent;
                assert_eq!((u + v) % 3, 0);
                assert!(pair_ed(&three, &b.domain, x, y, 3).unwrap().is_one());
            }
        }
        let one = Endomorphism::scalar(&av, 1);
        assert_eq!(pair_ed(&one, &b.domain, &pts[1], &pts[9], 3).unwrap(), pair_theta(&av, &b.domain, &pts[1], &pts[9], 3).unwrap());
    }
}
