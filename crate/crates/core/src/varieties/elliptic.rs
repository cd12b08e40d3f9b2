//! Short Weierstrass curves `y^2 = x^3 + a x + b` over extensions of a prime field.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::field::{ExtField, Field};
use crate::arith::poly;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EcPoint {
    Infinity,
    Affine { x: Vec<u64>, y: Vec<u64> },
}

impl EcPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, EcPoint::Infinity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    pub p: u64,
    pub a: u64,
    pub b: u64,
}

impl EllipticCurve {
    pub fn new(p: u64, a: i64, b: i64) -> Result<Self> {
        let f = crate::arith::PrimeField::new(p)?;
        if p == 2 || p == 3 {
            return Err(Error::OutOfScope("characteristic 2 or 3".into()));
        }
        let (a, b) = (f.from_i64(a), f.from_i64(b));
        // 4a^3 + 27b^2 != 0
        let disc = f.add(&f.mul(&4, &f.mul(&a, &f.mul(&a, &a))), &f.mul(&27, &f.mul(&b, &b)));
        if disc == 0 {
            return Err(Error::SingularCurve);
        }
        Ok(EllipticCurve { p, a, b })
    }

    pub fn rhs(&self, k: &ExtField, x: &Vec<u64>) -> Vec<u64> {
        let x2 = k.square(x);
        let x3 = k.mul(&x2, x);
        k.add(&k.add(&x3, &k.mul(&k.from_base(self.a), x)), &k.from_base(self.b))
    }

    pub fn contains(&self, k: &ExtField, pt: &EcPoint) -> bool {
        match pt {
            EcPoint::Infinity => true,
            EcPoint::Affine { x, y } => {
                x.len() == k.degree() && y.len() == k.degree() && k.square(y) == self.rhs(k, x)
            }
        }
    }

    pub fn neg(&self, k: &ExtField, pt: &EcPoint) -> EcPoint {
        match pt {
            EcPoint::Infinity => EcPoint::Infinity,
            EcPoint::Affine { x, y } => EcPoint::Affine { x: x.clone(), y: k.neg(y) },
        }
    }

    /// Chord-tangent slope for `P + Q`, or `None` when the sum is the identity.
    pub fn slope(&self, k: &ExtField, p: &EcPoint, q: &EcPoint) -> Option<Vec<u64>> {
        let (EcPoint::Affine { x: x1, y: y1 }, EcPoint::Affine { x: x2, y: y2 }) = (p, q) else {
            return None;
        };
        if x1 == x2 {
            if k.is_zero(&k.add(y1, y2)) {
                return None;
            }
            let num = k.add(&k.mul(&k.from_i64(3), &k.square(x1)), &k.from_base(self.a));
            let den = k.add(y1, y1);
            k.div(&num, &den)
        } else {
            k.div(&k.sub(y2, y1), &k.sub(x2, x1))
        }
    }

    pub fn add(&self, k: &ExtField, p: &EcPoint, q: &EcPoint) -> EcPoint {
        match (p, q) {
            (EcPoint::Infinity, _) => q.clone(),
            (_, EcPoint::Infinity) => p.clone(),
            (EcPoint::Affine { x: x1, y: y1 }, EcPoint::Affine { x: x2, .. }) => {
                let Some(m) = self.slope(k, p, q) else {
                    return EcPoint::Infinity;
                };
                let x3 = k.sub(&k.sub(&k.square(&m), x1), x2);
                let y3 = k.sub(&k.mul(&m, &k.sub(x1, &x3)), y1);
                EcPoint::Affine { x: x3, y: y3 }
            }
        }
    }

    pub fn random_point<R: Rng + ?Sized>(&self, k: &ExtField, rng: &mut R) -> EcPoint {
        loop {
            let x = k.random(rng);
            if let Some(y) = k.sqrt(&self.rhs(k, &x)) {
                let y = if rng.gen::<bool>() { k.neg(&y) } else { y };
                return EcPoint::Affine { x, y };
            }
        }
    }

    pub fn frobenius(&self, k: &ExtField, pt: &EcPoint) -> EcPoint {
        match pt {
            EcPoint::Infinity => EcPoint::Infinity,
            EcPoint::Affine { x, y } => EcPoint::Affine { x: k.frobenius(x), y: k.frobenius(y) },
        }
    }

    /// `(x, y) -> (-x, i y)` on `y^2 = x^3 + a x`; requires `i` in the field.
    pub fn distortion(&self, k: &ExtField, pt: &EcPoint) -> Result<EcPoint> {
        if self.b != 0 {
            return Err(Error::GeneratorUndefined("distortion needs b = 0".into()));
        }
        let i = sqrt_minus_one(k)
            .ok_or_else(|| Error::GeneratorUndefined(format!("distortion over degree {}", k.degree())))?;
        Ok(match pt {
            EcPoint::Infinity => EcPoint::Infinity,
            EcPoint::Affine { x, y } => EcPoint::Affine { x: k.neg(x), y: k.mul(&i, y) },
        })
    }

    /// Affine points over `F_p` by exhaustive enumeration, plus infinity.
    pub fn count_base_points(&self) -> u64 {
        let f = crate::arith::PrimeField::new(self.p).expect("prime");
        let mut n = 1;
        for x in 0..self.p {
            let r = f.add(&f.add(&f.mul(&x, &f.mul(&x, &x)), &f.mul(&self.a, &x)), &self.b);
            n += if r == 0 {
                1
            } else if f.is_square(&r) {
                2
            } else {
                0
            };
        }
        n
    }
}

/// The smallest root of `x^2 + 1` in the field's canonical order.
pub fn sqrt_minus_one(k: &ExtField) -> Option<Vec<u64>> {
    let one = k.one();
    let f = vec![one.clone(), k.zero(), one];
    let mut rng = crate::rng::seeded(0);
    poly::roots(k, &f, &mut rng).into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve11() -> (EllipticCurve, ExtField) {
        (EllipticCurve::new(11, 1, 0).unwrap(), ExtField::new(11, 1).unwrap())
    }

    fn pt(x: u64, y: u64) -> EcPoint {
        EcPoint::Affine { x: vec![x], y: vec![y] }
    }

    /// All affine points over F_11 by scanning x and y.
    fn table(e: &EllipticCurve) -> Vec<EcPoint> {
        let mut out = vec![EcPoint::Infinity];
        for x in 0..e.p {
            for y in 0..e.p {
                if (y * y) % e.p == (x * x * x + e.a * x + e.b) % e.p {
                    out.push(pt(x, y));
                }
            }
        }
        out
    }

    #[test]
    fn counts_by_scan() {
        let (e, _) = curve11();
        assert_eq!(table(&e).len(), 12);
        assert_eq!(e.count_base_points(), 12);
        let e7 = EllipticCurve::new(7, 1, 0).unwrap();
        assert_eq!(table(&e7).len(), 8);
        assert_eq!(e7.count_base_points(), 8);
        assert_eq!(EllipticCurve::new(7, 0, 2).unwrap().count_base_points(), 9);
        assert_eq!(EllipticCurve::new(7, 0, 0), Err(Error::SingularCurve));
    }

    /// 2P by exhaustive search for the tangent line: (m, c, x3) with
    /// x^3 + a x + b - (m x + c)^2 = (x - x0)^2 (x - x3) at every x in F_p; then -2P = (x3, m x3 + c).
    fn double_by_tangent_scan(e: &EllipticCurve, x0: u64, y0: u64) -> EcPoint {
        let p = e.p;
        for m in 0..p {
            let c = (y0 + p * p - m * x0 % p) % p;
            for x3 in 0..p {
                let same = (0..p).all(|x| {
                    let l = (m * x + c) % p;
                    let lhs = (x * x % p * x + e.a * x + e.b + p - l * l % p) % p;
                    let d = (x + p - x0) % p;
                    lhs == d * d % p * ((x + p - x3) % p) % p
                });
                if same {
                    return pt(x3, (p - (m * x3 + c) % p) % p);
                }
            }
        }
        // only a vertical tangent
        assert_eq!(y0, 0);
        EcPoint::Infinity
    }

    #[test]
    fn doubling_matches_tangent_scan() {
        let (e, k) = curve11();
        let p = pt(5, 3);
        assert!(e.contains(&k, &p));
        assert_eq!(e.add(&k, &p, &p), double_by_tangent_scan(&e, 5, 3));
        // (5,3) has order 3, so its double is its negative
        assert_eq!(e.add(&k, &p, &p), pt(5, 8));
        for q in table(&e).into_iter().skip(1) {
            let EcPoint::Affine { x, y } = &q else { unreachable!() };
            assert_eq!(e.add(&k, &q, &q), double_by_tangent_scan(&e, x[0], y[0]), "{q:?}");
        }
        assert_eq!(e.add(&k, &p, &EcPoint::Infinity), p);
        assert!(e.add(&k, &p, &e.neg(&k, &p)).is_infinity());
    }

    #[test]
    fn distortion_squares_to_negation() {
        let e = EllipticCurve::new(7, 1, 0).unwrap();
        let k = ExtField::new(7, 2).unwrap();
        let mut rng = crate::rng::seeded(3);
        for _ in 0..50 {
            let p = e.random_point(&k, &mut rng);
            let d = e.distortion(&k, &p).unwrap();
            assert!(e.contains(&k, &d));
            assert_eq!(e.distortion(&k, &d).unwrap(), e.neg(&k, &p));
        }
        assert!(e.distortion(&ExtField::new(7, 1).unwrap(), &pt(0, 0)).is_err());
    }
}
