//! Synthetic backend: an explicit order of integer matrices acting on `(Z/m)^{2g}`
//! with an alternating form, so the Weil pairing and Rosati involution are exact.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::intpoly::IntMat;
use crate::arith::qlinalg::{self, q};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFixture {
    #[serde(rename = "J")]
    pub j: Vec<Vec<i64>>,
    pub basis: Vec<Vec<i64>>,
    pub g: usize,
    pub table: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelVariety {
    pub g: usize,
    pub basis: Vec<IntMat>,
    pub j: IntMat,
    pub table: Vec<Vec<Vec<i64>>>,
    /// Expansion of each `B_i^dagger` in the basis.
    pub adjoints: Vec<Vec<i64>>,
}

/// `(-1)^(n+1) (A^(n-1) + c_(n-1) A^(n-2) + ... + c_1)` from Cayley–Hamilton.
fn adjugate(a: &IntMat) -> IntMat {
    let n = a.n;
    let cp = a.char_poly();
    let mut acc = IntMat::zeros(n);
    for c in cp[1..].iter().rev() {
        acc = a.mul(&acc).add(&IntMat::identity(n).scale(*c));
    }
    if n % 2 == 0 {
        acc.scale(-1)
    } else {
        acc
    }
}

impl ModelVariety {
    pub fn from_fixture(fx: &ModelFixture) -> Result<Self> {
        let bad = |m: &str| Error::InvalidData(format!("model fixture: {m}"));
        let g = fx.g;
        if !(1..=2).contains(&g) {
            return Err(bad("g must be 1 or 2"));
        }
        let d = 2 * g;
        if fx.j.len() != d || fx.j.iter().any(|r| r.len() != d) {
            return Err(bad("J shape"));
        }
        let j = IntMat::from_rows(&fx.j);
        if j.transpose() != j.scale(-1) || j.det() == 0 {
            return Err(bad("J must be antisymmetric and invertible"));
        }
        let n = fx.basis.len();
        if n == 0 || fx.basis.iter().any(|b| b.len() != d * d) {
            return Err(bad("basis shape"));
        }
        let basis: Vec<IntMat> =
            fx.basis.iter().map(|b| IntMat { n: d, data: b.iter().map(|&v| v as i128).collect() }).collect();
        if basis[0] != IntMat::identity(d) {
            return Err(bad("B1 must be the identity"));
        }
        let flat: Vec<Vec<_>> = basis.iter().map(|b| b.data.iter().map(|&v| q(v as i64)).collect()).collect();
        if qlinalg::rank(&flat) != n {
            return Err(bad("basis is not linearly independent"));
        }
        if fx.table.len() != n || fx.table.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
            return Err(bad("table shape"));
        }
        let mut mv = ModelVariety { g, basis, j, table: fx.table.clone(), adjoints: Vec::new() };
        for a in 0..n {
            for b in 0..n {
                let prod = mv.basis[a].mul(&mv.basis[b]);
                if prod != mv.combine(&fx.table[a][b]) {
                    return Err(bad(&format!("structure constant B{}*B{} inexact", a + 1, b + 1)));
                }
            }
        }
        let mut adjoints = Vec::with_capacity(n);
        for b in &mv.basis {
            let adj = mv.adjoint(b)?;
            adjoints.push(mv.coords(&adj).ok_or_else(|| bad("order not closed under the adjoint"))?);
        }
        mv.adjoints = adjoints;
        Ok(mv)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let fx: ModelFixture = serde_json::from_str(s)?;
        Self::from_fixture(&fx)
    }

    pub fn to_fixture(&self) -> ModelFixture {
        ModelFixture {
            j: self.j.rows(),
            basis: self.basis.iter().map(|b| b.data.iter().map(|&v| v as i64).collect()).collect(),
            g: self.g,
            table: self.table.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.g
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn generator_names(&self) -> Vec<String> {
        (1..=self.rank()).map(|i| format!("B{i}")).collect()
    }

    /// `sum c_i B_i`.
    pub fn combine(&self, coeffs: &[i64]) -> IntMat {
        let mut acc = IntMat::zeros(self.dim());
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                acc = acc.add(&b.scale(*c as i128));
            }
        }
        acc
    }

    /// Integer coordinates in the basis, if the matrix lies in the order.
    pub fn coords(&self, m: &IntMat) -> Option<Vec<i64>> {
        let cols: Vec<Vec<_>> = self.basis.iter().map(|b| b.data.iter().map(|&v| q(v as i64)).collect()).collect();
        let target: Vec<_> = m.data.iter().map(|&v| q(v as i64)).collect();
        let x = qlinalg::solve(&cols, &target)?;
        x.iter().map(qlinalg::to_i64).collect()
    }

    /// `J^{-1} lambda^T J`.
    pub fn adjoint(&self, m: &IntMat) -> Result<IntMat> {
        let det = self.j.det();
        let num = adjugate(&self.j).mul(&m.transpose()).mul(&self.j);
        if num.data.iter().any(|v| v % det != 0) {
            return Err(Error::InvalidData("adjoint leaves the integer matrices".into()));
        }
        Ok(IntMat { n: num.n, data: num.data.iter().map(|v| v / det).collect() })
    }

    /// `P^T J Q mod level`.
    pub fn pairing(&self, level: u64, p: &[u64], qv: &[u64]) -> u64 {
        let d = self.dim();
        let mut acc: i128 = 0;
        for r in 0..d {
            for c in 0..d {
                acc += p[r] as i128 * self.j.get(r, c) * qv[c] as i128;
            }
        }
        acc.rem_euclid(level as i128) as u64
    }

    /// `w + w^dagger` for `w` with coefficients in `[-2, 2]`, as basis coefficients.
    pub fn symmetric_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<i64> {
        let w: Vec<i64> = (0..self.rank()).map(|_| rng.gen_range(-2..=2)).collect();
        let mut out = w.clone();
        for (i, c) in w.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(&self.adjoints[i]) {
                *o += c * a;
            }
        }
        out
    }

    pub fn is_symmetric(&self, m: &IntMat) -> bool {
        self.adjoint(m).map(|a| &a == m).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::intpoly::IntMat;

    fn g2() -> ModelVariety {
        ModelVariety::from_json(include_str!("../fixtures/model_g2.json")).unwrap()
    }

    #[test]
    fn fixture_roundtrip_and_validation() {
        let m = g2();
        let s = serde_json::to_string(&m.to_fixture()).unwrap();
        assert_eq!(s + "\n", include_str!("../fixtures/model_g2.json"));
        let mut fx = m.to_fixture();
        fx.table[1][2][0] += 1;
        assert!(ModelVariety::from_fixture(&fx).is_err());
        let mut fx = m.to_fixture();
        fx.j[0][2] = 2;
        assert!(ModelVariety::from_fixture(&fx).is_err());
        assert!(ModelVariety::from_json(include_str!("../fixtures/model_g1.json")).is_ok());
    }

    #[test]
    fn pairing_examples() {
        let m = g2();
        let e = |i: usize| {
            let mut v = vec![0u64; 4];
            v[i] = 1;
            v
        };
        assert_eq!(m.pairing(5, &e(0), &e(2)), 1);
        assert_eq!(m.pairing(5, &e(2), &e(0)), 4);
        assert_eq!(m.pairing(5, &[1, 2, 3, 4], &[1, 2, 3, 4]), 0);
    }

    /// Oracle: <lambda P, Q> = <P, mu Q> on every pair in (Z/3)^4 x (Z/3)^4.
    fn adjoint_identity_holds(m: &ModelVariety, lam: &IntMat, mu: &IntMat) -> bool {
        let pts: Vec<Vec<u64>> = (0..81u64).map(|n| (0..4).map(|i| (n / 3u64.pow(i)) % 3).collect()).collect();
        let act = |a: &IntMat, v: &[u64]| -> Vec<u64> {
            (0..4).map(|r| (0..4).map(|c| a.get(r, c) * v[c] as i128).sum::<i128>().rem_euclid(3) as u64).collect()
        };
        pts.iter().all(|p| pts.iter().all(|qv| m.pairing(3, &act(lam, p), qv) == m.pairing(3, p, &act(mu, qv))))
    }

    #[test]
    fn adjoint_matches_exhaustive_identity() {
        let m = g2();
        for (i, b) in m.basis.iter().enumerate() {
            let a = m.adjoint(b).unwrap();
            assert_eq!(m.adjoint(&a).unwrap(), *b);
            assert_eq!(m.combine(&m.adjoints[i]), a);
            assert!(adjoint_identity_holds(&m, b, &a));
        }
        assert_eq!(m.adjoint(&IntMat::identity(4)).unwrap(), IntMat::identity(4));
    }

    #[test]
    fn symmetric_samples() {
        let m = g2();
        let mut rng = crate::rng::seeded(2);
        let mut samples = Vec::new();
        let mut found_noncommuting = false;
        for _ in 0..100 {
            let s = m.combine(&m.symmetric_sample(&mut rng));
            assert!(m.is_symmetric(&s));
            if samples.iter().any(|t: &IntMat| t.mul(&s) != s.mul(t)) {
                found_noncommuting = true;
                break;
            }
            samples.push(s);
        }
        assert!(found_noncommuting);
        assert!(m.is_symmetric(&IntMat::identity(4)));
    }
}
