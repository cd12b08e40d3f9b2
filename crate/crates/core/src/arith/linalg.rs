//! Dense matrices over a small prime field.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::{Field, PrimeField};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatFp {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl fmt::Debug for MatFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatFp(mod {}) [", self.p)?;
        for r in 0..self.rows {
            write!(f, "{:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl MatFp {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        MatFp { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1 % p);
        }
        m
    }

    pub fn scalar(p: u64, n: usize, c: i64) -> Self {
        let c = c.rem_euclid(p as i64) as u64;
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| v.rem_euclid(p as i64) as u64))
            .collect();
        MatFp { p, rows: r, cols: c, data }
    }

    pub fn from_columns(p: u64, cols: &[Vec<u64>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(p, r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("matrix modulus is prime")
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| (a + b) % self.p).collect();
        MatFp { data, ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.p;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| (a + p - b) % p).collect();
        MatFp { data, ..self.clone() }
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = c.rem_euclid(self.p as i64) as u64;
        let data = self.data.iter().map(|a| a * c % self.p).collect();
        MatFp { data, ..self.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = (out.get(i, j) + a * o.get(k, j)) % p;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| (acc + self.get(i, j) * v[j]) % self.p))
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Evaluate a polynomial (coefficients mod p, low first) at this matrix.
    pub fn eval_poly(&self, coeffs: &[u64]) -> Self {
        let n = self.rows;
        let mut acc = Self::zeros(self.p, n, n);
        for &c in coeffs.iter().rev() {
            acc = acc.mul(self).add(&Self::scalar(self.p, n, c as i64));
        }
        acc
    }

    pub fn commutes_with(&self, o: &Self) -> bool {
        self.mul(o) == o.mul(self)
    }

    /// Row-reduce in place; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let f = self.field();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..self.cols {
                    let t = self.get(piv, c);
                    self.set(piv, c, self.get(row, c));
                    self.set(row, c, t);
                }
            }
            let inv = f.inv(&self.get(row, col)).expect("nonzero pivot");
            for c in 0..self.cols {
                self.set(row, c, self.get(row, c) * inv % self.p);
            }
            for r in 0..self.rows {
                if r != row {
                    let factor = self.get(r, col);
                    if factor != 0 {
                        for c in 0..self.cols {
                            let v = (self.get(r, c) + self.p - factor * self.get(row, c) % self.p) % self.p;
                            self.set(r, c, v);
                        }
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn det(&self) -> u64 {
        assert!(self.is_square());
        let f = self.field();
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a.get(r, col) != 0) else {
                return 0;
            };
            if piv != col {
                for c in 0..n {
                    let t = a.get(piv, c);
                    a.set(piv, c, a.get(col, c));
                    a.set(col, c, t);
                }
                det = f.neg(&det);
            }
            let pv = a.get(col, col);
            det = det * pv % self.p;
            let inv = f.inv(&pv).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = a.get(r, col) * inv % self.p;
                if factor != 0 {
                    for c in col..n {
                        let v = (a.get(r, c) + self.p - factor * a.get(col, c) % self.p) % self.p;
                        a.set(r, c, v);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1 % self.p);
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Self::zeros(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Ok(inv)
    }

    /// Solve `self · x = b`. Returns one solution and a basis of the kernel,
    /// or `None` if inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
        let n = self.cols;
        let mut aug = Self::zeros(self.p, self.rows, n + 1);
        for r in 0..self.rows {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n, b[r] % self.p);
        }
        let piv = aug.rref();
        if piv.last() == Some(&n) {
            return None;
        }
        let mut x = vec![0u64; n];
        for (r, &c) in piv.iter().enumerate() {
            x[c] = aug.get(r, n);
        }
        let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
        let kernel = free
            .iter()
            .map(|&fc| {
                let mut v = vec![0u64; n];
                v[fc] = 1;
                for (r, &pc) in piv.iter().enumerate() {
                    v[pc] = (self.p - aug.get(r, fc)) % self.p;
                }
                v
            })
            .collect();
        Some((x, kernel))
    }

    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        self.solve(&vec![0; self.rows]).map(|(_, k)| k).unwrap_or_default()
    }

    /// Flatten to a vector (row-major) for linear-span computations over matrices.
    pub fn flatten(&self) -> Vec<u64> {
        self.data.clone()
    }

    /// Characteristic polynomial `det(xI - A)` via Hessenberg reduction, monic, low first.
    pub fn char_poly(&self) -> Vec<u64> {
        assert!(self.is_square());
        let f = self.field();
        let p = self.p;
        let n = self.rows;
        let mut h = self.clone();
        // reduce to upper Hessenberg form by similarity transforms
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| h.get(i, m - 1) != 0) else {
                continue;
            };
            if piv != m {
                for c in 0..n {
                    let t = h.get(piv, c);
                    h.set(piv, c, h.get(m, c));
                    h.set(m, c, t);
                }
                for r in 0..n {
                    let t = h.get(r, piv);
                    h.set(r, piv, h.get(r, m));
                    h.set(r, m, t);
                }
            }
            let inv = f.inv(&h.get(m, m - 1)).expect("nonzero pivot");
            for i in m + 1..n {
                let u = h.get(i, m - 1) * inv % p;
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = (h.get(i, c) + p - u * h.get(m, c) % p) % p;
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = (h.get(r, m) + u * h.get(r, i)) % p;
                    h.set(r, m, v);
                }
            }
        }
        // recurrence on leading principal submatrices
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for k in 0..n {
            // p_{k+1} = (x - h_kk) p_k - sum_{i<k} h_{ik} * prod_{j=i+1}^{k} h_{j,j-1} * p_i
            let mut next = vec![0u64; k + 2];
            for (i, &c) in polys[k].iter().enumerate() {
                next[i + 1] = (next[i + 1] + c) % p;
                next[i] = (next[i] + p - c * h.get(k, k) % p) % p;
            }
            let mut prod = 1u64;
            for i in (0..k).rev() {
                prod = prod * h.get(i + 1, i) % p;
                let coef = h.get(i, k) * prod % p;
                if coef == 0 {
                    continue;
                }
                for (j, &c) in polys[i].iter().enumerate() {
                    next[j] = (next[j] + p - coef * c % p) % p;
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }

    /// Minimal polynomial by Krylov-style dependence among `I, A, A^2, ...`.
    pub fn min_poly(&self) -> Vec<u64> {
        let n = self.rows;
        let mut powers = vec![Self::identity(self.p, n)];
        loop {
            let d = powers.len();
            let next = powers[d - 1].mul(self);
            let cols: Vec<Vec<u64>> = powers.iter().map(|m| m.flatten()).collect();
            let sys = MatFp::from_columns(self.p, &cols);
            if let Some((x, _)) = sys.solve(&next.flatten()) {
                // A^d = sum x_i A^i
                let mut out: Vec<u64> = x.iter().map(|v| (self.p - v) % self.p).collect();
                out.push(1);
                return out;
            }
            powers.push(next);
        }
    }
}

/// Coordinates of `target` in the span of `gens` (all flattened to vectors of equal length).
/// Returns one solution and the kernel dimension.
pub fn span_coords(p: u64, gens: &[Vec<u64>], target: &[u64]) -> Option<(Vec<u64>, usize)> {
    if gens.is_empty() {
        return target.iter().all(|&v| v % p == 0).then(|| (Vec::new(), 0));
    }
    let sys = MatFp::from_columns(p, gens);
    sys.solve(target).map(|(x, k)| (x, k.len()))
}

/// Rank of a list of vectors.
pub fn span_rank(p: u64, gens: &[Vec<u64>]) -> usize {
    if gens.is_empty() {
        return 0;
    }
    MatFp::from_columns(p, gens).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly;
    use rand::{Rng, SeedableRng};

    fn det_poly_oracle(m: &MatFp, x: u64) -> u64 {
        let n = m.rows;
        let xi = MatFp::scalar(m.p, n, x as i64);
        xi.sub(m).det()
    }

    #[test]
    fn char_poly_matches_determinant_evaluation() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
        for &p in &[3u64, 5, 7, 13, 101] {
            for n in 1..=6 {
                for _ in 0..10 {
                    let data = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
                    let m = MatFp { p, rows: n, cols: n, data };
                    let cp = m.char_poly();
                    assert_eq!(cp.len(), n + 1);
                    let f = PrimeField::new(p).unwrap();
                    for x in 0..p.min(20) {
                        assert_eq!(poly::eval(&f, &cp, &x), det_poly_oracle(&m, x));
                    }
                    // Cayley–Hamilton
                    assert!(m.eval_poly(&cp).is_zero());
                    let mp = m.min_poly();
                    assert!(m.eval_poly(&mp).is_zero());
                    assert!(poly::div_exact(&f, &poly::trim(&f, cp.clone()), &mp).is_some());
                }
            }
        }
    }

    #[test]
    fn inverse_and_solve() {
        let m = MatFp::from_rows(7, &[vec![1, 2], vec![3, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), MatFp::identity(7, 2));
        let sing = MatFp::from_rows(7, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(sing.inverse(), Err(Error::SingularMatrix));
        let (x, k) = sing.solve(&[3, 6]).unwrap();
        assert_eq!(sing.mul_vec(&x), vec![3, 6]);
        assert_eq!(k.len(), 1);
        assert!(sing.solve(&[1, 0]).is_none());
    }
}
