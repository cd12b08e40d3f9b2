//! Integer polynomials and integer matrices (coefficients fit in `i128` at desk scale).

use super::field::PrimeField;
use super::linalg::MatFp;

/// Integer polynomial, low degree first, trimmed.
pub type IntPoly = Vec<i128>;

pub fn trim(mut a: IntPoly) -> IntPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn reduce_mod(a: &[i128], p: u64) -> Vec<u64> {
    let f = PrimeField::new(p).expect("prime");
    let v: Vec<u64> = a.iter().map(|&c| f.reduce_i128(c)).collect();
    crate::arith::poly::trim(&f, v)
}

pub fn mul(a: &[i128], b: &[i128]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn eval(a: &[i128], x: i128) -> i128 {
    a.iter().rev().fold(0, |acc, c| acc * x + c)
}

fn content(a: &[i128]) -> i128 {
    a.iter().fold(0i128, |g, &c| num_integer::Integer::gcd(&g, &c))
}

fn primitive(a: &[i128]) -> IntPoly {
    let c = content(a);
    if c == 0 {
        return Vec::new();
    }
    let sign = if a.last().copied().unwrap_or(0) < 0 { -1 } else { 1 };
    trim(a.iter().map(|x| sign * x / c).collect())
}

/// Pseudo-remainder of `a` by `b`.
fn prem(a: &[i128], b: &[i128]) -> IntPoly {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr];
        let mut next: Vec<i128> = r.iter().map(|c| c * lb).collect();
        for j in 0..=db {
            next[dr - db + j] -= lr * b[j];
        }
        r = primitive(&trim(next));
    }
    r
}

/// Primitive gcd over `Z[x]` (positive leading coefficient).
pub fn gcd(a: &[i128], b: &[i128]) -> IntPoly {
    let (mut r0, mut r1) = (primitive(a), primitive(b));
    while !r1.is_empty() {
        let r = prem(&r0, &r1);
        r0 = r1;
        r1 = primitive(&r);
    }
    primitive(&r0)
}

fn derivative(a: &[i128]) -> IntPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * i as i128).collect())
}

/// Exact division over `Z`, `None` if not exact.
pub fn div_exact(a: &[i128], b: &[i128]) -> Option<IntPoly> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return r.iter().all(|&c| c == 0).then(Vec::new);
    }
    let mut q = vec![0i128; r.len() - db];
    for i in (db..r.len()).rev() {
        if r[i] % b[db] != 0 {
            return None;
        }
        let c = r[i] / b[db];
        for j in 0..=db {
            r[i - db + j] -= c * b[j];
        }
        q[i - db] = c;
    }
    r.iter().all(|&c| c == 0).then(|| trim(q))
}

/// Square-free part over `Q` of a monic polynomial (monic result).
pub fn squarefree_part(a: &[i128]) -> IntPoly {
    let g = gcd(a, &derivative(a));
    if g.len() <= 1 {
        return a.to_vec();
    }
    let q = div_exact(&primitive(a), &g).expect("gcd divides");
    primitive(&q)
}

/// Dense integer square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat {
    pub n: usize,
    pub data: Vec<i128>,
}

impl IntMat {
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        IntMat { n, data: rows.iter().flatten().map(|&v| v as i128).collect() }
    }

    pub fn zeros(n: usize) -> Self {
        IntMat { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.n + c]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.get(r, c) as i64).collect())
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        IntMat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: i128) -> Self {
        IntMat { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                t.data[c * n + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn trace(&self) -> i128 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn to_fp(&self, p: u64) -> MatFp {
        let f = PrimeField::new(p).expect("prime");
        MatFp {
            p,
            rows: self.n,
            cols: self.n,
            data: self.data.iter().map(|&v| f.reduce_i128(v)).collect(),
        }
    }

    /// `det(xI - A)` by Faddeev–LeVerrier (exact integer divisions), monic, low first.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.n;
        let mut coeffs = vec![0i128; n + 1];
        coeffs[n] = 1;
        let mut m = Self::zeros(n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(A M_k)/k
            m = self.mul(&m).add(&Self::identity(n).scale(coeffs[n - k + 1]));
            let am = self.mul(&m);
            coeffs[n - k] = -am.trace() / k as i128;
        }
        coeffs
    }

    pub fn det(&self) -> i128 {
        let cp = self.char_poly();
        if self.n % 2 == 0 {
            cp[0]
        } else {
            -cp[0]
        }
    }
}
