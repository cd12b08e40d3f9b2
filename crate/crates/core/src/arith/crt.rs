//! Chinese remaindering and rational reconstruction on `i128`.

use crate::{Error, Result};

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

/// Combine residues `(value, modulus)` into the unique representative in `[0, M)`,
/// returned with `M` = product of the moduli.
pub fn crt_combine(residues: &[(i128, i128)]) -> Result<(i128, i128)> {
    let mut acc = (0i128, 1i128);
    for &(v, m) in residues {
        if m <= 0 {
            return Err(Error::InvalidData(format!("modulus {m}")));
        }
        let (g, s, _) = egcd(acc.1, m);
        if g.abs() != 1 {
            return Err(Error::NonCoprimeModuli);
        }
        let big = acc.1.checked_mul(m).ok_or_else(|| Error::SizeCap("CRT modulus".into()))?;
        let v = v.rem_euclid(m);
        // x = acc.0 + acc.1 * ((v - acc.0) * s mod m)
        let t = ((v - acc.0).rem_euclid(m) * s.rem_euclid(m)).rem_euclid(m);
        let x = (acc.0 + acc.1 * t).rem_euclid(big);
        acc = (x, big);
    }
    Ok(acc)
}

/// Signed representative of `v mod m` in `(-m/2, m/2]`.
pub fn signed_rep(v: i128, m: i128) -> i128 {
    let r = v.rem_euclid(m);
    if r > m / 2 {
        r - m
    } else {
        r
    }
}

fn isqrt(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Find `(n, d)` with `v d ≡ n (mod m)`, `|n| ≤ B`, `0 < d ≤ B`, `gcd(n, d) = 1`,
/// `B = ⌊√(m/2)⌋`. `None` when no such pair exists.
pub fn rational_reconstruct(v: i128, m: i128) -> Option<(i128, i128)> {
    let bound = isqrt(m / 2);
    let (mut r0, mut r1) = (m, v.rem_euclid(m));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    let _ = (r0, t0);
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    if egcd(n.abs(), d).0.abs() != 1 {
        return None;
    }
    debug_assert_eq!((v * d - n).rem_euclid(m), 0);
    Some((n, d))
}
