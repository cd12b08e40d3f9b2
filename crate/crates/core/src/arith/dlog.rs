use std::collections::HashMap;
use std::hash::Hash;

use crate::{Error, Result};

/// Baby-step giant-step: the `x ∈ [0, n)` with `g^x = h`, where the group law is
/// `op` and `n` is the order of `g` (`n < 2^20`). Works for multiplicative and additive
/// groups alike since only the operation is used.
pub fn bsgs_dlog<T, Op>(g: &T, h: &T, n: u64, identity: &T, op: Op) -> Result<u64>
where
    T: Clone + Eq + Hash,
    Op: Fn(&T, &T) -> T,
{
    if n == 0 || n >= 1 << 20 {
        return Err(Error::SizeCap(format!("group order {n}")));
    }
    let m = (n as f64).sqrt().ceil() as u64;
    let mut table = HashMap::with_capacity(m as usize);
    let mut cur = identity.clone();
    for j in 0..m {
        table.entry(cur.clone()).or_insert(j);
        cur = op(&cur, g);
    }
    // giant step g^{-m} = g^{n - m mod n}
    let steps = (n - m % n) % n;
    let giant = power(g, steps, identity, &op);
    let mut gamma = h.clone();
    for i in 0..=m {
        if let Some(&j) = table.get(&gamma) {
            let x = (i * m + j) % n;
            return Ok(x);
        }
        gamma = op(&gamma, &giant);
    }
    Err(Error::NotInSubgroup)
}

fn power<T: Clone, Op: Fn(&T, &T) -> T>(g: &T, mut e: u64, identity: &T, op: &Op) -> T {
    let mut acc = identity.clone();
    let mut base = g.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = op(&acc, &base);
        }
        base = op(&base, &base);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let mulmod = |a: &u64, b: &u64| a * b % 11;
        // exhaustive power table mod 11
        let table: Vec<u64> = (0..10).scan(1u64, |s, _| {
            let v = *s;
            *s = *s * 2 % 11;
            Some(v)
        }).collect();
        let oracle = table.iter().position(|&v| v == 9).unwrap() as u64;
        assert_eq!(oracle, 6);
        assert_eq!(bsgs_dlog(&2, &9, 10, &1, mulmod).unwrap(), 6);
        assert_eq!(bsgs_dlog(&2, &1, 10, &1, mulmod).unwrap(), 0);
        assert_eq!(bsgs_dlog(&2, &2, 10, &1, mulmod).unwrap(), 1);
        // 3 generates the index-2 subgroup of F_11^*, which misses 2
        assert_eq!(bsgs_dlog(&3, &2, 5, &1, mulmod), Err(Error::NotInSubgroup));
    }

    #[test]
    fn additive_group() {
        let add = |a: &u64, b: &u64| (a + b) % 1009;
        for x in [0u64, 1, 500, 1008] {
            let h = 7 * x % 1009;
            assert_eq!(bsgs_dlog(&7, &h, 1009, &0, add).unwrap(), x);
        }
    }
}
