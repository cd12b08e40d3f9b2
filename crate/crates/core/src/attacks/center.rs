//! The attack through the center `Q(pi)`, where `iota` is computable.

use crate::arith::crt::{crt_combine, rational_reconstruct};
use crate::arith::field::{Field, PrimeField};
use crate::arith::intpoly::squarefree_part;
use crate::arith::linalg::MatFp;
use crate::endo::{Endomorphism, Term, Word};
use crate::rng;
use crate::varieties::{Domain, FROBENIUS};
use crate::{Error, Result};

use super::{flat_matrices, DlpInstance};

/// Words spanning the center: `pi^i` for `i < deg` of the square-free Frobenius
/// polynomial, or `{1, B5}` on the model.
fn center_basis(inst: &DlpInstance) -> Result<Vec<Endomorphism>> {
    let av = &inst.av;
    if let Some(m) = av.model() {
        let mut b = vec![Endomorphism::scalar(av, 1)];
        if m.g == 2 {
            b.push(Endomorphism::generator(av, "B5")?);
        }
        return Ok(b);
    }
    let e = squarefree_part(&av.frobenius_char_poly()?).len() - 1;
    (0..e).map(|i| Endomorphism::new(av, Word(vec![Term(1, vec![FROBENIUS.to_string(); i])]))).collect()
}

const CHECK_DEGREE: usize = 12;

fn skippable(e: &Error) -> bool {
    matches!(e, Error::TorsionFieldTooLarge(_) | Error::SizeCap(_))
}

/// `(numerators, m)` with `chi = m^{-1} sum n_i basis_i`: coordinates on `A[l']` for the
/// usable auxiliary primes, CRT and rational reconstruction, each candidate checked on
/// points of `A(F_{q^k})` for a large `k` (so modulo the group exponent).
fn iota(inst: &DlpInstance, chi: &Endomorphism, basis: &[Endomorphism]) -> Result<(Vec<i128>, i128)> {
    let refs: Vec<&Endomorphism> = basis.iter().collect();
    let mut residues: Vec<Vec<(i128, i128)>> = vec![Vec::new(); basis.len()];
    let mut tried: Option<(Vec<i128>, i128)> = None;
    for lp in inst.aux_primes() {
        let (cols, target) = match (flat_matrices(&refs, lp), chi.matrix(lp)) {
            (Ok(c), Ok(t)) => (c, t.flatten()),
            (Err(e), _) | (_, Err(e)) if skippable(&e) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let Some((x, kernel)) = MatFp::from_columns(lp, &cols).solve(&target) else {
            return Err(Error::NotInCenter);
        };
        if !kernel.is_empty() {
            continue;
        }
        for (r, v) in residues.iter_mut().zip(&x) {
            r.push((*v as i128, lp as i128));
        }
        let rec = residues
            .iter()
            .map(|r| crt_combine(r).ok().and_then(|(v, m)| rational_reconstruct(v, m)))
            .collect::<Option<Vec<_>>>();
        let Some(rec) = rec else { continue };
        let m = rec.iter().fold(1i128, |acc, (_, d)| num_integer::lcm(acc, *d));
        let cur = (rec.iter().map(|(n, d)| n * (m / d)).collect::<Vec<_>>(), m);
        if tried.as_ref() == Some(&cur) {
            continue;
        }
        if holds_on_points(inst, chi, basis, &cur.0, cur.1)? {
            return Ok(cur);
        }
        tried = Some(cur);
    }
    Err(Error::NotInCenter)
}

/// `m chi = sum n_i basis_i` on 5 random points of `A(F_{q^12})` (the model: level 1000003).
fn holds_on_points(inst: &DlpInstance, chi: &Endomorphism, basis: &[Endomorphism], n: &[i128], m: i128) -> Result<bool> {
    let av = &*inst.av;
    let dom = if av.is_model() { Domain::Model { level: 1_000_003 } } else { av.curve_domain(CHECK_DEGREE)? };
    let mut diff = chi.scale(m as i64);
    for (c, b) in n.iter().zip(basis) {
        diff = diff.sub(&b.scale(*c as i64));
    }
    let mut r = rng::stream(0xce17e5, 0);
    for _ in 0..5 {
        let p = av.random_point(&dom, &mut r)?;
        if !av.is_identity(&diff.apply(&dom, &p)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `M` inside the center: express every sample and the target in the center basis, then
/// solve `iota(target) - a ∈ iota(M) mod l`.
pub fn attack_center(inst: &DlpInstance) -> Result<u64> {
    let l = inst.ell;
    let fl = PrimeField::new(l)?;
    let basis = center_basis(inst)?;
    let red = |chi: &Endomorphism| -> Result<Vec<u64>> {
        let (n, m) = iota(inst, chi, &basis)?;
        let minv = fl.inv(&(m.rem_euclid(l as i128) as u64)).ok_or(Error::NotInCenter)?;
        Ok(n.iter().map(|v| fl.mul(&(v.rem_euclid(l as i128) as u64), &minv)).collect())
    };
    let v = red(&inst.target)?;
    let mut one = vec![0u64; basis.len()];
    one[0] = 1;
    let mut cols = vec![one];
    for s in &inst.samples {
        cols.push(red(s)?);
    }
    let Some((x, kernel)) = MatFp::from_columns(l, &cols).solve(&v) else {
        return Err(Error::NotInClass("target - a is not in M mod l for any a".into()));
    };
    if kernel.iter().any(|k| k[0] != 0) {
        return Err(Error::NotInClass("1 lies in iota(M) mod l".into()));
    }
    Ok(x[0])
}
