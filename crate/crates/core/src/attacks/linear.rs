//! Attacks that only need linear algebra on `A[l']`.

use crate::arith::linalg::{span_rank, MatFp};
use crate::endo::Endomorphism;
use crate::{Error, Result};

use super::{flat_matrices, identity_flat, CrtVec, DlpInstance};

/// `M_1 = Z ⊕ M`: solve `target = a_0 + sum a_i mu_i` on `A[l']` for small `l'`, combine
/// the `a_0` by CRT, reduce mod `l`. Any `l'` where `a_0` is not determined (the identity
/// lies in the span of the samples mod `l'`) is reported as an error.
pub fn attack_direct_sum(inst: &DlpInstance) -> Result<u64> {
    let n = inst.av.dim();
    let mut crt = CrtVec::default();
    for lp in inst.aux_primes() {
        let samples: Vec<&Endomorphism> = inst.samples.iter().collect();
        let mut cols = vec![identity_flat(lp, n)];
        cols.extend(flat_matrices(&samples, lp)?);
        let target = inst.target.matrix(lp)?.flatten();
        let Some((x, kernel)) = MatFp::from_columns(lp, &cols).solve(&target) else {
            return Err(Error::NotInClass(format!("target is not 1 + samples mod {lp}")));
        };
        if kernel.iter().any(|k| k[0] != 0) {
            return Err(Error::NotInClass(format!("a_0 ambiguous mod {lp}: the identity lies in the sample span")));
        }
        if let Some(a) = crt.push(&[x[0]], lp)? {
            return Ok(a[0].rem_euclid(inst.ell as i128) as u64);
        }
    }
    Err(Error::HeuristicBound("a_0 did not stabilize".into()))
}

/// Integer coordinates of `e` in an effective basis, from unique solutions mod `l'` and CRT.
fn decompose(inst: &DlpInstance, e: &Endomorphism, basis: &[Endomorphism]) -> Result<Vec<i128>> {
    let refs: Vec<&Endomorphism> = basis.iter().collect();
    let mut crt = CrtVec::default();
    for lp in inst.aux_primes() {
        let cols = flat_matrices(&refs, lp)?;
        let Some((x, kernel)) = MatFp::from_columns(lp, &cols).solve(&e.matrix(lp)?.flatten()) else {
            return Err(Error::NotInClass(format!("element not covered by the basis mod {lp}")));
        };
        if !kernel.is_empty() {
            continue;
        }
        if let Some(v) = crt.push(&x, lp)? {
            return Ok(v);
        }
    }
    Err(Error::HeuristicBound("basis coordinates did not stabilize".into()))
}

/// With an effective basis of `M' ⊇ M_1`: decompose 1, the samples and the target, then
/// solve `v = x_0 v_0 + sum x_i u_i mod l` and return `x_0`.
pub fn attack_effective_basis(inst: &DlpInstance, basis: &[Endomorphism]) -> Result<u64> {
    let l = inst.ell;
    let one = Endomorphism::scalar(&inst.av, 1);
    let v0 = decompose(inst, &one, basis)?;
    let us: Vec<Vec<i128>> = inst.samples.iter().map(|s| decompose(inst, s, basis)).collect::<Result<_>>()?;
    let v = decompose(inst, &inst.target, basis)?;
    let red = |x: &[i128]| -> Vec<u64> { x.iter().map(|c| c.rem_euclid(l as i128) as u64).collect() };
    let mut cols = vec![red(&v0)];
    cols.extend(us.iter().map(|u| red(u)));
    let Some((x, kernel)) = MatFp::from_columns(l, &cols).solve(&red(&v)) else {
        return Err(Error::NeedMoreSamples);
    };
    if kernel.iter().any(|k| k[0] != 0) || span_rank(l, &cols[1..]) == span_rank(l, &cols) {
        return Err(Error::NotInClass("1 lies in M mod l".into()));
    }
    Ok(x[0])
}
