//! Planted instances with a known discrete log, one generator per attack class, plus the
//! negative-control instances.

use std::sync::Arc;

use rand::Rng;

use crate::arith::linalg::{span_rank, MatFp};
use crate::endo::{random_word, symmetric_sample, Endomorphism, Term, Word};
use crate::trimap::{setup_with, Construction};
use crate::varieties::{AbelianVariety, FROBENIUS};
use crate::{Error, Result};

use super::{AttackName, DlpInstance};

const DRAWS: usize = 64;

/// Default `(backend, l)` for each attack's planted class.
pub fn default_class(name: AttackName, trial: u64) -> (&'static str, u64) {
    match name {
        AttackName::DirectSum => ("model", 7),
        AttackName::ScalarDegree if trial % 2 == 0 => ("model-g1", 7),
        AttackName::ScalarDegree => ("model", 7),
        AttackName::Dim1 => ("model", 7),
        AttackName::Commuting => ("model", 7),
        AttackName::Noncommutative => ("model", 11),
        AttackName::Center => ("ec-ord-7", 5),
        AttackName::EffectiveBasis => ("model", 11),
    }
}

fn rank_mod(es: &[&Endomorphism], p: u64) -> Result<usize> {
    let v: Vec<Vec<u64>> = es.iter().map(|e| e.matrix(p).map(|m| m.flatten())).collect::<Result<_>>()?;
    Ok(span_rank(p, &v))
}

/// `1, xs...` independent mod `p`.
fn free_with_one(av: &Arc<AbelianVariety>, xs: &[&Endomorphism], p: u64) -> Result<bool> {
    let one = Endomorphism::scalar(av, 1);
    let mut all = vec![&one];
    all.extend_from_slice(xs);
    Ok(rank_mod(&all, p)? == all.len())
}

fn small<R: Rng + ?Sized>(rng: &mut R) -> i64 {
    rng.gen_range(-3..=3)
}

fn lin(av: &Arc<AbelianVariety>, a: u64, terms: &[(i64, &Endomorphism)]) -> Endomorphism {
    terms.iter().fold(Endomorphism::scalar(av, a as i64), |acc, (c, e)| acc.add(&e.scale(*c)))
}

fn finish(av: &Arc<AbelianVariety>, ell: u64, samples: Vec<Endomorphism>, target: Endomorphism, a: u64) -> Result<DlpInstance> {
    let mut inst = DlpInstance::new(av, ell, samples, target)?;
    inst.truth = Some(a);
    Ok(inst)
}

/// `M` spanned by two symmetric samples, `1` independent of them mod every auxiliary prime.
fn direct_sum<R: Rng + ?Sized>(av: &Arc<AbelianVariety>, ell: u64, rng: &mut R) -> Result<DlpInstance> {
    for _ in 0..DRAWS {
        let (s1, s2) = (symmetric_sample(av, rng)?, symmetric_sample(av, rng)?);
        let probe = DlpInstance::new(av, ell, vec![s1.clone(), s2.clone()], s1.clone())?;
        let mut ok = true;
        for p in probe.aux_primes() {
            if !free_with_one(av, &[&s1, &s2], p)? {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let a = rng.gen_range(0..ell);
        let t = lin(av, a, &[(small(rng), &s1), (small(rng), &s2)]);
        return finish(av, ell, vec![s1, s2], t, a);
    }
    Err(Error::SamplingExhausted("direct-sum class".into()))
}

/// `M = l E`: samples `l mu`, target `a + l nu`.
fn scalar_degree<R: Rng + ?Sized>(av: &Arc<AbelianVariety>, ell: u64, rng: &mut R) -> Result<DlpInstance> {
    let mu = Endomorphism::new(av, random_word(av, 2, 2, rng))?.scale(ell as i64);
    let nu = Endomorphism::new(av, random_word(av, 2, 2, rng))?;
    let a = rng.gen_range(0..ell);
    let t = lin(av, a, &[(ell as i64, &nu)]);
    finish(av, ell, vec![mu], t, a)
}

/// One `lambda` not scalar mod `l`; target `a + b lambda + l nu`.
fn dim1<R: Rng + ?Sized>(av: &Arc<AbelianVariety>, ell: u64, rng: &mut R) -> Result<DlpInstance> {
    for _ in 0..DRAWS {
        let lam = Endomorphism::new(av, random_word(av, 3, 2, rng))?;
        if !free_with_one(av, &[&lam], ell)? {
            continue;
        }
        let nu = Endomorphism::new(av, random_word(av, 2, 2, rng))?;
        let a = rng.gen_range(0..ell);
        let b = rng.gen_range(0..ell) as i64;
        let t = lin(av, a, &[(b, &lam), (ell as i64, &nu)]);
        return finish(av, ell, vec![lam], t, a);
    }
    Err(Error::SamplingExhausted("dim-1 class".into()))
}

fn semisimple_mod(m: &MatFp) -> bool {
    let f = m.min_poly();
    let fl = m.field();
    let d = crate::arith::poly::derivative(&fl, &f);
    crate::arith::poly::gcd(&fl, &f, &d).len() == 1
}

/// `lambda` symmetric, `mu = c_1 lambda + c_2 B5 + c_3 B5 lambda` (B5 is central).
fn commuting<R: Rng + ?Sized>(av: &Arc<AbelianVariety>, ell: u64, rng: &mut R) -> Result<DlpInstance> {
    let b5 = Endomorphism::generator(av, "B5")?;
    for _ in 0..DRAWS {
        let lam = symmetric_sample(av, rng)?;
        let (c1, c2, c3) = (small(rng), small(rng), small(rng));
        let mu = lam.scale(c1).add(&b5.scale(c2)).add(&b5.compose(&lam).scale(c3));
        if !free_with_one(av, &[&lam, &mu, &lam.compose(&mu)], ell)? || !semisimple_mod(&lam.matrix(ell)?) {
            continue;
        }
        let nu = Endomorphism::new(av, random_word(av, 2, 2, rng))?;
        let a = rng.gen_range(0..ell);
        let (b, c) = (rng.gen_range(0..ell) as i64, rng.gen_range(0..ell) as i64);
        let t = lin(av, a, &[(b, &lam), (c, &mu), (ell as i64, &nu)]);
        return finish(av, ell, vec![lam, mu], t, a);
    }
    Err(Error::SamplingExhausted("commuting class".into()))
}

/// Two symmetric samples that do not commute mod `l`.
fn noncommutative<R: Rng + ?Sized>(av: &Arc<AbelianVariety>, ell: u64, rng: &mut R) -> Result<DlpInstance> {
    for _ in 0..DRAWS {
        let (lam, mu) = (symmetric_sample(av, rng)?, symmetric_sample(av, rng)?);
        if lam.matrix(ell)?.commutes_with(&mu.matrix(ell)?) || !free_with_one(av, &[&lam, &mu], ell)? {
            continue;
        }
        let nu = Endomorphism::new(av, random_word(av, 2, 2, rng))?;
        let a = rng.gen_range(0..ell);
        let (b, c) = (rng.gen_range(0..ell) as i64, rng.gen_range(0..ell) as i64);
        let t = lin(av, a, &[(b, &lam), (c, &mu), (ell as i64, &nu)]);
        return finish(av, ell, vec![lam, mu], t, a);
    }
    Err(Error::SamplingExhausted("noncommuting class".into()))
}

/// Samples `x pi + l y` with `l ∤ x`; target `a + z s`.
fn center<R: Rng + ?Sized>(av: &Arc<AbelianVariety>, ell: u64, rng: &mut R) -> Result<DlpInstance> {
    let pi = Endomorphism::generator(av, FROBENIUS)?;
    let mut x = 0;
    while x % ell as i64 == 0 {
        x = rng.gen_range(-4..=4);
    }
    let y = rng.gen_range(-2..=2);
    let s = pi.scale(x).shift(-(ell as i64) * y);
    let a = rng.gen_range(0..ell);
    let t = lin(av, a, &[(small(rng), &s)]);
    finish(av, ell, vec![s], t, a)
}

/// Two random samples, `1` independent of them mod `l`; target `a + x s_1 + y s_2 + l nu`.
fn effective_basis<R: Rng + ?Sized>(av: &Arc<AbelianVariety>, ell: u64, rng: &mut R) -> Result<DlpInstance> {
    for _ in 0..DRAWS {
        let s1 = Endomorphism::new(av, random_word(av, 3, 1, rng))?;
        let s2 = Endomorphism::new(av, random_word(av, 3, 1, rng))?;
        if !free_with_one(av, &[&s1, &s2], ell)? {
            continue;
        }
        let nu = Endomorphism::new(av, random_word(av, 2, 1, rng))?;
        let a = rng.gen_range(0..ell);
        let t = lin(av, a, &[(small(rng), &s1), (small(rng), &s2), (ell as i64, &nu)]);
        return finish(av, ell, vec![s1, s2], t, a);
    }
    Err(Error::SamplingExhausted("effective-basis class".into()))
}

/// A planted instance of the attack's class on an explicit backend.
pub fn planted_on<R: Rng + ?Sized>(name: AttackName, av: &Arc<AbelianVariety>, ell: u64, rng: &mut R) -> Result<DlpInstance> {
    match name {
        AttackName::DirectSum => direct_sum(av, ell, rng),
        AttackName::ScalarDegree => scalar_degree(av, ell, rng),
        AttackName::Dim1 => dim1(av, ell, rng),
        AttackName::Commuting => commuting(av, ell, rng),
        AttackName::Noncommutative => noncommutative(av, ell, rng),
        AttackName::Center => center(av, ell, rng),
        AttackName::EffectiveBasis => effective_basis(av, ell, rng),
    }
}

/// Planted instance `trial` on the default class.
pub fn planted<R: Rng + ?Sized>(name: AttackName, trial: u64, rng: &mut R) -> Result<DlpInstance> {
    let (backend, ell) = default_class(name, trial);
    planted_on(name, &AbelianVariety::named(backend)?, ell, rng)
}

/// The trimap instance: samples `lambda_1, lambda_2` and the `l E` part of `U`, target a
/// fresh `G_3` encoding of `a`. Built on the orthogonal setup, the only one that finishes.
pub fn trimap_instance<R: Rng + ?Sized>(ell: u64, seed: u64, rng: &mut R) -> Result<DlpInstance> {
    let av = AbelianVariety::named("model")?;
    let tp = setup_with(&av, ell, seed, Construction::Orthogonal)?;
    let mut samples = vec![tp.lambda1.clone(), tp.lambda2.clone()];
    samples.extend(tp.ell_e_endos()?);
    let a = rng.gen_range(0..ell);
    let t = tp.encode3(a, rng)?.endomorphism(&av)?;
    finish(&av, ell, samples, t, a)
}

/// A target outside the center: `a + c * distortion` on a supersingular curve, samples `l pi`.
pub fn noncentral_instance<R: Rng + ?Sized>(ell: u64, rng: &mut R) -> Result<DlpInstance> {
    let av = AbelianVariety::named("ec-ss-11")?;
    let pi = Endomorphism::generator(&av, FROBENIUS)?;
    let iota = Endomorphism::new(&av, Word(vec![Term(1, vec!["distortion".into()])]))?;
    let a = rng.gen_range(0..ell);
    let c = rng.gen_range(1..ell) as i64;
    let t = lin(&av, a, &[(c, &iota), (ell as i64 * small(rng), &pi)]);
    finish(&av, ell, vec![pi.scale(ell as i64)], t, a)
}
