//! The trilinear map: setup of `(alpha, beta, lambda_1, lambda_2, U, zeta)`, the three
//! encodings, and evaluation.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::field::{Field, PrimeField};
use crate::arith::linalg::span_rank;
use crate::arith::poly;
use crate::arith::primes::{is_prime, small_primes};
use crate::endo::{symmetric_sample, Endomorphism, Term, Word};
use crate::pairing::{pair_theta, PairingValue};
use crate::rng;
use crate::torsion::{basis_for, EndoMatrix, TorsionBasis};
use crate::varieties::{AbelianVariety, Descriptor, Domain, EcPoint, GroupPoint};
use crate::{Error, Result};

/// Attempts of the outer setup loop.
pub const SETUP_RETRIES: usize = 64;
/// Minimum and maximum size of the `l E` sample.
pub const ELL_E_MIN: usize = 4;
pub const ELL_E_MAX: usize = 16;
/// Bound on the term count of a rewritten encoding, as a multiple of the original.
pub const EXPANSION: usize = 8;

/// `multiplier * word`, kept apart so the `l`-multiple stays visible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaledWord {
    pub multiplier: i64,
    pub word: Word,
}

/// On-disk form of [`TrilinearParams`]; fields sorted for canonical output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    alpha: GroupPoint,
    backend: Descriptor,
    beta: GroupPoint,
    construction: Construction,
    ell: u64,
    ell_e: Vec<ScaledWord>,
    k: usize,
    lambda1: Word,
    lambda2: Word,
    seed: u64,
    zeta: PairingValue,
}

#[derive(Clone, Debug)]
pub struct TrilinearParams {
    pub av: Arc<AbelianVariety>,
    pub ell: u64,
    pub construction: Construction,
    pub domain: Domain,
    pub alpha: GroupPoint,
    pub beta: GroupPoint,
    pub lambda1: Endomorphism,
    pub lambda2: Endomorphism,
    pub ell_e: Vec<ScaledWord>,
    pub zeta: PairingValue,
    pub seed: u64,
}

/// A `G_3` encoding: a symmetric endomorphism given as a word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncodingG3 {
    pub ell: u64,
    pub word: Word,
}

impl EncodingG3 {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("encoding serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn endomorphism(&self, av: &Arc<AbelianVariety>) -> Result<Endomorphism> {
        let mut e = Endomorphism::new(av, self.word.clone())?;
        e.symmetric = true;
        Ok(e)
    }

    /// `c * [a]_3` encodes `c a`.
    pub fn scale(&self, c: i64) -> Self {
        EncodingG3 { ell: self.ell, word: Word(self.word.0.iter().map(|Term(a, g)| Term(a * c, g.clone())).collect()) }
    }
}

fn mat_poly(m: &EndoMatrix, f: &[u64]) -> EndoMatrix {
    m.eval_poly(f)
}

fn scaled_endo(av: &Arc<AbelianVariety>, s: &ScaledWord) -> Result<Endomorphism> {
    Ok(Endomorphism::new(av, s.word.clone())?.scale(s.multiplier))
}

/// How `alpha` is chosen. `LambdaImage` is `alpha = lambda_2(beta)`; since `lambda_2` is
/// Rosati-symmetric, `e^Theta(lambda_2 beta, beta) = e^Theta(beta, lambda_2 beta)`, and
/// the pairing is alternating, so this `zeta` is always 1 for odd `l` and the setup
/// cannot finish. `Orthogonal` draws `alpha` with `e^Theta(alpha, lambda_2 beta) = 1`
/// and `e^Theta(alpha, beta) != 1` instead, which keeps `e^{D_2}(alpha, beta) = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    #[default]
    LambdaImage,
    Orthogonal,
}

/// Why a setup attempt was thrown away.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reject {
    CharPoly,
    NoNonzeroRoot,
    NoBeta,
    NoLambda2,
    Commuting,
    TrivialZeta,
}

/// One pass of the setup loop.
fn setup_attempt<R: Rng + ?Sized>(
    av: &Arc<AbelianVariety>,
    ell: u64,
    construction: Construction,
    rng: &mut R,
) -> Result<std::result::Result<TrilinearParams, Reject>> {
    let basis = basis_for(av, ell)?;
    let dom = basis.domain.clone();
    let fl = PrimeField::new(ell)?;
    let lam = match symmetric_sample(av, rng) {
        Ok(l) => l,
        Err(Error::OutOfScope(_)) => return Err(Error::SetupExhausted),
        Err(e) => return Err(e),
    };
    let f = match lam.char_poly_bounded(&[ell], 0, rng) {
        Ok(f) => f,
        Err(Error::HeuristicBound(_)) => return Ok(Err(Reject::CharPoly)),
        Err(e) => return Err(e),
    };
    let fmod: Vec<u64> = f.coeffs.iter().map(|c| c.rem_euclid(ell as i128) as u64).collect();
    let roots: Vec<u64> = poly::roots(&fl, &fmod, rng).into_iter().filter(|a| *a != 0).collect();
    let Some(&a) = roots.choose(rng) else { return Ok(Err(Reject::NoNonzeroRoot)) };
    // the minimal polynomial is the factor of f with f(lambda) = 0 and f_1(lambda) != 0
    let m = lam.matrix(ell)?;
    let g = m.min_poly();
    let Some(f1) = poly::div_exact(&fl, &g, &[fl.neg(&a), 1]) else { return Ok(Err(Reject::NoNonzeroRoot)) };
    let f1m = mat_poly(&m, &f1);
    let d = basis.dim();
    let beta_c = (0..32).find_map(|_| {
        let c: Vec<u64> = (0..d).map(|_| rng.gen_range(0..ell)).collect();
        let b = f1m.mul_vec(&c);
        b.iter().any(|x| *x != 0).then_some(b)
    });
    let Some(beta_c) = beta_c else { return Ok(Err(Reject::NoBeta)) };
    let beta = basis.point(av, &beta_c)?;
    let lambda1 = lam.shift(a as i64);
    let mut found = None;
    for _ in 0..32 {
        let l2 = symmetric_sample(av, rng)?;
        let image = l2.apply(&dom, &beta)?;
        if av.is_identity(&lambda1.apply(&dom, &image)?) {
            continue;
        }
        let alpha = match construction {
            Construction::LambdaImage => Some(image),
            Construction::Orthogonal => orthogonal_alpha(av, &basis, &beta, &image, &lambda1, rng)?,
        };
        if let Some(alpha) = alpha {
            found = Some((l2, alpha));
            break;
        }
    }
    let Some((lambda2, alpha)) = found else { return Ok(Err(Reject::NoLambda2)) };
    let (m1, m2) = (lambda1.matrix(ell)?, lambda2.matrix(ell)?);
    if m1.commutes_with(&m2) || span_rank(ell, &[m1.flatten(), m2.flatten()]) != 2 {
        return Ok(Err(Reject::Commuting));
    }
    let zeta = pair_theta(av, &dom, &alpha, &beta, ell)?;
    if zeta.is_one() {
        return Ok(Err(Reject::TrivialZeta));
    }
    let ell_e = sample_ell_e(av, ell, &lambda1, &lambda2, rng)?;
    Ok(Ok(TrilinearParams {
        av: av.clone(),
        ell,
        construction,
        domain: dom,
        alpha,
        beta,
        lambda1,
        lambda2,
        ell_e,
        zeta,
        seed: 0,
    }))
}

/// Random `alpha` in `A[l]` with `e^Theta(alpha, image) = 1`, `e^Theta(alpha, beta) != 1`
/// and `lambda_1(alpha) != 0`.
fn orthogonal_alpha<R: Rng + ?Sized>(
    av: &AbelianVariety,
    basis: &TorsionBasis,
    beta: &GroupPoint,
    image: &GroupPoint,
    lambda1: &Endomorphism,
    rng: &mut R,
) -> Result<Option<GroupPoint>> {
    let (dom, l) = (&basis.domain, basis.ell);
    for _ in 0..64 {
        let c: Vec<u64> = (0..basis.dim()).map(|_| rng.gen_range(0..l)).collect();
        let x = basis.point(av, &c)?;
        if pair_theta(av, dom, &x, image, l)?.is_one()
            && !pair_theta(av, dom, &x, beta, l)?.is_one()
            && !av.is_identity(&lambda1.apply(dom, &x)?)
        {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// At least [`ELL_E_MIN`] samples `l mu`, topped up while the span with `lambda_1, lambda_2`
/// mod an auxiliary prime still grows.
fn sample_ell_e<R: Rng + ?Sized>(
    av: &Arc<AbelianVariety>,
    ell: u64,
    l1: &Endomorphism,
    l2: &Endomorphism,
    rng: &mut R,
) -> Result<Vec<ScaledWord>> {
    let mut skip = vec![ell];
    if !av.is_model() {
        skip.push(av.q());
    }
    let aux = small_primes(&skip).next().expect("primes");
    let mut span = vec![l1.matrix(aux)?.flatten(), l2.matrix(aux)?.flatten()];
    let mut out = Vec::new();
    let mut stale = 0;
    while out.len() < ELL_E_MAX && (out.len() < ELL_E_MIN || stale < 2) {
        let mu = symmetric_sample(av, rng)?;
        let before = span_rank(aux, &span);
        span.push(mu.scale(ell as i64).matrix(aux)?.flatten());
        if span_rank(aux, &span) == before {
            stale += 1;
        } else {
            stale = 0;
        }
        out.push(ScaledWord { multiplier: ell as i64, word: mu.word });
    }
    Ok(out)
}

/// Draw the setup from `seed`; errors with `SetupExhausted` after [`SETUP_RETRIES`] attempts.
pub fn setup(av: &Arc<AbelianVariety>, ell: u64, seed: u64) -> Result<TrilinearParams> {
    setup_with(av, ell, seed, Construction::LambdaImage)
}

pub fn setup_with(av: &Arc<AbelianVariety>, ell: u64, seed: u64, construction: Construction) -> Result<TrilinearParams> {
    setup_report(av, ell, seed, construction).0
}

/// The setup result together with the reasons earlier attempts were rejected.
pub fn setup_report(
    av: &Arc<AbelianVariety>,
    ell: u64,
    seed: u64,
    construction: Construction,
) -> (Result<TrilinearParams>, Vec<Reject>) {
    let mut rejects = Vec::new();
    if !is_prime(ell) {
        return (Err(Error::NotPrime(ell)), rejects);
    }
    let mut r = rng::seeded(seed);
    for _ in 0..SETUP_RETRIES {
        match setup_attempt(av, ell, construction, &mut r) {
            Ok(Ok(mut p)) => {
                p.seed = seed;
                return (Ok(p), rejects);
            }
            Ok(Err(why)) => rejects.push(why),
            Err(e) => return (Err(e), rejects),
        }
    }
    (Err(Error::SetupExhausted), rejects)
}

impl TrilinearParams {
    pub fn encode1(&self, a: u64) -> Result<GroupPoint> {
        self.av.mul(&self.domain, (a % self.ell) as i64, &self.alpha)
    }

    pub fn encode2(&self, a: u64) -> Result<GroupPoint> {
        self.av.mul(&self.domain, (a % self.ell) as i64, &self.beta)
    }

    /// `a + x lambda_1 + y lambda_2 + sum c_i l mu_i`, then rewritten: coefficients split
    /// into random sums, cancelling pairs inserted, terms shuffled.
    pub fn encode3<R: Rng + ?Sized>(&self, a: u64, rng: &mut R) -> Result<EncodingG3> {
        let l = self.ell;
        let x = rng.gen_range(0..l) as i64;
        let y = rng.gen_range(0..l) as i64;
        let mut w = Word::scalar((a % l) as i64);
        w = w.add(&self.lambda1.word.scale(x)).add(&self.lambda2.word.scale(y));
        for s in &self.ell_e {
            let c = rng.gen_range(-2i64..=2);
            w = w.add(&s.word.scale(c * s.multiplier));
        }
        let base = w.0;
        let cap = EXPANSION * base.len();
        let mut out: Vec<Term> = Vec::new();
        for (i, Term(c, g)) in base.iter().enumerate() {
            // leave room so every later term still gets at least one slot
            let room = cap - out.len() - (base.len() - i - 1);
            let pieces = rng.gen_range(1..=room.min(4));
            let mut rest = *c;
            for _ in 1..pieces {
                let s = rng.gen_range(-(l as i64)..=(l as i64));
                out.push(Term(s, g.clone()));
                rest -= s;
            }
            out.push(Term(rest, g.clone()));
        }
        out.shuffle(rng);
        Ok(EncodingG3 { ell: l, word: Word(out) })
    }

    /// Exponent `t` with `e^Theta(e1, lambda(e2)) = zeta^t`.
    pub fn tmap(&self, e1: &GroupPoint, e2: &GroupPoint, e3: &EncodingG3) -> Result<u64> {
        if e3.ell != self.ell {
            return Err(Error::InvalidData("encoding level does not match params".into()));
        }
        let lam = e3.endomorphism(&self.av)?;
        let v = pair_theta(&self.av, &self.domain, e1, &lam.apply(&self.domain, e2)?, self.ell)?;
        let fl = PrimeField::new(self.ell)?;
        let zinv = fl.inv(&self.zeta.exponent).ok_or(Error::NotInSubgroup)?;
        Ok(fl.mul(&v.exponent, &zinv))
    }

    /// `e^Theta(alpha, lambda(beta)) = 1`, i.e. the encoding lies in `U`.
    pub fn encodes_zero(&self, e3: &EncodingG3) -> Result<bool> {
        Ok(self.tmap(&self.alpha, &self.beta, e3)? == 0)
    }

    pub fn ell_e_endos(&self) -> Result<Vec<Endomorphism>> {
        self.ell_e.iter().map(|s| scaled_endo(&self.av, s)).collect()
    }

    /// Invariants recomputed from scratch, by name.
    pub fn check_invariants(&self) -> Result<Vec<(&'static str, bool)>> {
        let (av, dom, l) = (&self.av, &self.domain, self.ell);
        let (m1, m2) = (self.lambda1.matrix(l)?, self.lambda2.matrix(l)?);
        let image = self.lambda2.apply(dom, &self.beta)?;
        Ok(vec![
            ("lambda1(beta) = 0", av.is_identity(&self.lambda1.apply(dom, &self.beta)?)),
            match self.construction {
                Construction::LambdaImage => ("alpha = lambda2(beta)", image == self.alpha),
                Construction::Orthogonal => {
                    ("e(alpha, lambda2(beta)) = 1", pair_theta(av, dom, &self.alpha, &image, l)?.is_one())
                }
            },
            ("lambda1(lambda2(beta)) != 0", !av.is_identity(&self.lambda1.apply(dom, &image)?)),
            ("lambda1(alpha) != 0", !av.is_identity(&self.lambda1.apply(dom, &self.alpha)?)),
            ("lambda1, lambda2 do not commute mod l", !m1.commutes_with(&m2)),
            ("span of lambda1, lambda2 on A[l] has dimension 2", span_rank(l, &[m1.flatten(), m2.flatten()]) == 2),
            ("zeta != 1", pair_theta(av, dom, &self.alpha, &self.beta, l)? == self.zeta && !self.zeta.is_one()),
            ("symmetric mod l", self.lambda1.is_symmetric_mod(l)? && self.lambda2.is_symmetric_mod(l)?),
        ])
    }

    /// Whether the images mod `l'` of `lambda_1, lambda_2` and the `l E` sample span a
    /// space containing the identity.
    pub fn identity_in_span_mod(&self, ell2: u64) -> Result<bool> {
        let mut gens = vec![self.lambda1.matrix(ell2)?.flatten(), self.lambda2.matrix(ell2)?.flatten()];
        for e in self.ell_e_endos()? {
            gens.push(e.matrix(ell2)?.flatten());
        }
        let r = span_rank(ell2, &gens);
        gens.push(EndoMatrix::identity(ell2, self.av.dim()).flatten());
        Ok(span_rank(ell2, &gens) == r)
    }

    pub fn to_json(&self) -> String {
        let f = ParamsFile {
            alpha: self.alpha.clone(),
            backend: self.av.descriptor.clone(),
            beta: self.beta.clone(),
            construction: self.construction,
            ell: self.ell,
            ell_e: self.ell_e.clone(),
            k: self.domain.degree(),
            lambda1: self.lambda1.word.clone(),
            lambda2: self.lambda2.word.clone(),
            seed: self.seed,
            zeta: self.zeta.clone(),
        };
        serde_json::to_string(&f).expect("params serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: ParamsFile = serde_json::from_str(s)?;
        let av = AbelianVariety::from_descriptor(&f.backend)?;
        let domain = if av.is_model() { Domain::Model { level: f.ell } } else { av.curve_domain(f.k)? };
        let corrupt = |m: &str| Error::InvalidData(format!("params: {m}"));
        if !av.contains(&domain, &f.alpha) || !av.contains(&domain, &f.beta) {
            return Err(corrupt("points not on the variety"));
        }
        let sym = |w: Word| -> Result<Endomorphism> {
            let mut e = Endomorphism::new(&av, w)?;
            e.symmetric = true;
            Ok(e)
        };
        let p = TrilinearParams {
            lambda1: sym(f.lambda1)?,
            lambda2: sym(f.lambda2)?,
            av: av.clone(),
            ell: f.ell,
            construction: f.construction,
            domain,
            alpha: f.alpha,
            beta: f.beta,
            ell_e: f.ell_e,
            zeta: f.zeta,
            seed: f.seed,
        };
        if pair_theta(&av, &p.domain, &p.alpha, &p.beta, p.ell)?.exponent != p.zeta.exponent {
            return Err(corrupt("zeta does not match alpha, beta"));
        }
        Ok(p)
    }
}

/// `lambda_D` for a divisor `sum c_i (P_i)` on an elliptic curve: with `Theta = (O)` and
/// `phi_Theta(b) = -b`, every point divisor has `lambda = 1`, so `lambda_D = sum c_i`.
pub fn elliptic_lambda_from_divisor(av: &Arc<AbelianVariety>, d: &[(i64, EcPoint)]) -> Result<Endomorphism> {
    if av.g() != 1 || av.is_model() {
        return Err(Error::OutOfScope("general-g divisor evaluation out of scope".into()));
    }
    let mut e = Endomorphism::scalar(av, d.iter().map(|(c, _)| c).sum());
    e.symmetric = true;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(ell: u64, seed: u64) -> TrilinearParams {
        setup_with(&AbelianVariety::named("model").unwrap(), ell, seed, Construction::Orthogonal).unwrap()
    }

    #[test]
    fn lambda_image_zeta_is_always_trivial() {
        let av = AbelianVariety::named("model").unwrap();
        let (res, rejects) = setup_report(&av, 5, 1, Construction::LambdaImage);
        assert!(matches!(res, Err(Error::SetupExhausted)));
        assert_eq!(rejects.len(), SETUP_RETRIES);
        assert!(rejects.contains(&Reject::TrivialZeta));
        // the reason: e(lambda x, x) = 1 for every symmetric lambda and every x
        let b = basis_for(&av, 5).unwrap();
        let mut r = rng::seeded(2);
        for _ in 0..20 {
            let lam = symmetric_sample(&av, &mut r).unwrap();
            let c: Vec<u64> = (0..4).map(|_| r.gen_range(0..5)).collect();
            let x = b.point(&av, &c).unwrap();
            assert!(pair_theta(&av, &b.domain, &lam.apply(&b.domain, &x).unwrap(), &x, 5).unwrap().is_one());
        }
    }

    #[test]
    fn setup_invariants_on_model() {
        let p = model(5, 1);
        for (name, ok) in p.check_invariants().unwrap() {
            assert!(ok, "{name}");
        }
        assert!(p.ell_e.len() >= ELL_E_MIN);
        let zero = crate::pairing::pair_ed(&p.lambda2, &p.domain, &p.alpha, &p.beta, 5).unwrap();
        assert!(zero.is_one());
    }

    #[test]
    fn small_trilinearity_and_zero_test() {
        let p = model(3, 2);
        let mut r = rng::seeded(9);
        for z in 0..3 {
            let e3 = p.encode3(z, &mut r).unwrap();
            assert_eq!(p.encodes_zero(&e3).unwrap(), z == 0);
            for x in 0..3 {
                for y in 0..3 {
                    let t = p.tmap(&p.encode1(x).unwrap(), &p.encode2(y).unwrap(), &e3).unwrap();
                    assert_eq!(t, x * y * z % 3);
                }
            }
        }
        assert_eq!(p.encode1(0).unwrap(), p.av.identity(&p.domain));
        assert_eq!(p.encode1(1).unwrap(), p.alpha);
        let e = p.encode3(2, &mut r).unwrap().scale(2);
        assert_eq!(p.tmap(&p.alpha, &p.beta, &e).unwrap(), 1);
    }

    #[test]
    fn json_roundtrip() {
        let p = model(7, 3);
        let s = p.to_json();
        let q = TrilinearParams::from_json(&s).unwrap();
        assert_eq!(q.to_json(), s);
        let e = p.encode3(4, &mut rng::seeded(1)).unwrap();
        assert_eq!(EncodingG3::from_json(&e.to_json()).unwrap(), e);
        assert!(e.word.0.len() <= EXPANSION * 7 + EXPANSION * ELL_E_MAX);
        let bad = s.replace("\"ell\":7", "\"ell\":7,\"extra\":1");
        assert!(TrilinearParams::from_json(&bad).is_err());
    }

    #[test]
    fn curve_backends_cannot_set_up() {
        for name in ["ec-ord-7", "ec-ss-7"] {
            let av = AbelianVariety::named(name).unwrap();
            assert!(matches!(setup(&av, 5, 1), Err(Error::SetupExhausted)), "{name}");
        }
    }

    #[test]
    fn divisor_lambdas() {
        let av = AbelianVariety::named("ec-ss-11").unwrap();
        let b = basis_for(&av, 3).unwrap();
        let GroupPoint::Ec(p) = b.points[0].clone() else { unreachable!() };
        let neg = match &p {
            EcPoint::Affine { x, y } => EcPoint::Affine { x: x.clone(), y: b.domain.field().unwrap().neg(y) },
            EcPoint::Infinity => EcPoint::Infinity,
        };
        assert_eq!(elliptic_lambda_from_divisor(&av, &[(1, EcPoint::Infinity)]).unwrap().word, Word::scalar(1));
        assert_eq!(elliptic_lambda_from_divisor(&av, &[(1, p.clone()), (1, neg)]).unwrap().word, Word::scalar(2));
        assert_eq!(elliptic_lambda_from_divisor(&av, &[(3, p)]).unwrap().word, Word::scalar(3));
        assert!(elliptic_lambda_from_divisor(&AbelianVariety::named("g2-19").unwrap(), &[]).is_err());
        // phi_D(b) = class of t_b^* D - D, i.e. the point sum of c_i ((P_i - b) - P_i);
        // lambda_D = phi_Theta^{-1} phi_D with phi_Theta(b) = -b
        let dom = &b.domain;
        let d: Vec<(i64, GroupPoint)> = vec![(2, b.points[0].clone()), (-1, b.points[1].clone()), (2, av.identity(dom))];
        let lam = elliptic_lambda_from_divisor(
            &av,
            &d.iter().map(|(c, q)| (*c, match q { GroupPoint::Ec(e) => e.clone(), _ => unreachable!() })).collect::<Vec<_>>(),
        )
        .unwrap();
        for n in 0..9u64 {
            let pt = b.point(&av, &[n % 3, n / 3]).unwrap();
            let mut phi = av.identity(dom);
            for (c, q) in &d {
                let moved = av.sub(dom, &av.sub(dom, q, &pt).unwrap(), q).unwrap();
                phi = av.add(dom, &phi, &av.mul(dom, *c, &moved).unwrap()).unwrap();
            }
            assert_eq!(lam.apply(dom, &pt).unwrap(), av.neg(dom, &phi).unwrap());
        }
    }
}
