//! Endomorphisms as integer combinations of generator products, with their matrices on
//! torsion, characteristic polynomials by CRT, degrees and Rosati adjoints.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::crt::{crt_combine, signed_rep};
use crate::arith::intpoly::IntPoly;
use crate::arith::primes::small_primes;
use crate::torsion::{basis_for, generator_degree, EndoMatrix, TorsionBasis};
use crate::varieties::{AbelianVariety, Domain, GroupPoint};
use crate::{Error, Result};

/// `coeff * g_1 g_2 ... g_r`; `g_r` acts first, and an empty product is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term(pub i64, pub Vec<String>);

/// Serialized as a JSON list of terms `[coeff, [generator, ...]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Term>);

impl Word {
    pub fn scalar(n: i64) -> Self {
        Word(vec![Term(n, Vec::new())])
    }

    pub fn generator(name: &str) -> Self {
        Word(vec![Term(1, vec![name.to_string()])])
    }

    pub fn add(&self, o: &Word) -> Word {
        Word(self.0.iter().chain(&o.0).cloned().collect()).simplified()
    }

    pub fn scale(&self, c: i64) -> Word {
        Word(self.0.iter().map(|Term(a, g)| Term(a * c, g.clone())).collect()).simplified()
    }

    pub fn sub(&self, o: &Word) -> Word {
        self.add(&o.scale(-1))
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Word) -> Word {
        let mut out = Vec::new();
        for Term(a, g) in &self.0 {
            for Term(b, h) in &o.0 {
                out.push(Term(a * b, g.iter().chain(h).cloned().collect()));
            }
        }
        Word(out).simplified()
    }

    /// Like terms merged in first-occurrence order, zero terms dropped; `0` stays `[[0, []]]`.
    pub fn simplified(&self) -> Word {
        let mut out: Vec<Term> = Vec::new();
        for Term(a, g) in &self.0 {
            match out.iter_mut().find(|t| &t.1 == g) {
                Some(t) => t.0 += a,
                None => out.push(Term(*a, g.clone())),
            }
        }
        out.retain(|t| t.0 != 0);
        if out.is_empty() {
            out.push(Term(0, Vec::new()));
        }
        Word(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("word serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Monic integer polynomial, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPoly {
    pub coeffs: IntPoly,
    pub verified: bool,
    /// Primes whose residues were combined.
    pub primes: Vec<u64>,
}

pub struct Endomorphism {
    av: Arc<AbelianVariety>,
    pub word: Word,
    pub symmetric: bool,
    cache: Mutex<HashMap<u64, EndoMatrix>>,
}

impl Clone for Endomorphism {
    fn clone(&self) -> Self {
        Endomorphism {
            av: self.av.clone(),
            word: self.word.clone(),
            symmetric: self.symmetric,
            cache: Mutex::new(self.cache.lock().expect("poisoned").clone()),
        }
    }
}

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Endomorphism({})", self.word.to_json())
    }
}

impl PartialEq for Endomorphism {
    fn eq(&self, o: &Self) -> bool {
        self.word == o.word && self.av.descriptor == o.av.descriptor
    }
}

impl Endomorphism {
    pub fn new(av: &Arc<AbelianVariety>, word: Word) -> Result<Self> {
        if word.0.is_empty() {
            return Err(Error::InvalidData("empty endomorphism word".into()));
        }
        let known = av.word_generators();
        for Term(_, gens) in &word.0 {
            if let Some(g) = gens.iter().find(|g| !known.contains(g)) {
                return Err(Error::UnknownGenerator(g.clone()));
            }
        }
        Ok(Endomorphism { av: av.clone(), word, symmetric: false, cache: Mutex::default() })
    }

    pub fn scalar(av: &Arc<AbelianVariety>, n: i64) -> Self {
        Self::new(av, Word::scalar(n)).expect("scalars are always valid")
    }

    pub fn generator(av: &Arc<AbelianVariety>, name: &str) -> Result<Self> {
        Self::new(av, Word::generator(name))
    }

    pub fn variety(&self) -> &AbelianVariety {
        &self.av
    }

    pub fn variety_arc(&self) -> &Arc<AbelianVariety> {
        &self.av
    }

    fn derived(&self, word: Word) -> Self {
        Endomorphism { av: self.av.clone(), word, symmetric: false, cache: Mutex::default() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut e = self.derived(self.word.add(&o.word));
        e.symmetric = self.symmetric && o.symmetric;
        e
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut e = self.derived(self.word.sub(&o.word));
        e.symmetric = self.symmetric && o.symmetric;
        e
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut e = self.derived(self.word.scale(c));
        e.symmetric = self.symmetric;
        e
    }

    /// `self - a`.
    pub fn shift(&self, a: i64) -> Self {
        let mut e = self.derived(self.word.add(&Word::scalar(-a)));
        e.symmetric = self.symmetric;
        e
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        self.derived(self.word.compose(&o.word))
    }

    /// Evaluate on a point, term by term; each product acts from the right.
    pub fn apply(&self, dom: &Domain, p: &GroupPoint) -> Result<GroupPoint> {
        let av = &*self.av;
        let mut acc = av.identity(dom);
        for Term(c, gens) in &self.word.0 {
            if *c == 0 {
                continue;
            }
            let mut x = p.clone();
            for g in gens.iter().rev() {
                x = av.apply_generator(dom, g, &x)?;
            }
            acc = av.add(dom, &acc, &av.mul(dom, *c, &x)?)?;
        }
        Ok(acc)
    }

    /// Matrix on the canonical basis of `A[l']`, assembled from generator matrices.
    pub fn matrix(&self, ell: u64) -> Result<EndoMatrix> {
        if let Some(m) = self.cache.lock().expect("poisoned").get(&ell) {
            return Ok(m.clone());
        }
        let basis = basis_for(&self.av, ell)?;
        let m = self.matrix_on(&basis)?;
        self.cache.lock().expect("poisoned").insert(ell, m.clone());
        Ok(m)
    }

    /// Matrix of the word on an arbitrary basis.
    pub fn matrix_on(&self, basis: &TorsionBasis) -> Result<EndoMatrix> {
        let d = basis.dim();
        let ell = basis.ell;
        let mut acc = EndoMatrix::zeros(ell, d, d);
        for Term(c, gens) in &self.word.0 {
            let mut m = EndoMatrix::identity(ell, d);
            for g in gens {
                m = m.mul(&basis.generator_matrix(&self.av, g)?);
            }
            acc = acc.add(&m.scale(*c));
        }
        Ok(acc)
    }

    /// Matrix by evaluating the whole word on each basis point.
    pub fn matrix_by_evaluation(&self, basis: &TorsionBasis) -> Result<EndoMatrix> {
        basis.matrix_of_map(&self.av, |p| self.apply(&basis.domain, p))
    }

    /// Characteristic polynomial on `T_l`: matrix characteristic polynomials mod ascending
    /// primes (skipping the characteristic and `avoid`), combined by CRT with signed
    /// representatives until two consecutive reconstructions agree and the modulus
    /// exceeds `2 * bound`; then `f(lambda)` is applied to 5 random points.
    pub fn char_poly_bounded<R: Rng + ?Sized>(&self, avoid: &[u64], bound: i128, rng: &mut R) -> Result<CharPoly> {
        let n = self.av.dim();
        let mut skip = avoid.to_vec();
        if !self.av.is_model() {
            skip.push(self.av.q());
        }
        let mut residues: Vec<Vec<(i128, i128)>> = vec![Vec::new(); n + 1];
        let mut primes = Vec::new();
        let mut prev: Option<IntPoly> = None;
        let mut modulus: i128 = 1;
        for ell in small_primes(&skip) {
            if ell > 127 || modulus > i128::MAX / 1024 {
                break;
            }
            let m = match self.matrix(ell) {
                Ok(m) => m,
                Err(Error::TorsionFieldTooLarge(_)) => continue,
                Err(e) => return Err(e),
            };
            let cp = m.char_poly();
            for (r, c) in residues.iter_mut().zip(&cp) {
                r.push((*c as i128, ell as i128));
            }
            primes.push(ell);
            modulus *= ell as i128;
            let rec: IntPoly = residues
                .iter()
                .map(|r| crt_combine(r).map(|(v, m)| signed_rep(v, m)))
                .collect::<Result<_>>()?;
            if prev.as_ref() == Some(&rec) && modulus > 2 * bound {
                // a premature agreement fails on points; keep adding primes
                match self.verify_char_poly(rec.clone(), primes.clone(), rng) {
                    Err(Error::HeuristicBound(_)) => {}
                    r => return r,
                }
            }
            prev = Some(rec);
        }
        Err(Error::HeuristicBound("characteristic polynomial did not stabilize".into()))
    }

    pub fn char_poly<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<CharPoly> {
        self.char_poly_bounded(&[], 0, rng)
    }

    fn verify_char_poly<R: Rng + ?Sized>(&self, f: IntPoly, primes: Vec<u64>, rng: &mut R) -> Result<CharPoly> {
        let av = &*self.av;
        let dom = if av.is_model() {
            Domain::Model { level: 1_000_003 }
        } else {
            av.curve_domain(3 * generator_degree(av))?
        };
        for _ in 0..5 {
            let p = av.random_point(&dom, rng)?;
            let mut acc = av.identity(&dom);
            for c in f.iter().rev() {
                acc = self.apply(&dom, &acc)?;
                acc = av.add(&dom, &acc, &av.mul_big(&dom, &BigInt::from(*c), &p)?)?;
            }
            if !av.is_identity(&acc) {
                return Err(Error::HeuristicBound("f(lambda) does not vanish".into()));
            }
        }
        Ok(CharPoly { coeffs: f, verified: true, primes })
    }

    /// `f(0)`, the degree.
    pub fn degree<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<i128> {
        Ok(self.char_poly(rng)?.coeffs[0])
    }

    /// `G^{-1} M^T G` on the canonical basis at `l'`.
    pub fn rosati_adjoint_mod(&self, ell: u64) -> Result<EndoMatrix> {
        let basis = basis_for(&self.av, ell)?;
        Ok(basis.adjoint(&self.matrix(ell)?))
    }

    pub fn is_symmetric_mod(&self, ell: u64) -> Result<bool> {
        Ok(self.rosati_adjoint_mod(ell)? == self.matrix(ell)?)
    }

    /// Each product `c g_1 ... g_r` becomes `c g_r^dagger ... g_1^dagger`, with generator
    /// adjoints taken from the backend table.
    pub fn formal_adjoint(&self) -> Result<Self> {
        let mut out = Word(Vec::new());
        for Term(c, gens) in &self.word.0 {
            let mut acc = Word::scalar(*c);
            for g in gens.iter().rev() {
                let adj = Word(self.av.generator_adjoint(g)?.into_iter().map(|(a, w)| Term(a, w)).collect());
                acc = acc.compose(&adj);
            }
            out = out.add(&acc);
        }
        Ok(self.derived(out.simplified()))
    }
}

/// Random word with `terms` terms of product length at most `len`, coefficients in `[-2, 2]`.
pub fn random_word<R: Rng + ?Sized>(av: &AbelianVariety, terms: usize, len: usize, rng: &mut R) -> Word {
    let gens = &av.descriptor.generators;
    let mut out = Vec::new();
    for _ in 0..terms {
        let c = *[-2i64, -1, 1, 2].choose(rng).expect("nonempty");
        let r = rng.gen_range(0..=len);
        let g = (0..r).map(|_| gens.choose(rng).expect("generators").clone()).collect();
        out.push(Term(c, g));
    }
    Word(out).simplified()
}

/// `w + w^dagger` for a short random `w`; the model delegates to its own sampler.
/// Symmetry is checked mod the first admissible prime.
pub fn symmetric_sample<R: Rng + ?Sized>(av: &Arc<AbelianVariety>, rng: &mut R) -> Result<Endomorphism> {
    if av.descriptor.generators.len() < 2 {
        return Err(Error::OutOfScope("symmetric sampling needs two generators".into()));
    }
    let mut e = if let Some(m) = av.model() {
        let c = m.symmetric_sample(rng);
        let w = Word(c.iter().enumerate().map(|(i, a)| Term(*a, vec![format!("B{}", i + 1)])).collect());
        Endomorphism::new(av, w.simplified())?
    } else {
        let w = Endomorphism::new(av, random_word(av, 2, 2, rng))?;
        w.add(&w.formal_adjoint()?)
    };
    let skip = if av.is_model() { vec![] } else { vec![av.q()] };
    let ell = small_primes(&skip).next().expect("primes");
    if !e.is_symmetric_mod(ell)? {
        return Err(Error::Verification("generator adjoint table is inconsistent".into()));
    }
    e.symmetric = true;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::intpoly::IntMat;
    use crate::rng;
    use crate::varieties::FROBENIUS;

    fn av(name: &str) -> Arc<AbelianVariety> {
        AbelianVariety::named(name).unwrap()
    }

    #[test]
    fn word_json_shape() {
        let w = Word(vec![Term(2, vec![]), Term(-1, vec!["frobenius".into(), "distortion".into()])]);
        assert_eq!(w.to_json(), r#"[[2,[]],[-1,["frobenius","distortion"]]]"#);
        assert_eq!(Word::from_json(&w.to_json()).unwrap(), w);
        assert!(Endomorphism::new(&av("ec-ss-7"), Word::generator("zeta5")).is_err());
    }

    #[test]
    fn apply_examples() {
        let e = av("ec-ss-7");
        let dom = e.curve_domain(1).unwrap();
        let mut r = rng::seeded(4);
        let p = e.random_point(&dom, &mut r).unwrap();
        assert_eq!(Endomorphism::scalar(&e, 1).apply(&dom, &p).unwrap(), p);
        assert_eq!(Endomorphism::scalar(&e, 2).apply(&dom, &p).unwrap(), e.add(&dom, &p, &p).unwrap());
        let ff = Endomorphism::new(&e, Word(vec![Term(1, vec![FROBENIUS.into(), FROBENIUS.into()])])).unwrap();
        assert_eq!(ff.apply(&dom, &p).unwrap(), p);
    }

    #[test]
    fn char_poly_examples() {
        let mut r = rng::seeded(5);
        let e = av("ec-ss-7");
        let f = Endomorphism::generator(&e, FROBENIUS).unwrap().char_poly(&mut r).unwrap();
        assert_eq!(f.coeffs, vec![7, 0, 1]);
        assert!(f.verified);
        assert_eq!(Endomorphism::scalar(&e, 3).char_poly(&mut r).unwrap().coeffs, vec![9, -6, 1]);
        let m = av("model");
        assert_eq!(Endomorphism::scalar(&m, 1).char_poly(&mut r).unwrap().coeffs, vec![1, -4, 6, -4, 1]);
        assert_eq!(Endomorphism::scalar(&m, 2).degree(&mut r).unwrap(), 16);
        assert_eq!(Endomorphism::generator(&e, FROBENIUS).unwrap().degree(&mut r).unwrap(), 7);
    }

    #[test]
    fn model_char_poly_matches_integer_matrix() {
        let m = av("model");
        let mv = m.model().unwrap();
        let mut r = rng::seeded(6);
        for _ in 0..10 {
            let w = random_word(&m, 3, 2, &mut r);
            let e = Endomorphism::new(&m, w.clone()).unwrap();
            let mut mat = IntMat::zeros(4);
            for Term(c, gens) in &w.0 {
                let mut t = IntMat::identity(4);
                for g in gens {
                    t = t.mul(&mv.basis[g[1..].parse::<usize>().unwrap() - 1]);
                }
                mat = mat.add(&t.scale(*c as i128));
            }
            assert_eq!(e.char_poly(&mut r).unwrap().coeffs, mat.char_poly());
        }
    }

    #[test]
    fn formal_matrix_matches_evaluation() {
        let mut r = rng::seeded(7);
        for name in ["ec-ss-11", "model", "g2-19"] {
            let a = av(name);
            let basis = basis_for(&a, 3).unwrap();
            for _ in 0..3 {
                let e = Endomorphism::new(&a, random_word(&a, 3, 2, &mut r)).unwrap();
                assert_eq!(e.matrix(3).unwrap(), e.matrix_by_evaluation(&basis).unwrap());
            }
        }
    }

    #[test]
    fn adjoints() {
        let mut r = rng::seeded(8);
        let m = av("model");
        let mv = m.model().unwrap();
        for i in 0..mv.rank() {
            let e = Endomorphism::generator(&m, &format!("B{}", i + 1)).unwrap();
            let direct = mv.adjoint(&mv.basis[i]).unwrap().to_fp(7);
            assert_eq!(e.rosati_adjoint_mod(7).unwrap(), direct);
        }
        for name in ["ec-ss-7", "g2-19"] {
            let a = av(name);
            let s = symmetric_sample(&a, &mut r).unwrap();
            assert!(s.is_symmetric_mod(5).unwrap());
            let x = Endomorphism::new(&a, random_word(&a, 2, 2, &mut r)).unwrap();
            let basis = basis_for(&a, 3).unwrap();
            let adj = basis.adjoint(&x.matrix(3).unwrap());
            assert_eq!(basis.adjoint(&adj), x.matrix(3).unwrap());
            assert_eq!(x.formal_adjoint().unwrap().matrix(3).unwrap(), adj);
        }
        let z = Endomorphism::new(&av("g2-19"), Word(vec![Term(1, vec!["zeta5".into()]), Term(1, vec!["zeta5".into(); 4])]))
            .unwrap();
        assert!(z.is_symmetric_mod(3).unwrap());
        assert_eq!(Endomorphism::scalar(&m, 3).add(&Endomorphism::scalar(&m, 3)).word, Word::scalar(6));
    }
}
