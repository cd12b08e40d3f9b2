//! Discrete-logarithm attacks on `(M_1/M) ⊗ Z/l`: given samples of `M` and a target
//! `lambda ∈ M_1`, find `a` with `lambda - a ∈ M mod l`.

mod center;
mod charpoly;
pub mod experiment;
mod linear;
pub mod planted;

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::crt::{crt_combine, signed_rep};
use crate::arith::linalg::MatFp;
use crate::arith::primes::small_primes;
use crate::endo::{Endomorphism, Word};
use crate::varieties::{AbelianVariety, Descriptor};
use crate::{Error, Result};

pub use center::attack_center;
pub use charpoly::{
    attack_commuting, attack_dim1, attack_noncommutative_system, attack_scalar_degree, describe_algebra,
    AlgebraDescription,
};
pub use linear::{attack_direct_sum, attack_effective_basis};

#[derive(Clone, Debug)]
pub struct DlpInstance {
    pub av: Arc<AbelianVariety>,
    pub ell: u64,
    pub samples: Vec<Endomorphism>,
    pub target: Endomorphism,
    pub truth: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    backend: Descriptor,
    ell: u64,
    samples: Vec<Word>,
    target: Word,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truth: Option<u64>,
}

impl DlpInstance {
    pub fn new(av: &Arc<AbelianVariety>, ell: u64, samples: Vec<Endomorphism>, target: Endomorphism) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidData("instance needs at least one sample".into()));
        }
        Ok(DlpInstance { av: av.clone(), ell, samples, target, truth: None })
    }

    pub fn to_json(&self) -> String {
        let f = InstanceFile {
            backend: self.av.descriptor.clone(),
            ell: self.ell,
            samples: self.samples.iter().map(|s| s.word.clone()).collect(),
            target: self.target.word.clone(),
            truth: self.truth,
        };
        serde_json::to_string(&f).expect("instance serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: InstanceFile = serde_json::from_str(s)?;
        let av = AbelianVariety::from_descriptor(&f.backend)?;
        let samples = f.samples.into_iter().map(|w| Endomorphism::new(&av, w)).collect::<Result<_>>()?;
        let mut inst = DlpInstance::new(&av, f.ell, samples, Endomorphism::new(&av, f.target)?)?;
        inst.truth = f.truth;
        Ok(inst)
    }

    /// Auxiliary primes: ascending, skipping `l` and the characteristic.
    fn aux_primes(&self) -> impl Iterator<Item = u64> {
        let mut skip = vec![self.ell];
        if !self.av.is_model() {
            skip.push(self.av.q());
        }
        small_primes(&skip).take_while(|p| *p < 100).collect::<Vec<_>>().into_iter()
    }

    /// Whether `target = sum c_i x_i` on `A[l]`, compared on every basis point.
    fn acts_as(&self, combo: &[(u64, &Endomorphism)]) -> Result<bool> {
        let l = self.ell;
        let mut rhs = MatFp::zeros(l, self.av.dim(), self.av.dim());
        for (c, e) in combo {
            rhs = rhs.add(&e.matrix(l)?.scale(*c as i64));
        }
        Ok(self.target.matrix(l)? == rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackName {
    DirectSum,
    ScalarDegree,
    Dim1,
    Commuting,
    Noncommutative,
    Center,
    EffectiveBasis,
}

impl AttackName {
    pub const ALL: [AttackName; 7] = [
        AttackName::DirectSum,
        AttackName::ScalarDegree,
        AttackName::Dim1,
        AttackName::Commuting,
        AttackName::Noncommutative,
        AttackName::Center,
        AttackName::EffectiveBasis,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AttackName::DirectSum => "direct_sum",
            AttackName::ScalarDegree => "scalar_degree",
            AttackName::Dim1 => "dim1",
            AttackName::Commuting => "commuting",
            AttackName::Noncommutative => "noncommutative",
            AttackName::Center => "center",
            AttackName::EffectiveBasis => "effective_basis",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::InvalidData(format!("unknown attack {s}")))
    }

    /// Instance class the attack is meant for.
    pub fn class(&self) -> &'static str {
        match self {
            AttackName::DirectSum => "M1 = Z + M",
            AttackName::ScalarDegree => "M = lE",
            AttackName::Dim1 => "dim M/lM = 1",
            AttackName::Commuting => "M/lM spanned by two commuting elements",
            AttackName::Noncommutative => "explicit description of Q[lambda, mu] given",
            AttackName::Center => "M inside the center",
            AttackName::EffectiveBasis => "effective Z-basis of a module containing M1",
        }
    }
}

/// Run an attack; the two attacks that take extra input get the model's own data.
pub fn run_attack<R: Rng + ?Sized>(name: AttackName, inst: &DlpInstance, rng: &mut R) -> Result<u64> {
    match name {
        AttackName::DirectSum => attack_direct_sum(inst),
        AttackName::ScalarDegree => attack_scalar_degree(inst, rng),
        AttackName::Dim1 => attack_dim1(inst, rng),
        AttackName::Commuting => attack_commuting(inst, rng),
        AttackName::Noncommutative => {
            let d = describe_algebra(&inst.samples[0], &inst.samples[1])?;
            attack_noncommutative_system(inst, &d, rng)
        }
        AttackName::Center => attack_center(inst),
        AttackName::EffectiveBasis => {
            let m = inst.av.model().ok_or_else(|| Error::OutOfScope("no effective basis for this backend".into()))?;
            let basis = m
                .generator_names()
                .iter()
                .map(|g| Endomorphism::generator(&inst.av, g))
                .collect::<Result<Vec<_>>>()?;
            attack_effective_basis(inst, &basis)
        }
    }
}

/// Whether `a` is a valid answer: `a` equals the planted value when there is one, and
/// otherwise `target - a` lies in the span of the samples and their pairwise products on
/// `A[l]`.
pub fn check_solution(inst: &DlpInstance, a: u64) -> Result<bool> {
    if let Some(t) = inst.truth {
        return Ok(t % inst.ell == a % inst.ell);
    }
    let l = inst.ell;
    let mut gens: Vec<Vec<u64>> = Vec::new();
    for s in &inst.samples {
        gens.push(s.matrix(l)?.flatten());
        for u in &inst.samples {
            gens.push(s.matrix(l)?.mul(&u.matrix(l)?).flatten());
        }
    }
    let diff = inst.target.shift(a as i64).matrix(l)?.flatten();
    Ok(crate::arith::linalg::span_coords(l, &gens, &diff).is_some())
}

/// Incremental CRT over auxiliary primes: push residues until two consecutive signed
/// reconstructions agree.
#[derive(Default)]
struct CrtVec {
    residues: Vec<Vec<(i128, i128)>>,
    prev: Option<Vec<i128>>,
}

impl CrtVec {
    /// Returns the stable vector once consecutive reconstructions agree.
    fn push(&mut self, values: &[u64], ell: u64) -> Result<Option<Vec<i128>>> {
        if self.residues.is_empty() {
            self.residues = vec![Vec::new(); values.len()];
        }
        for (r, v) in self.residues.iter_mut().zip(values) {
            r.push((*v as i128, ell as i128));
        }
        let rec: Vec<i128> =
            self.residues.iter().map(|r| crt_combine(r).map(|(v, m)| signed_rep(v, m))).collect::<Result<_>>()?;
        let stable = self.prev.as_ref() == Some(&rec);
        self.prev = Some(rec.clone());
        Ok(stable.then_some(rec))
    }
}

fn flat_matrices(es: &[&Endomorphism], ell: u64) -> Result<Vec<Vec<u64>>> {
    es.iter().map(|e| e.matrix(ell).map(|m| m.flatten())).collect()
}

fn identity_flat(ell: u64, n: usize) -> Vec<u64> {
    MatFp::identity(ell, n).flatten()
}

#[cfg(test)]
mod tests {
    use super::planted::{noncentral_instance, planted_on, trimap_instance};
    use super::*;
    use crate::endo::{random_word, symmetric_sample, Term};
    use crate::rng;
    use crate::varieties::FROBENIUS;

    fn av(name: &str) -> Arc<AbelianVariety> {
        AbelianVariety::named(name).unwrap()
    }

    fn inst(av: &Arc<AbelianVariety>, ell: u64, samples: Vec<Endomorphism>, target: Endomorphism) -> DlpInstance {
        DlpInstance::new(av, ell, samples, target).unwrap()
    }

    /// Two symmetric samples of the planted direct-sum class, `1` free of them.
    fn sym_pair(av: &Arc<AbelianVariety>, ell: u64, seed: u64) -> (Endomorphism, Endomorphism) {
        let mut r = rng::seeded(seed);
        let i = planted_on(AttackName::DirectSum, av, ell, &mut r).unwrap();
        (i.samples[0].clone(), i.samples[1].clone())
    }

    #[test]
    fn direct_sum_examples() {
        let m = av("model");
        let (s1, s2) = sym_pair(&m, 7, 1);
        let t = s1.sub(&s2.scale(2)).shift(-3);
        assert_eq!(attack_direct_sum(&inst(&m, 7, vec![s1.clone(), s2.clone()], t)).unwrap(), 3);
        assert_eq!(attack_direct_sum(&inst(&m, 7, vec![s1.clone(), s2.clone()], s2.clone())).unwrap(), 0);
        // -3 = 4 mod 7
        let t = s1.shift(3);
        assert_eq!(attack_direct_sum(&inst(&m, 7, vec![s1, s2], t)).unwrap(), 4);
    }

    #[test]
    fn direct_sum_rejects_trimap_instance() {
        for seed in 0..3 {
            let mut r = rng::seeded(seed);
            let i = trimap_instance(5, seed, &mut r).unwrap();
            assert!(matches!(attack_direct_sum(&i), Err(Error::NotInClass(_))));
        }
    }

    #[test]
    fn scalar_degree_examples() {
        let g1 = av("model-g1");
        let mut r = rng::seeded(2);
        let mu = Endomorphism::new(&g1, random_word(&g1, 2, 2, &mut r)).unwrap();
        let samples = vec![mu.scale(7)];
        // 3^2 = 9 = 2 mod 7, so both 3 and 4 survive the degree test
        let t = mu.scale(7).shift(-3);
        assert_eq!(t.degree(&mut r).unwrap().rem_euclid(7), 2);
        assert_eq!(attack_scalar_degree(&inst(&g1, 7, samples.clone(), t), &mut r).unwrap(), 3);
        assert_eq!(attack_scalar_degree(&inst(&g1, 7, samples.clone(), mu.scale(7)), &mut r).unwrap(), 0);
        let g2 = av("model");
        let nu = Endomorphism::new(&g2, random_word(&g2, 2, 2, &mut r)).unwrap();
        let t = nu.scale(7).shift(-1);
        assert_eq!(attack_scalar_degree(&inst(&g2, 7, vec![nu.scale(7)], t), &mut r).unwrap(), 1);
        // a target that is not a scalar mod l
        let bad = inst(&g2, 7, vec![nu.scale(7)], Endomorphism::generator(&g2, "B2").unwrap());
        assert!(matches!(attack_scalar_degree(&bad, &mut r), Err(Error::NotInClass(_))));
    }

    #[test]
    fn dim1_examples() {
        let m = av("model");
        let mut r = rng::seeded(3);
        let lam = planted_on(AttackName::Dim1, &m, 7, &mut r).unwrap().samples[0].clone();
        let mu = Endomorphism::new(&m, random_word(&m, 2, 2, &mut r)).unwrap();
        let t = lam.scale(3).shift(-2);
        assert_eq!(attack_dim1(&inst(&m, 7, vec![lam.clone()], t), &mut r).unwrap(), 2);
        assert_eq!(attack_dim1(&inst(&m, 7, vec![lam.clone()], lam.clone()), &mut r).unwrap(), 0);
        // b = 0: only the fallback scan sees it
        let t = mu.scale(7).shift(-5);
        assert_eq!(attack_dim1(&inst(&m, 7, vec![lam], t), &mut r).unwrap(), 5);
    }

    #[test]
    fn commuting_examples() {
        let m = av("model");
        let mut r = rng::seeded(4);
        let base = planted_on(AttackName::Commuting, &m, 7, &mut r).unwrap();
        let (lam, mu) = (base.samples[0].clone(), base.samples[1].clone());
        let t = lam.add(&mu.scale(2)).shift(-4);
        assert_eq!(attack_commuting(&inst(&m, 7, vec![lam.clone(), mu.clone()], t), &mut r).unwrap(), 4);
        let t = lam.scale(2).shift(-6);
        assert_eq!(attack_commuting(&inst(&m, 7, vec![lam.clone(), lam.clone()], t), &mut r).unwrap(), 6);
        let t = lam.compose(&mu);
        assert_eq!(attack_commuting(&inst(&m, 7, vec![lam.clone(), mu.clone()], t), &mut r).unwrap(), 0);
    }

    #[test]
    fn commuting_rejects_noncommuting_pair() {
        let m = av("model");
        let mut r = rng::seeded(5);
        let i = planted_on(AttackName::Noncommutative, &m, 7, &mut r).unwrap();
        assert!(matches!(attack_commuting(&i, &mut r), Err(Error::NotInClass(_))));
    }

    #[test]
    fn noncommutative_examples() {
        let m = av("model");
        let mut r = rng::seeded(6);
        let base = planted_on(AttackName::Noncommutative, &m, 11, &mut r).unwrap();
        let (lam, mu) = (base.samples[0].clone(), base.samples[1].clone());
        let d = describe_algebra(&lam, &mu).unwrap();
        assert_eq!(d.basis[0], crate::arith::intpoly::IntMat::identity(4));
        let t = lam.scale(3).add(&mu.scale(-2)).shift(-5);
        let i = inst(&m, 11, vec![lam.clone(), mu.clone()], t);
        assert_eq!(attack_noncommutative_system(&i, &d, &mut r).unwrap(), 5);
        let i = inst(&m, 11, vec![lam.clone(), mu.clone()], Endomorphism::scalar(&m, 9));
        assert_eq!(attack_noncommutative_system(&i, &d, &mut r).unwrap(), 9);
        let e = av("ec-ss-11");
        let pi = Endomorphism::generator(&e, FROBENIUS).unwrap();
        assert!(matches!(describe_algebra(&pi, &pi), Err(Error::OutOfScope(_))));
        let g1 = av("model-g1");
        let s = symmetric_sample(&g1, &mut r).unwrap();
        let d1 = describe_algebra(&s, &s).unwrap();
        let i = inst(&g1, 11, vec![s.clone(), s.clone()], s.shift(-2));
        assert!(matches!(attack_noncommutative_system(&i, &d1, &mut r), Err(Error::DescriptionInsufficient)));
    }

    #[test]
    fn description_is_closed() {
        let m = av("model");
        let mut r = rng::seeded(7);
        let base = planted_on(AttackName::Noncommutative, &m, 11, &mut r).unwrap();
        let d = describe_algebra(&base.samples[0], &base.samples[1]).unwrap();
        // recombining the table reproduces every product
        for (i, a) in d.basis.iter().enumerate() {
            for (j, b) in d.basis.iter().enumerate() {
                let prod = a.mul(b);
                let mut acc = vec![num_rational::BigRational::from_integer(0.into()); 16];
                for (k, c) in d.table[i][j].iter().enumerate() {
                    for (x, v) in acc.iter_mut().zip(&d.basis[k].data) {
                        *x += c * num_rational::BigRational::from_integer((*v).into());
                    }
                }
                let want: Vec<_> = prod.data.iter().map(|v| num_rational::BigRational::from_integer((*v).into())).collect();
                assert_eq!(acc, want);
            }
        }
    }

    #[test]
    fn center_examples() {
        let e = av("ec-ord-7");
        let pi = Endomorphism::generator(&e, FROBENIUS).unwrap();
        let s = pi.scale(2).shift(-10);
        let t = s.scale(-1).shift(-2);
        assert_eq!(attack_center(&inst(&e, 5, vec![s.clone()], t)).unwrap(), 2);
        assert_eq!(attack_center(&inst(&e, 5, vec![pi.clone()], pi.clone())).unwrap(), 0);
        let v = Endomorphism::new(&e, Word(vec![Term(1, vec!["verschiebung".into()])])).unwrap();
        // V = t - pi, so V + pi - 3 ≡ t - 3 is central with a = t - 3
        let tr = -e.frobenius_char_poly().unwrap()[1];
        let got = attack_center(&inst(&e, 5, vec![pi.clone()], v)).unwrap();
        assert_eq!(got as i128, tr.rem_euclid(5));
    }

    #[test]
    fn center_rejects_noncentral() {
        for seed in 0..3 {
            let mut r = rng::seeded(seed);
            let i = noncentral_instance(5, &mut r).unwrap();
            assert_eq!(attack_center(&i), Err(Error::NotInCenter));
        }
        let m = av("model");
        let b1 = Endomorphism::generator(&m, "B2").unwrap();
        assert_eq!(attack_center(&inst(&m, 7, vec![b1.clone()], b1.shift(-1))), Err(Error::NotInCenter));
    }

    #[test]
    fn effective_basis_examples() {
        let m = av("model");
        let mut r = rng::seeded(8);
        let base = planted_on(AttackName::EffectiveBasis, &m, 11, &mut r).unwrap();
        let (s1, s2) = (base.samples[0].clone(), base.samples[1].clone());
        let full: Vec<Endomorphism> =
            m.model().unwrap().generator_names().iter().map(|g| Endomorphism::generator(&m, g).unwrap()).collect();
        let t = s1.scale(2).add(&s2).shift(-7);
        let i = inst(&m, 11, vec![s1.clone(), s2.clone()], t);
        assert_eq!(attack_effective_basis(&i, &full).unwrap(), 7);
        let i0 = inst(&m, 11, vec![s1.clone(), s2.clone()], s1.sub(&s2));
        assert_eq!(attack_effective_basis(&i0, &full).unwrap(), 0);
        assert!(matches!(attack_effective_basis(&i, &full[1..]), Err(Error::NotInClass(_))));
    }

    #[test]
    fn instance_json_roundtrip() {
        let mut r = rng::seeded(9);
        let i = planted_on(AttackName::DirectSum, &av("model"), 7, &mut r).unwrap();
        let j = DlpInstance::from_json(&i.to_json()).unwrap();
        assert_eq!(j.to_json(), i.to_json());
        assert_eq!(j.truth, i.truth);
        assert!(DlpInstance::from_json(r#"{"backend":1}"#).is_err());
    }

    #[test]
    fn experiment_is_deterministic() {
        let a = super::experiment::run_trials(AttackName::Dim1, 4, 3).unwrap();
        let b = super::experiment::run_trials(AttackName::Dim1, 4, 3).unwrap();
        let f = |v: &[super::experiment::Trial]| v.iter().map(|t| (t.truth, t.result.clone())).collect::<Vec<_>>();
        assert_eq!(f(&a), f(&b));
        let rep = super::experiment::run_experiment(AttackName::Dim1, 4, 3).unwrap();
        assert_eq!((rep.trials, rep.successes), (4, 4));
    }
}
