//! Attacks through characteristic polynomials: the degree, one sample, two commuting
//! samples, and two noncommuting samples with an explicit algebra description.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::arith::field::{Field, PrimeField};
use crate::arith::intpoly::IntMat;
use crate::arith::linalg::{span_coords, span_rank, MatFp};
use crate::arith::poly;
use crate::arith::primes::divisors;
use crate::arith::qlinalg;
use crate::endo::{Endomorphism, Term};
use crate::{Error, Result};

use super::DlpInstance;

fn cp_mod<R: Rng + ?Sized>(inst: &DlpInstance, e: &Endomorphism, rng: &mut R) -> Result<Vec<u64>> {
    let f = e.char_poly_bounded(&[inst.ell], 0, rng)?;
    Ok(f.coeffs.iter().map(|c| c.rem_euclid(inst.ell as i128) as u64).collect())
}

fn unique(found: Vec<u64>) -> Result<u64> {
    let mut found = found;
    found.sort_unstable();
    found.dedup();
    match found.as_slice() {
        [a] => Ok(*a),
        [] => Err(Error::NotInClass("no candidate survives the action check".into())),
        _ => Err(Error::NotInClass(format!("{} candidates survive the action check", found.len()))),
    }
}

/// `M = l E`: `deg(target) ≡ a^{2g} mod l`; candidates are checked against `target(P) = aP`.
pub fn attack_scalar_degree<R: Rng + ?Sized>(inst: &DlpInstance, rng: &mut R) -> Result<u64> {
    let l = inst.ell;
    let fl = PrimeField::new(l)?;
    let deg = inst.target.char_poly_bounded(&[l], 0, rng)?.coeffs[0].rem_euclid(l as i128) as u64;
    let one = Endomorphism::scalar(&inst.av, 1);
    let mut found = Vec::new();
    for a in 0..l {
        if fl.pow_u64(&a, 2 * inst.av.g() as u64) == deg && inst.acts_as(&[(a, &one)])? {
            found.push(a);
        }
    }
    unique(found)
}

/// `b^{2g} f((x - a) / b)`: the characteristic polynomial of `a + b lambda`.
fn shifted(fl: &PrimeField, f: &[u64], a: u64, b: u64) -> Vec<u64> {
    let binv = fl.inv(&b).expect("b != 0");
    let lin = vec![fl.neg(&fl.mul(&a, &binv)), binv];
    let scale = fl.pow_u64(&b, (f.len() - 1) as u64);
    poly::scale(fl, &poly::compose(fl, f, &lin), &scale)
}

/// `dim M/lM = 1`: match `char_poly(target) = b^{2g} f((x - a)/b)` over `(a, b)`, `b != 0`,
/// then fall back to `b = 0`; every hit is checked by its action on `A[l]`.
pub fn attack_dim1<R: Rng + ?Sized>(inst: &DlpInstance, rng: &mut R) -> Result<u64> {
    let l = inst.ell;
    let fl = PrimeField::new(l)?;
    let mut lam = None;
    for s in &inst.samples {
        if !s.matrix(l)?.is_zero() {
            lam = Some(s);
            break;
        }
    }
    let lam = lam.ok_or_else(|| Error::NotInClass("every sample vanishes mod l".into()))?;
    let f = cp_mod(inst, lam, rng)?;
    let g = cp_mod(inst, &inst.target, rng)?;
    let one = Endomorphism::scalar(&inst.av, 1);
    let mut found = Vec::new();
    for b in 1..l {
        for a in 0..l {
            if shifted(&fl, &f, a, b) == g && inst.acts_as(&[(a, &one), (b, lam)])? {
                found.push(a);
            }
        }
    }
    if found.is_empty() {
        for a in 0..l {
            let lin = vec![fl.neg(&a), 1];
            let pw = (0..f.len() - 1).fold(vec![1u64], |acc, _| poly::mul(&fl, &acc, &lin));
            if pw == g && inst.acts_as(&[(a, &one)])? {
                found.push(a);
            }
        }
    }
    unique(found)
}

fn poly_pow(fl: &PrimeField, f: &[u64], e: usize) -> Vec<u64> {
    (0..e).fold(vec![1u64], |acc, _| poly::mul(fl, &acc, f))
}

/// Two commuting samples `lambda, mu`. `f_s` is the square-free part of `char_poly(lambda)`
/// mod `l`; the algebra `F_l[lambda, mu]` gets the basis of monomials `lambda^i mu^j`
/// (`i < deg f_s`) independent on `A[l]`, and its multiplication by `lambda` and `mu` is
/// read off by linear algebra. `F(a, b, c)` is the characteristic polynomial of the regular
/// representation, and `F^{2g/n}` is matched against `char_poly(target)` over `F_l^3`, then
/// over all coordinates in the monomial basis if no triple survives.
pub fn attack_commuting<R: Rng + ?Sized>(inst: &DlpInstance, rng: &mut R) -> Result<u64> {
    let l = inst.ell;
    let fl = PrimeField::new(l)?;
    if inst.samples.len() < 2 {
        return Err(Error::NotInClass("two samples needed".into()));
    }
    let (lam, mu) = (&inst.samples[0], &inst.samples[1]);
    let (ml, mm) = (lam.matrix(l)?, mu.matrix(l)?);
    if !ml.commutes_with(&mm) {
        return Err(Error::NotInClass("samples do not commute mod l".into()));
    }
    let f = cp_mod(inst, lam, rng)?;
    let fs = poly::squarefree_factorization(&fl, &f).into_iter().fold(vec![1u64], |acc, (g, _)| poly::mul(&fl, &acc, &g));
    if !ml.eval_poly(&fs).is_zero() {
        return Err(Error::Degenerate("lambda is not semisimple mod l".into()));
    }
    let df = fs.len() - 1;
    let g2 = inst.av.dim();
    // greedy monomial basis, kept as (i, j, matrix)
    let mut monos: Vec<(usize, usize, MatFp)> = Vec::new();
    let mut flats: Vec<Vec<u64>> = Vec::new();
    let mut mu_pow = MatFp::identity(l, ml.rows);
    for j in 0..=g2 {
        let mut cur = mu_pow.clone();
        for i in 0..df {
            let v = cur.flatten();
            let mut trial = flats.clone();
            trial.push(v.clone());
            if span_rank(l, &trial) > flats.len() {
                flats = trial;
                monos.push((i, j, cur.clone()));
            }
            cur = ml.mul(&cur);
        }
        mu_pow = mu_pow.mul(&mm);
    }
    let n = monos.len();
    if g2 % n != 0 {
        return Err(Error::Degenerate(format!("algebra of dimension {n} does not divide {g2}")));
    }
    let left = |x: &MatFp| -> Result<MatFp> {
        let cols = monos
            .iter()
            .map(|(_, _, b)| span_coords(l, &flats, &x.mul(b).flatten()).map(|(c, _)| c))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Degenerate("monomials not closed under multiplication".into()))?;
        Ok(MatFp::from_columns(l, &cols))
    };
    let (llam, lmu) = (left(&ml)?, left(&mm)?);
    let g = cp_mod(inst, &inst.target, rng)?;
    let one = Endomorphism::scalar(&inst.av, 1);
    let matches = |m: &MatFp| poly_pow(&fl, &m.char_poly(), g2 / n) == g;
    let mut found = Vec::new();
    for a in 0..l {
        for b in 0..l {
            for c in 0..l {
                let m = MatFp::scalar(l, n, a as i64).add(&llam.scale(b as i64)).add(&lmu.scale(c as i64));
                if matches(&m) && inst.acts_as(&[(a, &one), (b, lam), (c, mu)])? {
                    found.push(a);
                }
            }
        }
    }
    if found.is_empty() && n > 3 {
        let words: Vec<Endomorphism> = monos
            .iter()
            .map(|(i, j, _)| {
                let mut e = one.clone();
                for _ in 0..*i {
                    e = e.compose(lam);
                }
                for _ in 0..*j {
                    e = e.compose(mu);
                }
                e
            })
            .collect();
        // regular representation of each basis monomial
        let regs: Vec<MatFp> = monos.iter().map(|(_, _, b)| left(b)).collect::<Result<_>>()?;
        for code in 0..l.pow(n as u32) {
            let coeffs: Vec<u64> = (0..n).map(|t| (code / l.pow(t as u32)) % l).collect();
            let mut m = MatFp::zeros(l, n, n);
            for (c, reg) in coeffs.iter().zip(&regs) {
                m = m.add(&reg.scale(*c as i64));
            }
            if matches(&m) {
                let combo: Vec<(u64, &Endomorphism)> = coeffs.iter().copied().zip(words.iter()).collect();
                if inst.acts_as(&combo)? {
                    found.push(coeffs[0]);
                }
            }
        }
    }
    unique(found)
}

/// A `Q`-basis of `Q[lambda, mu]` (first element 1) as integer matrices, structure
/// constants `table[i][j]` = coordinates of `b_i b_j`, and the coordinates of `lambda, mu`.
#[derive(Clone, Debug)]
pub struct AlgebraDescription {
    pub basis: Vec<IntMat>,
    pub table: Vec<Vec<Vec<BigRational>>>,
    pub lambda: Vec<BigRational>,
    pub mu: Vec<BigRational>,
}

fn flat_q(m: &IntMat) -> Vec<BigRational> {
    m.data.iter().map(|v| BigRational::from_integer(BigInt::from(*v))).collect()
}

/// Integer matrix of a model word.
fn model_matrix(e: &Endomorphism) -> Result<IntMat> {
    let m = e.variety().model().ok_or_else(|| Error::OutOfScope("description needs the model backend".into()))?;
    let mut acc = IntMat::zeros(m.dim());
    for Term(c, gens) in &e.word.0 {
        let mut t = IntMat::identity(m.dim());
        for g in gens {
            let i: usize = g[1..].parse::<usize>().map_err(|_| Error::UnknownGenerator(g.clone()))? - 1;
            t = t.mul(&m.basis[i]);
        }
        acc = acc.add(&t.scale(*c as i128));
    }
    Ok(acc)
}

/// The description the model knows by construction: closure of `{1, lambda, mu}` under left
/// multiplication by `lambda` and `mu`, computed exactly over `Q`.
pub fn describe_algebra(lam: &Endomorphism, mu: &Endomorphism) -> Result<AlgebraDescription> {
    let (ml, mm) = (model_matrix(lam)?, model_matrix(mu)?);
    let n = ml.n;
    let mut basis: Vec<IntMat> = Vec::new();
    let mut flats: Vec<Vec<BigRational>> = Vec::new();
    let mut queue = std::collections::VecDeque::from([IntMat::identity(n), ml.clone(), mm.clone()]);
    while let Some(m) = queue.pop_front() {
        let mut trial = flats.clone();
        trial.push(flat_q(&m));
        if qlinalg::rank(&trial) > flats.len() {
            flats = trial;
            queue.push_back(ml.mul(&m));
            queue.push_back(mm.mul(&m));
            basis.push(m);
        }
    }
    let coords = |m: &IntMat| qlinalg::solve(&flats, &flat_q(m)).ok_or_else(|| Error::Verification("closure".into()));
    let table = basis.iter().map(|a| basis.iter().map(|b| coords(&a.mul(b))).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    Ok(AlgebraDescription { lambda: coords(&ml)?, mu: coords(&mm)?, table, basis })
}

fn q_mod(x: &BigRational, l: u64) -> Result<u64> {
    let lb = BigInt::from(l);
    let num = x.numer().mod_floor(&lb);
    let den = x.denom().mod_floor(&lb);
    if den.is_zero() {
        return Err(Error::DescriptionInsufficient);
    }
    let fl = PrimeField::new(l)?;
    let (n, d) = (num.to_u64().expect("small"), den.to_u64().expect("small"));
    Ok(fl.mul(&n, &fl.inv(&d).expect("nonzero")))
}

/// Noncommuting samples with a description of `K = Q[lambda, mu]`: `F(a, b, c)` is the
/// characteristic polynomial of `a + b lambda + c mu` on `K`, and for each admissible
/// `d_rho | 2g` with `d_rho >= 3` a triple qualifies when `char_poly(target) = rho h mod l`
/// is compatible with `F = rho H`. For `g <= 2` the only admissible value is `d_rho = 2g`,
/// where `h` is constant and the condition is `char_poly(target) | F`.
pub fn attack_noncommutative_system<R: Rng + ?Sized>(inst: &DlpInstance, desc: &AlgebraDescription, rng: &mut R) -> Result<u64> {
    let l = inst.ell;
    let fl = PrimeField::new(l)?;
    let g2 = inst.av.dim();
    let admissible: Vec<usize> = divisors(g2 as u64).into_iter().map(|d| d as usize).filter(|d| *d >= 3).collect();
    if admissible.is_empty() {
        return Err(Error::DescriptionInsufficient);
    }
    let n = desc.basis.len();
    let mut regs = Vec::with_capacity(n);
    for k in 0..n {
        let mut m = MatFp::zeros(l, n, n);
        for j in 0..n {
            for (i, c) in desc.table[k][j].iter().enumerate() {
                m.set(i, j, q_mod(c, l)?);
            }
        }
        regs.push(m);
    }
    let combo = |v: &[BigRational]| -> Result<MatFp> {
        let mut m = MatFp::zeros(l, n, n);
        for (c, r) in v.iter().zip(&regs) {
            m = m.add(&r.scale(q_mod(c, l)? as i64));
        }
        Ok(m)
    };
    let (llam, lmu) = (combo(&desc.lambda)?, combo(&desc.mu)?);
    let g = cp_mod(inst, &inst.target, rng)?;
    let (lam, mu) = (&inst.samples[0], &inst.samples[1]);
    let one = Endomorphism::scalar(&inst.av, 1);
    let mut found = Vec::new();
    for a in 0..l {
        for b in 0..l {
            for c in 0..l {
                let m = MatFp::scalar(l, n, a as i64).add(&llam.scale(b as i64)).add(&lmu.scale(c as i64));
                let f = m.char_poly();
                let ok = admissible.iter().any(|&d| d == g2 && poly::rem(&fl, &f, &g).is_empty());
                if ok && inst.acts_as(&[(a, &one), (b, lam), (c, mu)])? {
                    found.push(a);
                }
            }
        }
    }
    unique(found).map_err(|e| match e {
        Error::NotInClass(m) if m.starts_with("no candidate") => Error::DescriptionInsufficient,
        e => e,
    })
}
