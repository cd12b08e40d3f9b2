//! The `avtri` command line: setup, encodings, trilinear evaluation, attacks, a self-test
//! and a timing table. Exit codes: 0 ok, 2 setup failure, 3 verification failure,
//! 64 usage, 65 corrupt or unreadable data.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::attacks::experiment::run_experiment_on;
use crate::attacks::planted::{noncentral_instance, planted, trimap_instance};
use crate::attacks::{attack_center, attack_direct_sum, check_solution, run_attack, AttackName, DlpInstance};
use crate::endo::{random_word, Endomorphism};
use crate::pairing::pair_theta;
use crate::rng;
use crate::torsion::basis_for;
use crate::trimap::{setup_report, setup_with, Construction, EncodingG3, Reject, TrilinearParams};
use crate::varieties::{AbelianVariety, Descriptor, GroupPoint};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SETUP: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Parser, Debug)]
#[command(name = "avtri", version, about = "Trilinear maps from abelian varieties, and attacks on them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ConstructionArg {
    LambdaImage,
    Orthogonal,
}

impl From<ConstructionArg> for Construction {
    fn from(c: ConstructionArg) -> Self {
        match c {
            ConstructionArg::LambdaImage => Construction::LambdaImage,
            ConstructionArg::Orthogonal => Construction::Orthogonal,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate trilinear parameters.
    Setup {
        /// Descriptor file or built-in name.
        #[arg(long)]
        backend: String,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "lambda-image")]
        construction: ConstructionArg,
    },
    /// Encode a value in group 1, 2 or 3.
    Encode {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        group: u8,
        #[arg(long)]
        value: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the trilinear map; prints the exponent.
    Tmap {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        e1: PathBuf,
        #[arg(long)]
        e2: PathBuf,
        #[arg(long)]
        e3: PathBuf,
    },
    /// Run an attack on an instance file, or on planted instances with `--trials`.
    Attack {
        #[arg(long)]
        attack: String,
        #[arg(long, conflicts_with = "trials")]
        instance: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        /// Backend for planted trials (default: the attack's own class).
        #[arg(long, requires = "trials")]
        backend: Option<String>,
        #[arg(long, requires = "backend")]
        ell: Option<u64>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariant checks on the shipped fixtures.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Per-operation timings as JSON.
    Bench {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A group-1 or group-2 encoding file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEncoding {
    pub ell: u64,
    pub group: u8,
    pub point: GroupPoint,
}

/// Why a command failed, and the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn data(e: Error) -> Failure {
    Failure::new(EXIT_DATA, e.to_string())
}

type CmdResult = std::result::Result<(), Failure>;

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn main_with<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: std::io::Write,
    E: std::io::Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn emit<W: std::io::Write>(out: &mut W, path: Option<&Path>, json: &str) -> CmdResult {
    match path {
        Some(p) => std::fs::write(p, format!("{json}\n")).map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", p.display()))),
        None => writeln!(out, "{json}").map_err(|e| Failure::new(EXIT_DATA, e.to_string())),
    }
}

/// A descriptor file if `name` names an existing file, otherwise a built-in backend.
pub fn load_backend(name: &str) -> std::result::Result<Arc<AbelianVariety>, Failure> {
    let p = Path::new(name);
    if p.is_file() {
        let d = Descriptor::from_json(&read(p)?).map_err(data)?;
        return AbelianVariety::from_descriptor(&d).map_err(data);
    }
    let d = Descriptor::named(name).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    AbelianVariety::from_descriptor(&d).map_err(data)
}

fn load_params(path: &Path) -> std::result::Result<TrilinearParams, Failure> {
    TrilinearParams::from_json(&read(path)?).map_err(data)
}

fn load_point(path: &Path, tp: &TrilinearParams, group: u8) -> std::result::Result<GroupPoint, Failure> {
    let e: PointEncoding = serde_json::from_str(&read(path)?).map_err(|e| data(e.into()))?;
    if e.group != group || e.ell != tp.ell || !tp.av.contains(&tp.domain, &e.point) {
        return Err(Failure::new(EXIT_DATA, format!("{}: not a group-{group} encoding for these params", path.display())));
    }
    Ok(e.point)
}

fn run<W: std::io::Write>(cmd: Command, out: &mut W) -> CmdResult {
    match cmd {
        Command::Setup { backend, ell, seed, out: path, construction } => cmd_setup(&backend, ell, seed, construction.into(), path.as_deref(), out),
        Command::Encode { params, group, value, seed, out: path } => {
            let tp = load_params(&params)?;
            let json = match group {
                3 => tp.encode3(value, &mut rng::seeded(seed)).map_err(data)?.to_json(),
                g => {
                    let point = if g == 1 { tp.encode1(value) } else { tp.encode2(value) }.map_err(data)?;
                    serde_json::to_string(&PointEncoding { ell: tp.ell, group: g, point }).expect("encoding serializes")
                }
            };
            emit(out, path.as_deref(), &json)
        }
        Command::Tmap { params, e1, e2, e3 } => {
            let tp = load_params(&params)?;
            let (p1, p2) = (load_point(&e1, &tp, 1)?, load_point(&e2, &tp, 2)?);
            let enc = EncodingG3::from_json(&read(&e3)?).map_err(data)?;
            let t = tp.tmap(&p1, &p2, &enc).map_err(data)?;
            writeln!(out, "{t}").map_err(|e| Failure::new(EXIT_DATA, e.to_string()))
        }
        Command::Attack { attack, instance, trials, backend, ell, seed, out: path } => {
            let name = AttackName::parse(&attack).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
            cmd_attack(name, instance.as_deref(), trials, backend.as_deref(), ell, seed, path.as_deref(), out)
        }
        Command::Selftest { seed } => cmd_selftest(seed, out),
        Command::Bench { seed, out: path } => cmd_bench(seed, path.as_deref(), out),
    }
}

fn cmd_setup<W: std::io::Write>(backend: &str, ell: u64, seed: u64, c: Construction, path: Option<&Path>, out: &mut W) -> CmdResult {
    let av = load_backend(backend)?;
    let (res, rejects) = setup_report(&av, ell, seed, c);
    let tp = match res {
        Ok(tp) => tp,
        Err(e @ (Error::SetupExhausted | Error::OutOfScope(_))) => {
            let mut msg = Error::SetupExhausted.to_string();
            if !matches!(e, Error::SetupExhausted) {
                msg = format!("{msg} ({e})");
            }
            if !rejects.is_empty() {
                msg = format!("{msg}; rejected attempts: {}", reject_summary(&rejects));
            }
            return Err(Failure::new(EXIT_SETUP, msg));
        }
        Err(e @ (Error::NotPrime(_) | Error::SizeCap(_) | Error::CharacteristicPrime(_))) => {
            return Err(Failure::new(EXIT_USAGE, e.to_string()))
        }
        Err(e) => return Err(Failure::new(EXIT_SETUP, e.to_string())),
    };
    let checks = tp.check_invariants().map_err(data)?;
    let w = |out: &mut W, s: String| writeln!(out, "{s}").map_err(|e| Failure::new(EXIT_DATA, e.to_string()));
    for (name, ok) in &checks {
        w(out, format!("{name}: {}", if *ok { "pass" } else { "FAIL" }))?;
    }
    if path.is_some() {
        emit(out, path, &tp.to_json())?;
    }
    if checks.iter().all(|(_, ok)| *ok) {
        Ok(())
    } else {
        Err(Failure::new(EXIT_VERIFY, "setup invariants failed"))
    }
}

fn reject_summary(rejects: &[Reject]) -> String {
    let mut counts: Vec<(Reject, usize)> = Vec::new();
    for r in rejects {
        match counts.iter_mut().find(|(k, _)| k == r) {
            Some((_, n)) => *n += 1,
            None => counts.push((*r, 1)),
        }
    }
    counts.iter().map(|(r, n)| format!("{r:?} x{n}")).collect::<Vec<_>>().join(", ")
}

#[allow(clippy::too_many_arguments)]
fn cmd_attack<W: std::io::Write>(
    name: AttackName,
    instance: Option<&Path>,
    trials: Option<usize>,
    backend: Option<&str>,
    ell: Option<u64>,
    seed: u64,
    path: Option<&Path>,
    out: &mut W,
) -> CmdResult {
    if let Some(n) = trials {
        let av = backend.map(load_backend).transpose()?;
        let class = match (&av, ell) {
            (Some(av), Some(l)) => Some((av, l)),
            (Some(_), None) => return Err(Failure::new(EXIT_USAGE, "--backend needs --ell")),
            _ => None,
        };
        let rep = run_experiment_on(name, class, n, seed).map_err(|e| Failure::new(EXIT_VERIFY, e.to_string()))?;
        emit(out, path, &serde_json::to_string(&rep).expect("report serializes"))?;
        return if rep.successes == rep.trials {
            Ok(())
        } else {
            Err(Failure::new(EXIT_VERIFY, format!("{}/{} trials recovered", rep.successes, rep.trials)))
        };
    }
    let path_in = instance.ok_or_else(|| Failure::new(EXIT_USAGE, "attack needs --instance or --trials"))?;
    let inst = DlpInstance::from_json(&read(path_in)?).map_err(data)?;
    let a = run_attack(name, &inst, &mut rng::seeded(seed)).map_err(|e| Failure::new(EXIT_VERIFY, e.to_string()))?;
    let ok = check_solution(&inst, a).map_err(data)?;
    let text = format!("a = {a}\nverified = {ok}");
    match path {
        Some(_) => emit(out, path, &text)?,
        None => writeln!(out, "{text}").map_err(|e| Failure::new(EXIT_DATA, e.to_string()))?,
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::new(EXIT_VERIFY, "recovered value does not verify"))
    }
}

/// One named check of the self-test.
fn check<W: std::io::Write>(out: &mut W, name: &str, r: Result<bool>) -> bool {
    let (ok, note) = match r {
        Ok(b) => (b, String::new()),
        Err(e) => (false, format!(" ({e})")),
    };
    let _ = writeln!(out, "{}: {name}{note}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn pairing_suite(backend: &str, ell: u64) -> Result<bool> {
    let av = AbelianVariety::named(backend)?;
    let b = basis_for(&av, ell)?;
    let n = b.dim();
    for i in 0..n {
        for j in 0..n {
            let (p, q) = (&b.points[i], &b.points[j]);
            let e = pair_theta(&av, &b.domain, p, q, ell)?.exponent;
            let f = pair_theta(&av, &b.domain, q, p, ell)?.exponent;
            if (e + f) % ell != 0 || (i == j && e != 0) {
                return Ok(false);
            }
            for a in 0..ell {
                let pa = av.mul(&b.domain, a as i64, p)?;
                if pair_theta(&av, &b.domain, &pa, q, ell)?.exponent != (a * e) % ell {
                    return Ok(false);
                }
            }
        }
    }
    Ok(b.gram.det() != 0)
}

fn char_poly_oracle(backend: &str, seed: u64) -> Result<bool> {
    let av = AbelianVariety::named(backend)?;
    let mut r = rng::stream(seed, 0xc0);
    for _ in 0..5 {
        let e = Endomorphism::new(&av, random_word(&av, 2, 2, &mut r))?;
        let f = e.char_poly(&mut r)?;
        for l in [3u64, 5, 7] {
            let Ok(m) = e.matrix(l) else { continue };
            let red: Vec<u64> = f.coeffs.iter().map(|c| c.rem_euclid(l as i128) as u64).collect();
            if m.char_poly() != red {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn trimap_suite(ell: u64, seed: u64) -> Result<bool> {
    let av = AbelianVariety::named("model")?;
    let tp = setup_with(&av, ell, seed, Construction::Orthogonal)?;
    if !tp.check_invariants()?.iter().all(|(_, ok)| *ok) {
        return Ok(false);
    }
    let mut r = rng::stream(seed, 0x3);
    for x in 0..ell {
        for y in 0..ell {
            for z in 0..ell {
                let t = tp.tmap(&tp.encode1(x)?, &tp.encode2(y)?, &tp.encode3(z, &mut r)?)?;
                if t != x * y * z % ell {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn attack_suite(seed: u64) -> Result<bool> {
    for name in AttackName::ALL {
        for i in 0..3 {
            let mut r = rng::stream(seed, i);
            let inst = planted(name, i, &mut r)?;
            if run_attack(name, &inst, &mut r)? != inst.truth.expect("planted") {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn negative_controls(seed: u64) -> Result<bool> {
    for i in 0..3 {
        let mut r = rng::stream(seed, 0x100 + i);
        if attack_direct_sum(&trimap_instance(5, seed + i, &mut r)?).is_ok() {
            return Ok(false);
        }
        if attack_center(&noncentral_instance(5, &mut r)?).is_ok() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn degree_law(seed: u64) -> Result<bool> {
    let mut r = rng::stream(seed, 0xd0);
    for backend in ["model-g1", "model"] {
        let av = AbelianVariety::named(backend)?;
        let g = av.g() as u32;
        let lam = Endomorphism::new(&av, random_word(&av, 2, 2, &mut r))?;
        let d = lam.degree(&mut r)?;
        for a in 1..=5i64 {
            if lam.scale(a).degree(&mut r)? != (a as i128).pow(2 * g) * d {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The `l_2`-image construction must reject every attempt for trivial `zeta`.
fn lambda_image_degeneracy(seed: u64) -> Result<bool> {
    let av = AbelianVariety::named("model")?;
    let (res, rejects) = setup_report(&av, 5, seed, Construction::LambdaImage);
    Ok(matches!(res, Err(Error::SetupExhausted)) && rejects.contains(&Reject::TrivialZeta))
}

fn cmd_selftest<W: std::io::Write>(seed: u64, out: &mut W) -> CmdResult {
    let results = [
        check(out, "pairing ec-ss-11 l=3", pairing_suite("ec-ss-11", 3)),
        check(out, "pairing g2-19 l=3", pairing_suite("g2-19", 3)),
        check(out, "char poly oracle ec-ss-7", char_poly_oracle("ec-ss-7", seed)),
        check(out, "char poly oracle model", char_poly_oracle("model", seed)),
        check(out, "frobenius on ec-ss-7 is x^2 + 7", frobenius_ec_ss_7()),
        check(out, "trimap l=3 exhaustive (orthogonal setup)", trimap_suite(3, seed)),
        check(out, "lambda-image setup has trivial zeta", lambda_image_degeneracy(seed)),
        check(out, "planted attacks", attack_suite(seed)),
        check(out, "negative controls", negative_controls(seed)),
        check(out, "degree law", degree_law(seed)),
    ];
    if results.iter().all(|b| *b) {
        Ok(())
    } else {
        Err(Failure::new(EXIT_VERIFY, "self-test failed"))
    }
}

fn frobenius_ec_ss_7() -> Result<bool> {
    let av = AbelianVariety::named("ec-ss-7")?;
    let pi = Endomorphism::generator(&av, crate::varieties::FROBENIUS)?;
    Ok(pi.char_poly(&mut rng::seeded(7))?.coeffs == vec![7, 0, 1])
}

#[derive(Serialize)]
struct BenchRow {
    ms: f64,
    op: String,
    reps: usize,
}

fn time<F: FnMut() -> Result<()>>(op: &str, reps: usize, mut f: F) -> std::result::Result<BenchRow, Failure> {
    let t0 = Instant::now();
    for _ in 0..reps {
        f().map_err(|e| Failure::new(EXIT_VERIFY, format!("{op}: {e}")))?;
    }
    Ok(BenchRow { ms: t0.elapsed().as_secs_f64() * 1e3 / reps as f64, op: op.into(), reps })
}

fn cmd_bench<W: std::io::Write>(seed: u64, path: Option<&Path>, out: &mut W) -> CmdResult {
    let mut r = rng::seeded(seed);
    let e11 = AbelianVariety::named("ec-ss-11").map_err(data)?;
    let b = basis_for(&e11, 5).map_err(data)?;
    let model = AbelianVariety::named("model").map_err(data)?;
    let tp = setup_with(&model, 7, seed, Construction::Orthogonal).map_err(|e| Failure::new(EXIT_SETUP, e.to_string()))?;
    let mut rows = vec![
        time("pair_theta ec-ss-11 l=5", 20, || pair_theta(&e11, &b.domain, &b.points[0], &b.points[1], 5).map(|_| ()))?,
        time("char_poly ec-ss-11 word", 5, || {
            let w = random_word(&e11, 2, 2, &mut r);
            Endomorphism::new(&e11, w)?.char_poly(&mut r).map(|_| ())
        })?,
        time("setup model l=7", 3, || setup_with(&model, 7, seed, Construction::Orthogonal).map(|_| ()))?,
        time("encode3 model l=7", 50, || tp.encode3(r.gen_range(0..7), &mut r).map(|_| ()))?,
    ];
    let e3 = tp.encode3(2, &mut r).map_err(data)?;
    let (p1, p2) = (tp.encode1(3).map_err(data)?, tp.encode2(4).map_err(data)?);
    rows.push(time("tmap model l=7", 50, || tp.tmap(&p1, &p2, &e3).map(|_| ()))?);
    for name in AttackName::ALL {
        let mut rr = rng::stream(seed, 0xbe);
        let inst = planted(name, 1, &mut rr).map_err(data)?;
        rows.push(time(&format!("attack {}", name.as_str()), 3, || run_attack(name, &inst, &mut rr).map(|_| ()))?);
    }
    emit(out, path, &serde_json::to_string(&rows).expect("rows serialize"))
}
