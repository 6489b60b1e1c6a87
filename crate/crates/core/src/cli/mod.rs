//! The `semifrob` command-line interface.

mod document;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

pub use document::{FaceLattice, MonoidDocument};

use crate::cartier::{self, CartierError, FaceUnionIdeal, IdealReport};
use crate::cone::ConeError;
use crate::frac::{format_ratio, FracPoint};
use crate::frob::{self, FrobError, HomChecker, Mode, Oracle, OracleVerdict};
use crate::invariants::{self, FaceReport, InvariantsError};
use crate::linalg::{format_vector, IntVector, LinalgError};
use crate::monoid::{MonoidError, SeminormalMonoid};
use crate::prime::Prime;

#[derive(Debug, Parser)]
#[command(name = "semifrob", version, about = "Frobenius-splitting invariants of seminormal monoid algebras")]
struct Cli {
    /// Prime characteristic; overrides the document's `prime`.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Monoid document (JSON).
    input: PathBuf,
}

#[derive(Debug, Args)]
struct HomArgs {
    #[command(flatten)]
    input: Input,
    #[arg(short = 'e', long = "level")]
    e: u32,
    /// Numerator of `a` at level `e`, comma separated.
    #[arg(short = 'a', allow_hyphen_values = true)]
    a: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a document and optionally print its normalized form.
    Validate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        emit_normalized: bool,
    },
    /// Classify every face.
    Classify(Input),
    /// Decide F-splitting.
    IsFsplit(Input),
    /// Decide whether π_a is a homomorphism via the face criterion.
    HomCheck {
        #[command(flatten)]
        hom: HomArgs,
        /// Evaluate the conditions even below e_min.
        #[arg(long)]
        conditions_only: bool,
    },
    /// Decide whether π_a is a homomorphism by brute force over a height box.
    HomOracle {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(long = "box", default_value_t = 12)]
        radius: i64,
    },
    /// Splitting numbers, ratio, dimension and prime.
    Splitting {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 4)]
        e_max: u32,
    },
    /// The F-splitting ratio.
    Ratio(Input),
    /// All nonzero Cartier-fixed ideals.
    Ideals {
        #[command(flatten)]
        input: Input,
        /// Height bound for listed generators.
        #[arg(long, default_value_t = 4)]
        height: i64,
    },
    /// The test ideal.
    TestIdeal {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 4)]
        height: i64,
    },
    /// The non-F-pure ideal.
    Sigma {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 4)]
        height: i64,
    },
    /// Index of the composite π_a · π_b.
    Compose {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        e1: u32,
        #[arg(short = 'b', allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        e2: u32,
    },
    /// Look for a hom sending part of an ideal outside it.
    Probe {
        #[command(flatten)]
        input: Input,
        /// `test`, `sigma`, or face keys such as `0,1;2`.
        #[arg(long)]
        ideal: String,
        #[arg(short = 'e', long = "level")]
        e: u32,
        #[arg(long = "box", default_value_t = 9)]
        radius: i64,
    },
}

/// A failure with its machine-readable code and exit status.
#[derive(Debug)]
struct Failure {
    code: &'static str,
    message: String,
    exit: i32,
}

impl Failure {
    fn parse(code: &'static str, message: impl Into<String>) -> Self {
        Failure { code, message: message.into(), exit: 2 }
    }

    fn domain(code: &'static str, message: impl Into<String>) -> Self {
        Failure { code, message: message.into(), exit: 1 }
    }
}

fn linalg_code(e: &LinalgError) -> &'static str {
    match e {
        LinalgError::RankMismatch { .. } => "RankMismatch",
        LinalgError::NotASublattice => "NotASublattice",
        LinalgError::InfiniteQuotient => "InfiniteQuotient",
        LinalgError::Overflow => "Overflow",
    }
}

fn cone_code(e: &ConeError) -> &'static str {
    match e {
        ConeError::NoGenerators => "NoGenerators",
        ConeError::ZeroGenerator(_) => "ZeroGenerator",
        ConeError::NotFullDimensional => "NotFullDimensional",
        ConeError::NotPointed => "NotPointed",
        ConeError::UnknownFace(_) => "UnknownFace",
        ConeError::NotInCone => "NotInCone",
        ConeError::Linalg(l) => linalg_code(l),
    }
}

impl From<MonoidError> for Failure {
    fn from(e: MonoidError) -> Self {
        let code = match &e {
            MonoidError::Cone(c) => cone_code(c),
            MonoidError::Linalg(l) => linalg_code(l),
            MonoidError::UnknownFaceKey(_) => "UnknownFaceKey",
            MonoidError::DuplicateFace(_) => "DuplicateFace",
            MonoidError::LatticeOutsideFace(_) => "LatticeOutsideFace",
            MonoidError::InfiniteIndex(_) => "InfiniteIndex",
            MonoidError::MonotonicityViolation { .. } => "MonotonicityViolation",
            MonoidError::TopLatticeNotFull => "TopLatticeNotFull",
        };
        Failure::domain(code, e.to_string())
    }
}

impl From<FrobError> for Failure {
    fn from(e: FrobError) -> Self {
        let code = match &e {
            FrobError::LevelTooSmall { .. } => "LevelTooSmall",
            FrobError::LevelMismatch(..) => "LevelMismatch",
            FrobError::PrimeMismatch(..) => "PrimeMismatch",
            FrobError::RankMismatch { .. } => "RankMismatch",
            FrobError::NotAHom(_) => "NotAHom",
            FrobError::Overflow => "Overflow",
            FrobError::Linalg(l) => linalg_code(l),
        };
        Failure::domain(code, e.to_string())
    }
}

impl From<InvariantsError> for Failure {
    fn from(e: InvariantsError) -> Self {
        let code = match &e {
            InvariantsError::NotFSplit { .. } => "NotFSplit",
            InvariantsError::Overflow => "Overflow",
            InvariantsError::Linalg(l) => linalg_code(l),
        };
        Failure::domain(code, e.to_string())
    }
}

impl From<CartierError> for Failure {
    fn from(e: CartierError) -> Self {
        match e {
            CartierError::Frob(f) => f.into(),
            CartierError::NotInMonoid(_) => Failure::domain("NotInMonoid", e.to_string()),
        }
    }
}

struct Session {
    monoid: SeminormalMonoid,
    prime: Option<u64>,
    json: bool,
}

impl Session {
    fn prime(&self) -> Result<Prime, Failure> {
        let p = self.prime.ok_or_else(|| Failure::parse("MissingPrime", "no prime given by --prime or the document"))?;
        Prime::new(p).map_err(|e| Failure::parse("NotPrime", e.to_string()))
    }

    fn face(&self, face: usize) -> FaceReport {
        FaceReport::new(&self.monoid, face)
    }
}

fn load(path: &PathBuf, prime_flag: Option<u64>, json: bool) -> Result<Session, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::parse("ReadError", format!("{}: {e}", path.display())))?;
    let doc = MonoidDocument::parse(&text).map_err(|e| Failure::parse("ParseError", e))?;
    let monoid = doc.build()?;
    let prime = prime_flag.or(doc.prime);
    Ok(Session { monoid, prime, json })
}

fn parse_vector(text: &str, rank: usize) -> Result<IntVector, Failure> {
    let v: IntVector = text
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::parse("ParseError", format!("bad vector {text:?}: {e}")))?;
    if v.len() != rank {
        return Err(Failure::parse("ParseError", format!("vector {text:?} has length {}, expected {rank}", v.len())));
    }
    Ok(v)
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn ideal_text(s: &SeminormalMonoid, ideal: &FaceUnionIdeal, height: i64) -> String {
    let gens: Vec<String> = cartier::generators_bounded(s, ideal, height).iter().map(|g| format_vector(g)).collect();
    format!("{}  generators: {}", ideal.label(s.cone()), gens.join(" "))
}

fn execute(cli: Cli) -> Result<String, Failure> {
    let json = cli.json;
    let prime = cli.prime;
    let session = |input: &Input| load(&input.input, prime, json);
    match cli.command {
        Command::Validate { input, emit_normalized } => {
            let s = session(&input)?;
            let m = &s.monoid;
            if emit_normalized {
                return Ok(to_json(&MonoidDocument::normalized(m, s.prime)));
            }
            let proper_rufs = m.rufs().len() - 1;
            if s.json {
                return Ok(to_json(&json!({
                    "valid": true,
                    "rank": m.rank(),
                    "faces": m.cone().faces().len(),
                    "proper_rufs": proper_rufs,
                    "reembedded": m.embedding().is_some(),
                    "warnings": m.warnings(),
                })));
            }
            let mut out = format!("valid: rank {}, {} faces, {} proper RUFs", m.rank(), m.cone().faces().len(), proper_rufs);
            if let Some(basis) = m.embedding() {
                let b: Vec<String> = basis.iter().map(|v| format_vector(v)).collect();
                out.push_str(&format!("\nre-embedded in the lattice with basis {}", b.join(" ")));
            }
            for w in m.warnings() {
                out.push_str(&format!("\nwarning: {w}"));
            }
            Ok(out)
        }
        Command::Classify(input) => {
            let s = session(&input)?;
            let p = s.prime()?;
            let class = s.monoid.classify(p);
            if s.json {
                let faces: Vec<_> = class
                    .faces
                    .iter()
                    .map(|c| {
                        json!({
                            "face": s.face(c.face),
                            "dim": s.monoid.cone().faces()[c.face].dim,
                            "lattice": s.monoid.lattice(c.face).basis(),
                            "quotient": c.quotient.invariant_factors,
                            "relatively_saturated": c.relatively_saturated,
                            "ruf": c.ruf,
                            "p_face": c.p_face,
                            "p_ruf": c.p_ruf,
                            "maximal_p_ruf": c.maximal_p_ruf,
                        })
                    })
                    .collect();
                return Ok(to_json(&json!({ "prime": p.get(), "faces": faces })));
            }
            let mut lines = Vec::new();
            for c in &class.faces {
                let mut tags = Vec::new();
                if c.ruf {
                    tags.push("RUF");
                }
                if c.p_face {
                    tags.push("p-face");
                }
                if c.maximal_p_ruf {
                    tags.push("maximal pRUF");
                } else if c.p_ruf {
                    tags.push("pRUF");
                }
                lines.push(format!(
                    "{}  dim {}  M_D = {}  quotient {}{}",
                    s.monoid.cone().face_label(c.face),
                    s.monoid.cone().faces()[c.face].dim,
                    s.monoid.lattice(c.face),
                    c.quotient,
                    if tags.is_empty() { String::new() } else { format!("  [{}]", tags.join(", ")) }
                ));
            }
            let rufs: Vec<String> = class.rufs().iter().map(|&d| s.monoid.cone().face_label(d)).collect();
            lines.push(format!("RUFs: {}", rufs.join(" ")));
            Ok(lines.join("\n"))
        }
        Command::IsFsplit(input) => {
            let s = session(&input)?;
            let p = s.prime()?;
            let class = s.monoid.classify(p);
            let witness = class.maximal_p_rufs().first().copied();
            if s.json {
                return Ok(to_json(&json!({
                    "prime": p.get(),
                    "f_split": witness.is_none(),
                    "p_face": witness.map(|d| s.face(d)),
                })));
            }
            Ok(match witness {
                None => "true".to_string(),
                Some(d) => format!("false: p-face {}", s.monoid.cone().face_label(d)),
            })
        }
        Command::HomCheck { hom, conditions_only } => {
            let s = session(&hom.input)?;
            let p = s.prime()?;
            let a = FracPoint::new(parse_vector(&hom.a, s.monoid.rank())?, hom.e, p);
            let describe = |v: &frob::HomVerdict| match v.failing_condition {
                None => "yes".to_string(),
                Some(c) => format!("no: {}", c.describe(&s.monoid)),
            };
            let strict = HomChecker::new(&s.monoid, p, hom.e, Mode::Strict).and_then(|c| c.check(&a));
            if !conditions_only {
                let v = strict?;
                if s.json {
                    return Ok(to_json(&json!({
                        "a": a,
                        "e": hom.e,
                        "hom": v.is_hom(),
                        "failing_condition": v.failing_condition.map(|c| c.describe(&s.monoid)),
                    })));
                }
                return Ok(describe(&v));
            }
            let cond = HomChecker::new(&s.monoid, p, hom.e, Mode::ConditionsOnly)?.check(&a)?;
            let strict_text = match &strict {
                Ok(v) => describe(v),
                Err(FrobError::LevelTooSmall { e_min, .. }) => format!("LevelTooSmall (e_min={e_min})"),
                Err(e) => return Err(e.clone().into()),
            };
            if s.json {
                return Ok(to_json(&json!({
                    "a": a,
                    "e": hom.e,
                    "conditions": cond.is_hom(),
                    "failing_condition": cond.failing_condition.map(|c| c.describe(&s.monoid)),
                    "strict": strict_text,
                })));
            }
            Ok(format!("conditions: {}; strict: {}", describe(&cond), strict_text))
        }
        Command::HomOracle { hom, radius } => {
            let s = session(&hom.input)?;
            let p = s.prime()?;
            if radius <= 0 {
                return Err(Failure::parse("ParseError", "--box must be positive"));
            }
            let a = FracPoint::new(parse_vector(&hom.a, s.monoid.rank())?, hom.e, p);
            let verdict = Oracle::new(&s.monoid, p, hom.e, radius)?.verdict(&a)?;
            if s.json {
                return Ok(to_json(&match &verdict {
                    OracleVerdict::Refuted { witness } => json!({ "refuted": true, "witness": witness }),
                    OracleVerdict::ConfirmedOnBox { radius } => json!({ "refuted": false, "radius": radius }),
                }));
            }
            Ok(verdict.to_string())
        }
        Command::Splitting { input, e_max } => {
            let s = session(&input)?;
            let p = s.prime()?;
            let report = invariants::splitting_report(&s.monoid, p, e_max)?;
            if s.json {
                return Ok(to_json(&report));
            }
            let gens: Vec<String> = report.splitting_prime_generators.iter().map(|g| format_vector(g)).collect();
            let mut lines = vec![
                format!("f-split: {}", report.f_split),
                format!("D_S: {}", report.fpure_face.label),
                format!("delta: {}", report.delta),
                format!("splitting prime generators: {}", gens.join(" ")),
            ];
            for (e, a) in &report.a_e_table {
                lines.push(format!("a_{e} = {a}  ({})", report.normalized[e]));
            }
            lines.push(format!("ratio: {}", report.ratio));
            lines.push(format!("normalization signature: {}", report.normalization_signature));
            Ok(lines.join("\n"))
        }
        Command::Ratio(input) => {
            let s = session(&input)?;
            let p = s.prime()?;
            let r = format_ratio(&invariants::splitting_ratio(&s.monoid, p)?);
            if s.json {
                return Ok(to_json(&json!({ "prime": p.get(), "ratio": r })));
            }
            Ok(r)
        }
        Command::Ideals { input, height } => {
            let s = session(&input)?;
            let p = s.prime()?;
            let ideals = cartier::enumerate_fixed_ideals(&s.monoid, p);
            if s.json {
                let reports: Vec<IdealReport> = ideals.iter().map(|i| IdealReport::new(&s.monoid, i, height)).collect();
                return Ok(to_json(&reports));
            }
            Ok(ideals.iter().map(|i| ideal_text(&s.monoid, i, height)).collect::<Vec<_>>().join("\n"))
        }
        Command::TestIdeal { input, height } => {
            let s = session(&input)?;
            let ideal = cartier::test_ideal(&s.monoid);
            if s.json {
                return Ok(to_json(&IdealReport::new(&s.monoid, &ideal, height)));
            }
            Ok(ideal_text(&s.monoid, &ideal, height))
        }
        Command::Sigma { input, height } => {
            let s = session(&input)?;
            let p = s.prime()?;
            let ideal = cartier::non_f_pure_ideal(&s.monoid, p);
            if s.json {
                return Ok(to_json(&IdealReport::new(&s.monoid, &ideal, height)));
            }
            Ok(ideal_text(&s.monoid, &ideal, height))
        }
        Command::Compose { input, a, e1, b, e2 } => {
            let s = session(&input)?;
            let p = s.prime()?;
            let a = FracPoint::new(parse_vector(&a, s.monoid.rank())?, e1, p);
            let b = FracPoint::new(parse_vector(&b, s.monoid.rank())?, e2, p);
            let c = frob::compose(&a, &b)?;
            if s.json {
                return Ok(to_json(&json!({ "c": c, "e": c.level(), "numerator": c.numerator() })));
            }
            Ok(format!("{c} at e={}", c.level()))
        }
        Command::Probe { input, ideal, e, radius } => {
            let s = session(&input)?;
            let p = s.prime()?;
            let ideal = match ideal.as_str() {
                "test" => cartier::test_ideal(&s.monoid),
                "sigma" => cartier::non_f_pure_ideal(&s.monoid, p),
                keys => parse_ideal(&s.monoid, keys)?,
            };
            let witness = cartier::compatibility_probe(&s.monoid, p, &ideal, e, radius)?;
            if s.json {
                return Ok(to_json(&match &witness {
                    None => json!({ "ideal": ideal.keys(s.monoid.cone()), "compatible": true }),
                    Some(w) => json!({
                        "ideal": ideal.keys(s.monoid.cone()),
                        "compatible": false,
                        "a": w.a,
                        "u": w.u,
                        "image": w.image,
                    }),
                }));
            }
            Ok(match witness {
                None => format!("{}: compatible on box {radius}", ideal.label(s.monoid.cone())),
                Some(w) => format!(
                    "{}: violated by a={} u={} image={}",
                    ideal.label(s.monoid.cone()),
                    w.a,
                    w.u,
                    format_vector(&w.image)
                ),
            })
        }
    }
}

fn parse_ideal(s: &SeminormalMonoid, keys: &str) -> Result<FaceUnionIdeal, Failure> {
    let mut faces = Vec::new();
    for key in keys.split(';').filter(|k| !k.trim().is_empty()) {
        let mut idx: Vec<usize> = key
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| x.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::parse("ParseError", format!("bad face key {key:?}: {e}")))?;
        idx.sort();
        let face = s
            .cone()
            .face_by_key(&idx)
            .ok_or_else(|| Failure::domain("UnknownFaceKey", format!("no face has key {idx:?}")))?;
        faces.push(face);
    }
    Ok(FaceUnionIdeal::new(s.cone(), faces))
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = writeln!(err, "error[UsageError]: {}", text.lines().next().unwrap_or_default().trim_start_matches("error: "));
            }
            return code;
        }
    };
    match execute(cli) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            0
        }
        Err(f) => {
            let _ = writeln!(err, "error[{}]: {}", f.code, f.message);
            f.exit
        }
    }
}
