//! Command implementations for the `folner` binary.
//!
//! Every command returns an [`Outcome`]: the JSON document to emit, the exit
//! code, and any notices for stderr. Nothing here touches the process
//! environment, so the commands are easy to drive from tests.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use folner_core::diagnostics::{
    ball_with_witnesses, invariance_defect, monotonicity_mass, tower, tower_check,
    DEFAULT_MAX_RADIUS,
};
use folner_core::folner::{
    audit_reduction, defect_elements, defect_marked, folner_certificate, folner_certificate_marked,
    z_family, MeshCheck,
};
use folner_core::io::{self, Family};
use folner_core::verify::{self, VerifyConfig, DEFAULT_SEED};
use folner_core::{
    compose, generators, is_standard, mesh, t_of, to_minimal_pair, Error, ExactNumber, FElement,
    Generator, Side, Word,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

const VERIFY_HELP: &str = "\
Runs every seeded property suite and reports case counts, failures and the \
first counterexample of each suite.

Each case draws from its own ChaCha8 stream keyed by (seed, suite, case index). \
Random marked sets are the 1/16 grid plus k extra points p/1024, with k uniform \
in 0..=16 and p uniform in 0..=1024, so their mesh is at most 1/16.

Exit status is 0 when every suite passes and 1 otherwise.";

#[derive(Debug, Parser)]
#[command(
    name = "folner",
    version,
    about = "Exact Folner-defect audits for Thompson's group F"
)]
pub struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads (1 runs everything serially).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the property suites.
    #[command(long_about = VERIFY_HELP)]
    Verify(VerifyArgs),
    /// T(X) of a marked set given as a JSON array of numbers.
    Tof {
        #[arg(long)]
        input: PathBuf,
    },
    /// Mesh check, marked audit, reduction to F and element audit of a family.
    Reduce {
        /// JSON-lines file, one marked set per line.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        epsilon: Option<ExactNumber>,
        #[arg(long, default_value_t = Side::Left)]
        side: Side,
    },
    /// Folner defect of a family of marked sets or of elements.
    Defect {
        /// JSON-lines file of marked sets or elements.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        epsilon: Option<ExactNumber>,
        #[arg(long, default_value_t = Side::Left)]
        side: Side,
    },
    /// The family {0, 1 - 2^-(n+2), 1} for n in a set of integers.
    Zfamily(ZfamilyArgs),
    /// Ball of radius r in the word metric, with its defect and tower check.
    Ball {
        radius: u32,
        #[arg(long, default_value_t = DEFAULT_MAX_RADIUS)]
        max_radius: u32,
        #[command(flatten)]
        constant: ConstantArg,
        #[arg(long, default_value_t = Side::Left)]
        side: Side,
        /// Also list every element with a shortest word.
        #[arg(long)]
        elements: bool,
    },
    /// exp_n(0).
    Tower { n: u32 },
    /// Compare a set size and defect against the tower bound.
    TowerCheck {
        #[arg(long)]
        size: u64,
        #[arg(long)]
        defect: ExactNumber,
        #[command(flatten)]
        constant: ConstantArg,
    },
    /// Monotone mass and invariance defects of a finitely supported measure.
    MeasureMono {
        /// JSON array of {"partition": [...], "weight": "..."}.
        #[arg(long)]
        input: PathBuf,
        /// JSON array of [lo, hi] pairs.
        #[arg(long)]
        chain: PathBuf,
    },
    /// Evaluate a word such as x0*x1^-1 at a point.
    Eval { word: Word, x: ExactNumber },
    /// Compose words (left to right as written) or elements from a file.
    Compose {
        words: Vec<Word>,
        /// JSON-lines file of elements; composed in order after any words.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Cases per randomized suite (default: each suite's own count).
    #[arg(long)]
    pub cases: Option<usize>,
    /// JSON array of four elements replacing [x0, x1, x0^-1, x1^-1].
    #[arg(long)]
    pub generators: Option<PathBuf>,
    /// Run only the named suites.
    #[arg(long = "suite")]
    pub suites: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ZfamilyArgs {
    /// Use {0, ..., N-1}.
    #[arg(long, conflicts_with = "members")]
    pub count: Option<u64>,
    /// Comma-separated integers.
    #[arg(long, value_delimiter = ',')]
    pub members: Vec<u64>,
    /// Emit a defect report instead of the family.
    #[arg(long)]
    pub audit: bool,
    #[arg(long)]
    pub epsilon: Option<ExactNumber>,
    #[arg(long, default_value_t = Side::Left)]
    pub side: Side,
}

#[derive(Debug, Args)]
pub struct ConstantArg {
    /// The constant C > 1 of the tower bound (default 2).
    #[arg(long = "constant-c")]
    pub constant_c: Option<ExactNumber>,
}

impl ConstantArg {
    fn resolve(&self, notices: &mut Vec<String>) -> (ExactNumber, bool) {
        match &self.constant_c {
            Some(c) => (c.clone(), false),
            None => {
                notices.push(
                    "notice: --constant-c not given; using C = 2. The tower bound's true \
                     constant is not known, so this is an assumption."
                        .into(),
                );
                (ExactNumber::from_integer(2), true)
            }
        }
    }
}

/// Result of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    /// Exactly what goes to stdout or `--output`.
    pub body: String,
    pub notices: Vec<String>,
}

impl Outcome {
    fn json<T: Serialize>(code: i32, value: &T, notices: Vec<String>) -> Self {
        Outcome {
            code,
            body: io::to_json(value),
            notices,
        }
    }

    fn error(code: i32, message: String) -> Self {
        Outcome {
            code,
            body: String::new(),
            notices: vec![format!("error: {message}")],
        }
    }
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn into_outcome(self) -> Outcome {
        match self {
            Failure::Core(e) => Outcome::error(exit_code(&e), e.to_string()),
            Failure::Io(p, e) => Outcome::error(EXIT_INPUT, format!("{}: {e}", p.display())),
        }
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::MeshTooLarge { .. } | Error::TowerTooTall(_) | Error::RadiusTooLarge { .. } => {
            EXIT_PRECONDITION
        }
        _ => EXIT_INPUT,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    let run = || dispatch(&cli.command).unwrap_or_else(Failure::into_outcome);
    match cli.threads {
        Some(n) => folner_core::par::with_threads(n.max(1), run),
        None => run(),
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Verify(args) => cmd_verify(args),
        Command::Tof { input } => cmd_tof(input),
        Command::Reduce {
            input,
            epsilon,
            side,
        } => cmd_reduce(input, epsilon.as_ref(), *side),
        Command::Defect {
            input,
            epsilon,
            side,
        } => cmd_defect(input, epsilon.as_ref(), *side),
        Command::Zfamily(args) => cmd_zfamily(args),
        Command::Ball {
            radius,
            max_radius,
            constant,
            side,
            elements,
        } => cmd_ball(*radius, *max_radius, constant, *side, *elements),
        Command::Tower { n } => Ok(Outcome::json(
            EXIT_PASS,
            &json!({ "n": n, "value": tower(*n)?.to_string() }),
            vec![],
        )),
        Command::TowerCheck {
            size,
            defect,
            constant,
        } => {
            let mut notices = vec![];
            let (c, defaulted) = constant.resolve(&mut notices);
            let verdict = tower_check(*size, defect, &c)?;
            let code = if verdict.consistent {
                EXIT_PASS
            } else {
                EXIT_FAIL
            };
            let body = json!({
                "constant_c": c,
                "constant_c_defaulted": defaulted,
                "verdict": verdict,
            });
            Ok(Outcome::json(code, &body, notices))
        }
        Command::MeasureMono { input, chain } => cmd_measure_mono(input, chain),
        Command::Eval { word, x } => {
            let f = word.evaluate();
            let value = f.apply(x)?;
            Ok(Outcome::json(
                EXIT_PASS,
                &json!({ "word": word.to_string(), "x": x, "value": value }),
                vec![],
            ))
        }
        Command::Compose { words, input } => cmd_compose(words, input.as_deref()),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, Failure> {
    let mut config = VerifyConfig {
        seed: args.seed,
        cases: args.cases,
        ..VerifyConfig::default()
    };
    if let Some(path) = &args.generators {
        let table: Vec<FElement> = serde_json::from_str(&read(path)?).map_err(Error::from)?;
        config.table = table.try_into().map_err(|t: Vec<FElement>| {
            Error::Parse(format!("expected 4 elements, got {}", t.len()))
        })?;
    }
    let report = if args.suites.is_empty() {
        verify::run(&config)
    } else {
        let mut suites = Vec::with_capacity(args.suites.len());
        for name in &args.suites {
            let suite = verify::run_named(&config, name)
                .ok_or_else(|| Error::Parse(format!("unknown suite {name:?}")))?;
            suites.push(suite);
        }
        verify::VerifyReport {
            seed: config.seed,
            passed: suites.iter().all(|s| s.passed()),
            suites,
        }
    };
    let code = if report.passed { EXIT_PASS } else { EXIT_FAIL };
    Ok(Outcome::json(code, &report, vec![]))
}

fn cmd_tof(input: &Path) -> Result<Outcome, Failure> {
    let x = io::load_marked_set(&read(input)?)?;
    let t = t_of(&x);
    let body = json!({
        "input": x,
        "partition": t,
        "mesh": mesh(t.as_marked()),
        "is_standard": is_standard(t.as_marked()),
    });
    Ok(Outcome::json(EXIT_PASS, &body, vec![]))
}

fn cmd_reduce(input: &Path, epsilon: Option<&ExactNumber>, side: Side) -> Result<Outcome, Failure> {
    let z = io::load_marked_family(&read(input)?)?;
    let mesh = MeshCheck::of(&z)?;
    if !mesh.ok {
        let body = json!({ "family_size": z.len(), "mesh": mesh, "reduced": false });
        let message = format!(
            "error: mesh {} exceeds {}; the reduction needs every member to have mesh at most {}",
            mesh.mesh_max, mesh.bound, mesh.bound
        );
        return Ok(Outcome::json(EXIT_PRECONDITION, &body, vec![message]));
    }
    let (elements, audit) = audit_reduction(&z, side)?;
    let certificate = epsilon.map(|e| {
        let mut cert = folner_certificate(&audit.elements, e);
        cert.mesh = Some(mesh.clone());
        cert
    });
    let failed = !audit.consistent()
        || certificate
            .as_ref()
            .is_some_and(|c| c.verdict == folner_core::folner::Verdict::Fail);
    let body = json!({
        "family_size": z.len(),
        "mesh": mesh,
        "reduced": true,
        "marked": audit.marked,
        "reduction": audit.reduction,
        "elements": audit.elements,
        "element_set": elements.to_vec(),
        "bounds": audit.bounds,
        "consistent": audit.consistent(),
        "certificate": certificate,
    });
    Ok(Outcome::json(
        if failed { EXIT_FAIL } else { EXIT_PASS },
        &body,
        vec![],
    ))
}

fn cmd_defect(input: &Path, epsilon: Option<&ExactNumber>, side: Side) -> Result<Outcome, Failure> {
    let gens = generators();
    let (kind, report, certificate) = match io::load_family(&read(input)?)? {
        Family::Marked(z) => {
            let report = defect_marked(&z, &gens, side)?;
            let cert = epsilon
                .map(|e| folner_certificate_marked(&report, e, &z))
                .transpose()?;
            ("marked", report, cert)
        }
        Family::Elements(a) => {
            let report = defect_elements(&a, &gens, side)?;
            let cert = epsilon.map(|e| folner_certificate(&report, e));
            ("elements", report, cert)
        }
    };
    let code = match &certificate {
        Some(c) if c.verdict == folner_core::folner::Verdict::Fail => EXIT_FAIL,
        _ => EXIT_PASS,
    };
    let body = json!({ "kind": kind, "report": report, "certificate": certificate });
    Ok(Outcome::json(code, &body, vec![]))
}

fn cmd_zfamily(args: &ZfamilyArgs) -> Result<Outcome, Failure> {
    let a: BTreeSet<u64> = match args.count {
        Some(n) => (0..n).collect(),
        None => args.members.iter().copied().collect(),
    };
    let z = z_family(&a)?;
    if !args.audit {
        return Ok(Outcome {
            code: EXIT_PASS,
            body: io::to_json_lines(z.iter()),
            notices: vec![],
        });
    }
    let report = defect_marked(&z, &generators(), args.side)?;
    let certificate = args
        .epsilon
        .as_ref()
        .map(|e| folner_certificate_marked(&report, e, &z))
        .transpose()?;
    let code = match &certificate {
        Some(c) if c.verdict == folner_core::folner::Verdict::Fail => EXIT_FAIL,
        _ => EXIT_PASS,
    };
    let body = json!({
        "members": a,
        "mesh": MeshCheck::of(&z)?,
        "report": report,
        "certificate": certificate,
    });
    Ok(Outcome::json(code, &body, vec![]))
}

fn cmd_ball(
    radius: u32,
    max_radius: u32,
    constant: &ConstantArg,
    side: Side,
    list: bool,
) -> Result<Outcome, Failure> {
    let mut notices = vec![];
    let (c, defaulted) = constant.resolve(&mut notices);
    let ball = ball_with_witnesses(radius, max_radius)?;
    let report = defect_elements(&ball.elements, &generators(), side)?;
    let size = ball.elements.len() as u64;
    // a positive defect always exists for a finite set; zero would be a bug
    let verdict = tower_check(size, &report.max_defect, &c)?;
    let mut body = json!({
        "radius": radius,
        "size": size,
        "sphere_sizes": ball.sphere_sizes,
        "defect": report,
        "constant_c": c,
        "constant_c_defaulted": defaulted,
        "tower_check": verdict,
    });
    if list {
        let elements: Vec<Value> = ball
            .elements
            .iter()
            .map(|f| {
                let word = &ball.witnesses[&f.canonical_key()];
                json!({ "word": word.to_string(), "element": f })
            })
            .collect();
        body["elements"] = Value::Array(elements);
    }
    let code = if verdict.consistent {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    Ok(Outcome::json(code, &body, notices))
}

fn cmd_measure_mono(input: &Path, chain: &Path) -> Result<Outcome, Failure> {
    let mu = io::load_measure(&read(input)?)?;
    let chain = io::load_chain(&read(chain)?)?;
    let mass = monotonicity_mass(&mu, &chain)?;
    let support: Vec<Value> = mu
        .iter()
        .map(|(t, w)| json!({ "partition": t, "weight": w, "counts": chain.counts(t) }))
        .collect();
    let defects: serde_json::Map<String, Value> = Generator::ALL
        .into_iter()
        .map(|g| {
            (
                g.name().to_string(),
                json!(invariance_defect(&mu, g.element())),
            )
        })
        .collect();
    let body = json!({
        "monotonicity_mass": mass,
        "support": support,
        "invariance_defect": defects,
    });
    Ok(Outcome::json(EXIT_PASS, &body, vec![]))
}

fn cmd_compose(words: &[Word], input: Option<&Path>) -> Result<Outcome, Failure> {
    let mut factors: Vec<FElement> = words.iter().map(Word::evaluate).collect();
    if let Some(path) = input {
        // keep file order; an ElementSet would sort and deduplicate
        let text = read(path)?;
        for (no, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let f: FElement = serde_json::from_str(line.trim())
                .map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
            factors.push(f);
        }
    }
    let product = factors
        .iter()
        .fold(FElement::identity(), |acc, f| compose(&acc, f));
    let pair = to_minimal_pair(&product);
    let body = json!({
        "factors": factors.len(),
        "element": product,
        "pair": pair,
        "generator": Generator::identify(&product).map(Generator::name),
    });
    Ok(Outcome::json(EXIT_PASS, &body, vec![]))
}
