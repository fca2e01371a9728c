//! Command dispatch. [`run`] never exits the process; it returns the exit
//! code together with what should go to stdout and stderr.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use irrhodge_core::algebra::{format_rational, Rational};
use irrhodge_core::connection::Connection;
use irrhodge_core::formulas::{verify_hypergeom, HypergeomParams};
use irrhodge_core::hodge::analyze;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::format::{emit, parse_file, rational};
use crate::suites::{self, spectrum_json, Object, Report};

pub const MAX_SAT_ENV: &str = "IRRHODGE_MAX_SAT";

#[derive(Parser, Debug)]
#[command(name = "irrhodge", version, about = "Irregular Hodge filtrations and spectra at infinity, computed exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Spectrum at infinity of a connection file.
    Spectrum {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "raw")]
        normalize: Normalize,
        #[arg(long)]
        json: bool,
        /// Also print the filtration with bases evaluated at h = 1.
        #[arg(long)]
        filtration: bool,
        /// Saturation cap; overrides IRRHODGE_MAX_SAT.
        #[arg(long)]
        max_sat: Option<usize>,
    },
    /// Apply a functor and write the result as an explicit matrix.
    Transform {
        #[arg(value_enum)]
        op: Op,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Exterior power degree for `wedge`.
        #[arg(long)]
        r: Option<usize>,
        /// Twist for `tate`.
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<i64>,
        /// Constant for `exp`, as p/q.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// Run a verification suite on the given files or the built-in corpus.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        files: Vec<PathBuf>,
        /// Comma-separated exponents for the hypergeometric suite.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Spectrum of the hypergeometric module next to the jumps k + mu alpha_k.
    Hypergeom {
        #[arg(long, required = true)]
        alpha: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Normalize {
    Raw,
    Min0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Tensor,
    Dual,
    Wedge,
    Tate,
    Exp,
    Sum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Tensor,
    Dual,
    Hypergeom,
    Rescale,
    Wedge,
    Filtered,
    Properties,
    All,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn error(e: &CliError) -> Self {
        Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{e}\n") }
    }
}

/// Parse `args` (including the program name) and run the command, reading
/// the saturation cap from `env_max_sat` when no flag is given.
pub fn run<I, T>(args: I, env_max_sat: Option<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: format!("E_USAGE: {text}") }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match execute(cli.command, env_max_sat) {
        Ok(o) => o,
        Err(e) => Outcome::error(&e),
    }
}

fn execute(cmd: Command, env_max_sat: Option<String>) -> Result<Outcome, CliError> {
    match cmd {
        Command::Spectrum { file, normalize, json, filtration, max_sat } => {
            let max_sat = match (max_sat, env_max_sat) {
                (Some(n), _) => Some(n),
                (None, Some(s)) => Some(
                    s.trim()
                        .parse()
                        .map_err(|_| CliError::Parse(format!("{MAX_SAT_ENV}={s:?} is not a nonnegative integer")))?,
                ),
                (None, None) => None,
            };
            let m = parse_file(&file)?;
            spectrum_command(&m, normalize, json, filtration, max_sat)
        }
        Command::Transform { op, files, output, r, ell, c } => {
            let ms = files.iter().map(|f| parse_file(f)).collect::<Result<Vec<_>, _>>()?;
            let out = transform(op, &ms, r, ell, c.as_deref())?;
            let text = emit(&out);
            match output {
                Some(p) => {
                    std::fs::write(&p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                    Ok(Outcome::ok(String::new()))
                }
                None => Ok(Outcome::ok(text)),
            }
        }
        Command::Verify { suite, files, alpha, r, n, json } => verify(suite, &files, alpha.as_deref(), r, n, json),
        Command::Hypergeom { alpha, json } => hypergeom_command(&parse_alpha(&alpha)?, json),
    }
}

fn parse_alpha(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').enumerate().map(|(i, a)| rational(a, &format!("--alpha[{i}]"))).collect()
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn spectrum_command(
    m: &Connection,
    normalize: Normalize,
    json: bool,
    with_filtration: bool,
    max_sat: Option<usize>,
) -> Result<Outcome, CliError> {
    let a = analyze(m, max_sat)?;
    let raw = a.spectrum();
    let spec = match normalize {
        Normalize::Raw => raw,
        Normalize::Min0 => raw.normalized_min0(),
    };
    let levels: Vec<(String, usize, Vec<Vec<String>>)> = a
        .filtration()
        .levels()
        .iter()
        .map(|(b, s)| {
            let basis = s.basis().iter().map(|v| v.iter().map(format_rational).collect()).collect();
            (format_rational(b), s.dim(), basis)
        })
        .collect();
    let diagnostics = json!({
        "saturationSteps": a.v_filtration().saturation_steps(),
        "degreeBound": a.degree_bound(),
        "nilpotencyBound": a.v_filtration().nilpotency_bound(),
    });
    if json {
        let mut report = serde_json::Map::new();
        report.insert("spectrum".into(), spectrum_json(&spec));
        report.insert("normalization".into(), Value::String(if normalize == Normalize::Raw { "raw" } else { "min0" }.into()));
        if with_filtration {
            report.insert(
                "filtration".into(),
                Value::Array(
                    levels.iter().map(|(b, d, basis)| json!({"beta": b, "dimension": d, "basis": basis})).collect(),
                ),
            );
        }
        report.insert("diagnostics".into(), diagnostics);
        return Ok(Outcome::ok(to_json(&Value::Object(report))));
    }
    let mut out = String::new();
    if let Some(l) = m.label() {
        out.push_str(&format!("{l}\n"));
    }
    out.push_str(&format!("rank {}, normalization {:?}\n", m.rank(), normalize).to_lowercase());
    out.push_str(&format!("{:>10}  {}\n", "jump", "multiplicity"));
    for (b, k) in &spec.entries {
        out.push_str(&format!("{:>10}  {k}\n", format_rational(b)));
    }
    if with_filtration {
        out.push_str("filtration (h = 1):\n");
        for (b, d, basis) in &levels {
            let vecs: Vec<String> = basis.iter().map(|v| format!("({})", v.join(", "))).collect();
            out.push_str(&format!("  F_{b}: dim {d}  {}\n", vecs.join(" ")));
        }
    }
    out.push_str(&format!(
        "saturation steps {}, degree bound {}, nilpotency bound {}\n",
        diagnostics["saturationSteps"], diagnostics["degreeBound"], diagnostics["nilpotencyBound"]
    ));
    Ok(Outcome::ok(out))
}

pub fn transform(op: Op, ms: &[Connection], r: Option<usize>, ell: Option<i64>, c: Option<&str>) -> Result<Connection, CliError> {
    let one = || -> Result<&Connection, CliError> {
        match ms {
            [m] => Ok(m),
            _ => Err(CliError::Usage(format!("{op:?} takes exactly one file").to_lowercase())),
        }
    };
    let need = |name: &str| CliError::Usage(format!("{op:?} needs --{name}").to_lowercase());
    Ok(match op {
        Op::Tensor => ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.tensor(m)),
        Op::Sum => ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.direct_sum(m)),
        Op::Dual => one()?.dual(),
        Op::Wedge => one()?.wedge(r.ok_or_else(|| need("r"))?)?,
        Op::Tate => one()?.tate_twist(ell.ok_or_else(|| need("ell"))?),
        Op::Exp => one()?.exponential_twist(&rational(c.ok_or_else(|| need("c"))?, "--c")?),
    })
}

fn hypergeom_command(alpha: &[Rational], json: bool) -> Result<Outcome, CliError> {
    let p = HypergeomParams::new(alpha)?;
    let r = verify_hypergeom(alpha, None)?;
    let sigma: Vec<String> = p.sigma().iter().map(format_rational).collect();
    if json {
        return Ok(Outcome::ok(to_json(&json!({
            "alpha": alpha.iter().map(format_rational).collect::<Vec<_>>(),
            "sigma": sigma,
            "computed": spectrum_json(&r.computed),
            "formula": spectrum_json(&r.expected),
            "match": r.matched.as_ref().map(|(s, t)| json!({"sign": s, "shift": format_rational(t)})),
        }))));
    }
    let fmt = |s: &irrhodge_core::hodge::Spectrum| {
        s.entries.iter().map(|(b, k)| format!("{}^{k}", format_rational(b))).collect::<Vec<_>>().join(" ")
    };
    let verdict = match &r.matched {
        Some((s, t)) => format!("match with sign {s}, shift {}", format_rational(t)),
        None => "no match up to sign and shift".to_string(),
    };
    Ok(Outcome::ok(format!(
        "sigma     {}\nformula   {}\ncomputed  {}\n{verdict}\n",
        sigma.join(" "),
        fmt(&r.expected),
        fmt(&r.computed)
    )))
}

fn verify(suite: Suite, files: &[PathBuf], alpha: Option<&str>, r: usize, n: usize, json: bool) -> Result<Outcome, CliError> {
    let objects = if files.is_empty() {
        suites::corpus_objects()
    } else {
        files
            .iter()
            .map(|f| Ok(Object { name: f.display().to_string(), connection: parse_file(f)? }))
            .collect::<Result<Vec<_>, CliError>>()?
    };
    let alphas = match alpha {
        Some(a) => vec![(a.to_string(), parse_alpha(a)?)],
        None => suites::corpus_hypergeom_alphas(),
    };
    let checks = match suite {
        Suite::Hypergeom => suites::hypergeom(&alphas),
        Suite::Tensor => suites::tensor(&objects, 9, if files.is_empty() { 20 } else { 0 }, 1),
        Suite::Dual => suites::dual(&objects),
        Suite::Rescale => suites::rescale(&objects),
        Suite::Wedge => suites::wedge(r, n, &objects),
        Suite::Filtered => suites::filtered(10, 6, 2),
        Suite::Properties => suites::properties(&objects, 20, 3),
        Suite::All if files.is_empty() && alpha.is_none() => suites::all(),
        Suite::All => {
            let mut c = suites::hypergeom(&alphas);
            c.extend(suites::tensor(&objects, 9, 0, 1));
            c.extend(suites::dual(&objects));
            c.extend(suites::rescale(&objects));
            c.extend(suites::wedge(r, n, &objects));
            c.extend(suites::filtered(10, 6, 2));
            c.extend(suites::properties(&objects, 20, 3));
            c
        }
    };
    let report = Report::new(checks);
    let stdout = if json {
        to_json(&report)
    } else {
        let mut s = String::new();
        for c in &report.checks {
            let tag = match (c.pass, c.informational) {
                (true, _) => "PASS",
                (false, true) => "NOTE",
                (false, false) => "FAIL",
            };
            s.push_str(&format!("{tag}  {:<10} {}\n", c.suite, c.name));
        }
        let failed = report.failures().len();
        s.push_str(&format!("{} checks, {failed} failed\n", report.checks.len()));
        s
    };
    if report.pass {
        Ok(Outcome::ok(stdout))
    } else {
        let e = CliError::Mismatch(format!("{} of {} checks failed", report.failures().len(), report.checks.len()));
        Ok(Outcome { code: e.exit_code(), stdout, stderr: format!("{e}\n") })
    }
}
