//! `vcbent`: command-line front end for the ternary bent-function toolkit.
//!
//! Exit codes: 0 success or affirmative verdict, 1 negative verdict,
//! 2 usage or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vcbent::appendix::verify_fixture;
use vcbent::bentlab::{self, circular_spectrum, spectrum_is_bent};
use vcbent::cyclotomic::ascii;
use vcbent::generator::{self, generate_all, generate_class, maiorana, maiorana_enumerate, seed, MaioranaSpec};
use vcbent::genperm::gamma;
use vcbent::mvfunction::infer_vars;
use vcbent::{cases, oracle, vctransform, CycInt, GammaName, Limits, MvFunction, PermExpr, Radix, Route, Spectrum};

#[derive(Parser)]
#[command(name = "vcbent", version, about = "Bent functions over Z_p via the Vilenkin-Chrestenson transform")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Circular spectrum of a function given by its value vector.
    Spectrum {
        #[arg(long)]
        p: u32,
        /// Number of variables; inferred from the value count when omitted.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        values: String,
        /// Use the butterfly transform (same output).
        #[arg(long)]
        fast: bool,
        /// Render roots as ξ^k instead of the coefficient form.
        #[arg(long)]
        pretty: bool,
    },
    /// Flat / bent / strict verdict as JSON.
    Check {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        values: String,
    },
    /// Apply a permutation expression and recover the resulting function.
    Permute {
        #[arg(long)]
        expr: String,
        /// Spectrum file (`p n` header, one coefficient per line or `exp:…`).
        #[arg(long, conflicts_with = "function", required_unless_present = "function")]
        spectrum: Option<PathBuf>,
        /// Value vector of f; its spectrum is permuted.
        #[arg(long)]
        function: Option<String>,
        #[arg(long, default_value_t = 3)]
        p: u32,
        /// How W is computed: conjugation table or dense product.
        #[arg(long, default_value = "table")]
        via: String,
        /// `spectral`: EXPR is P acting on S. `function`: EXPR is W acting on F.
        #[arg(long, value_enum, default_value_t = Domain::Spectral)]
        domain: Domain,
        #[arg(long)]
        pretty: bool,
    },
    /// Class primitives (JSON), or every generated function (one per line).
    Enumerate {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        class: Option<u8>,
        #[arg(long)]
        all: bool,
        /// Include g+1 and g+2 for a class.
        #[arg(long)]
        rotations: bool,
        /// Emit a class in the appendix fixture format instead of JSON.
        #[arg(long)]
        tsv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Replay an appendix fixture row by row.
    VerifyAppendix {
        fixture: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Maiorana construction for n = 2m.
    Maiorana {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, requires = "v", conflicts_with = "enumerate")]
        q: Option<GammaName>,
        #[arg(long, requires = "q")]
        v: Option<String>,
        #[arg(long, required_unless_present = "q")]
        enumerate: bool,
    },
    /// Replay a worked example.
    Demo {
        #[arg(long, value_enum)]
        case: DemoCase,
        /// Radix for `theorem4`; all of 3..6 when omitted.
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        pretty: bool,
    },
    /// Exhaustive scan for bent functions.
    Oracle {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Emit::Tsv)]
        emit: Emit,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Domain {
    Spectral,
    Function,
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoCase {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    #[value(name = "theorem4")]
    Theorem4,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Tsv,
    Json,
}

/// Why a command did not succeed.
#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Input(#[from] vcbent::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

/// 0 or 1 on completion; errors become 2.
type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    match run(cli.command, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Outcome {
    let limits = Limits::from_env();
    match command {
        Command::Spectrum { p, n, values, fast, pretty } => {
            let f = function_arg(p, n, &values)?;
            let sign = f.sign_of();
            let s = if fast {
                vctransform::forward_fast_with(f.radix(), sign.entries(), &limits)?
            } else {
                vctransform::forward_with(f.radix(), sign.entries(), &limits)?
            };
            for e in s.entries() {
                writeln!(out, "{}", render(e, pretty))?;
            }
            if let Ok(t) = bentlab::strict_exponents(&s) {
                writeln!(out, "strict-exponents: {}", generator::exps_string(&t))?;
            }
            Ok(true)
        }
        Command::Check { p, n, values } => {
            let f = function_arg(p, n, &values)?;
            limits.check_points(f.len())?;
            let verdict = bentlab::is_bent(&f)?;
            writeln!(out, "{}", verdict.to_json())?;
            Ok(verdict.is_bent)
        }
        Command::Permute { expr, spectrum, function, p, via, domain, pretty } => {
            let route: Route = via.parse()?;
            let expr = PermExpr::parse(&expr)?;
            let (radix, f, s) = match (spectrum, function) {
                (Some(path), _) => {
                    let s = Spectrum::parse_file(&read(&path)?)?;
                    (s.radix(), None, s)
                }
                (None, Some(digits)) => {
                    let f = function_arg(p, None, &digits)?;
                    let s = circular_spectrum(&f)?;
                    (f.radix(), Some(f), s)
                }
                (None, None) => return Err(Failure::Usage("one of --spectrum or --function is required".into())),
            };
            limits.check_points(s.len())?;
            match domain {
                Domain::Spectral => permute_spectrum(out, &expr, radix, route, f.as_ref(), &s, pretty, &limits),
                Domain::Function => {
                    let f = f.ok_or_else(|| Failure::Usage("--domain function needs --function".into()))?;
                    permute_function(out, &expr, &f, pretty)
                }
            }
        }
        Command::Enumerate { class, all, rotations, tsv, out: path, jobs } => {
            let text = if all {
                vcbent::oracle::emit_tsv(&generate_all(jobs)?)
            } else {
                let k = class.expect("clap requires --class without --all");
                let record = generate_class(k, &seed(k)?)?;
                if rotations {
                    generator::expand_rotations(&record).iter().map(|g| g.digits() + "\n").collect()
                } else if tsv {
                    record.to_tsv()
                } else {
                    record.to_json() + "\n"
                }
            };
            emit(out, path.as_deref(), &text)?;
            Ok(true)
        }
        Command::VerifyAppendix { fixture, jobs } => {
            let report = verify_fixture(&read(&fixture)?, jobs)?;
            for m in &report.malformed {
                writeln!(out, "MALFORMED line {}: {}", m.line, m.message)?;
            }
            for c in &report.checks {
                if c.passed() {
                    writeln!(out, "PASS line {} class {} row {}", c.line, c.class, c.row)?;
                } else {
                    writeln!(out, "FAIL line {} class {} row {}: {}", c.line, c.class, c.row, c.failures.join("; "))?;
                }
            }
            writeln!(out, "{}/{} rows pass, {} malformed", report.pass_count(), report.checks.len(), report.malformed.len())?;
            Ok(report.passed())
        }
        Command::Maiorana { m, q, v, enumerate } => {
            if enumerate {
                let all = maiorana_enumerate(m)?;
                for f in &all {
                    writeln!(out, "{}", f.digits())?;
                }
                writeln!(out, "count: {}", all.len())?;
            } else {
                let (q, v) = (q.expect("clap requires --q"), v.expect("clap requires --v"));
                if m != 1 {
                    return Err(vcbent::Error::SizeLimit { size: 3usize.saturating_pow(m as u32), limit: 3 }.into());
                }
                let v = MvFunction::new(Radix::THREE, 1, digit_values(&v, 3)?)?;
                writeln!(out, "{}", maiorana(&MaioranaSpec { m, q: gamma(q), v })?.digits())?;
            }
            Ok(true)
        }
        Command::Demo { case, p, pretty } => {
            let lines = match case {
                DemoCase::One => cases::case1()?.render(pretty),
                DemoCase::Two => cases::case2()?.render(pretty),
                DemoCase::Three => cases::case3()?.render(pretty),
                DemoCase::Four => cases::case4()?.render(pretty),
                DemoCase::Theorem4 => {
                    let radices = match p {
                        Some(p) => vec![Radix::new(p)?],
                        None => vec![Radix::THREE, Radix::FOUR, Radix::FIVE, Radix::SIX],
                    };
                    let mut lines = Vec::new();
                    for r in radices {
                        lines.extend(cases::theorem4(r)?.render(pretty));
                    }
                    lines
                }
            };
            for l in lines {
                writeln!(out, "{l}")?;
            }
            Ok(true)
        }
        Command::Oracle { p, n, emit: format, jobs } => {
            let found = oracle::all_bent(Radix::new(p)?, n, jobs)?;
            match format {
                Emit::Tsv => write!(out, "{}", oracle::emit_tsv(&found))?,
                Emit::Json => writeln!(out, "{}", oracle::emit_json(&found))?,
            }
            eprintln!("{} bent functions", found.len());
            Ok(true)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn permute_spectrum(
    out: &mut impl Write,
    expr: &PermExpr,
    radix: Radix,
    route: Route,
    f: Option<&MvFunction>,
    s: &Spectrum,
    pretty: bool,
    limits: &Limits,
) -> Outcome {
    let p = expr.eval(radix)?;
    let permuted = Spectrum::new(radix, p.apply(s.entries())?)?;
    writeln!(out, "spectrum: {}", render_all(permuted.entries(), pretty))?;
    let recovered = spectrum_is_bent(&permuted);
    match &recovered {
        Ok(g) => writeln!(out, "g = {}", g.digits())?,
        Err(e) => writeln!(out, "not bent: {} at index {}: {}", e.stage, e.index, render(&e.value, pretty))?,
    }
    if p.size() <= 9 || (matches!(route, Route::Table) && expr.is_factored()) {
        let w = match route {
            Route::Table => expr.conjugate(radix, route)?,
            Route::Dense => {
                limits.check_dense(p.size())?;
                vcbent::genperm::conjugate_by_c_with(&p, limits)?
            }
        };
        if w.size() <= 9 {
            writeln!(out, "W:")?;
            let cell = |c: &CycInt| if pretty { c.pretty() } else { ascii(&c.pretty()) };
            writeln!(out, "{}", w.to_matrix().render_with(cell))?;
        }
        if let (Some(f), Ok(g)) = (f, &recovered) {
            let wf = w.to_matrix().mul_vec(f.sign_of().entries());
            let agrees = wf.as_ref().map(|v| v[..] == *g.sign_of().entries()).unwrap_or(false);
            writeln!(out, "W·F matches g: {agrees}")?;
        }
    }
    Ok(recovered.is_ok())
}

fn permute_function(out: &mut impl Write, expr: &PermExpr, f: &MvFunction, pretty: bool) -> Outcome {
    let w = expr.eval(f.radix())?;
    let g_sign = w.apply(f.sign_of().entries())?;
    writeln!(out, "G: {}", render_all(&g_sign, pretty))?;
    match MvFunction::try_from_sign(f.radix(), &g_sign) {
        Ok(g) => {
            writeln!(out, "g = {}", g.digits())?;
            Ok(true)
        }
        Err(e) => {
            writeln!(out, "not a function: {e}")?;
            Ok(false)
        }
    }
}

fn function_arg(p: u32, n: Option<usize>, digits: &str) -> Result<MvFunction, Failure> {
    let radix = Radix::new(p)?;
    let values = digit_values(digits, p)?;
    let inferred = infer_vars(radix, values.len())?;
    if let Some(n) = n.filter(|&n| n != inferred) {
        return Err(Failure::Usage(format!("--n {n} needs {p}^{n} values, got {}", values.len())));
    }
    Ok(MvFunction::new(radix, inferred, values)?)
}

/// Digits below p; spaces and underscores are ignored so grouped input works.
fn digit_values(digits: &str, p: u32) -> Result<Vec<u8>, Failure> {
    digits
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .map(|c| {
            c.to_digit(10)
                .filter(|&d| d < p)
                .map(|d| d as u8)
                .ok_or_else(|| Failure::Usage(format!("`{c}` is not a digit below {p}")))
        })
        .collect()
}

fn render(c: &CycInt, pretty: bool) -> String {
    if pretty {
        c.pretty()
    } else {
        c.to_string()
    }
}

fn render_all(v: &[CycInt], pretty: bool) -> String {
    v.iter().map(|c| render(c, pretty)).collect::<Vec<_>>().join(" ")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut impl Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}
