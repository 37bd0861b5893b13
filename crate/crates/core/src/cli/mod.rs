//! The `secm` command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or parse error,
//! 3 numerical failure.

mod output;
mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use output::{format_real, Format, OutputTable};
pub use svg::line_plot;

use crate::error::{Error, Result};
use crate::exprparse::parse;
use crate::family::FamilyDensity;
use crate::measures::{mass, moments, Density, Weight};
use crate::operators::IntegralEquationProblem;
use crate::orthopoly::recurrence_coefficients;
use crate::quadrature::{EndpointExponents, IntegrationSpec, Interval};
use crate::stieltjes::{reducer, secondary_measure};
use crate::suite::{self, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED_CHECK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "secm", version, about = "Secondary measures and equi-normal density families")]
struct Cli {
    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Maximum tanh-sinh refinement level (1..=20).
    #[arg(long = "quad-levels", global = true, default_value_t = 12)]
    quad_levels: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct DensityArgs {
    /// Catalog density: cheb-u, cheb-t, uniform, linear2x, sqrt32.
    #[arg(long, required_unless_present = "density_expr", conflicts_with = "density_expr")]
    density: Option<String>,
    /// Smooth factor h(x) of a user density (x−a)^alpha (b−x)^beta h(x).
    #[arg(long = "density-expr", requires = "interval")]
    density_expr: Option<String>,
    /// Support of a user density, as "a,b".
    #[arg(long, allow_hyphen_values = true)]
    interval: Option<String>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moments c_0..c_n.
    Moments {
        #[command(flatten)]
        density: DensityArgs,
        #[arg(short, long, default_value_t = 4)]
        n: u32,
    },
    /// Recurrence coefficients of the orthonormal polynomials.
    Ortho {
        #[command(flatten)]
        density: DensityArgs,
        #[arg(short, long, default_value_t = 5)]
        n: usize,
    },
    /// The reducer 2·PV∫ρ(t)/(x−t)dt on a grid.
    Reducer {
        #[command(flatten)]
        density: DensityArgs,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// The secondary measure on a grid.
    Secondary {
        #[command(flatten)]
        density: DensityArgs,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// The equi-normal family ρ_t.
    Family {
        #[command(subcommand)]
        command: FamilyCommand,
    },
    /// Real zeros of the family transform denominator outside the support.
    Roots {
        #[command(flatten)]
        density: DensityArgs,
        #[arg(short, long)]
        t: f64,
        /// Search interval "a,b" outside the support; default: both sides
        /// out to ten support lengths.
        #[arg(long, allow_hyphen_values = true)]
        search: Option<String>,
        #[arg(long, default_value_t = 400)]
        grid: usize,
    },
    /// Solve f + λ(x−c₁)∫(f(u)−f(x))/(u−x)ρ(u)du = g.
    Solve {
        #[command(flatten)]
        density: DensityArgs,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 30)]
        points: usize,
    },
    /// Run a reproduction suite.
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::Quick)]
        suite: SuiteArg,
    },
    /// Plot two CSV columns as an SVG line.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// ρ_t on a grid.
    Density {
        #[command(flatten)]
        density: DensityArgs,
        #[arg(short, long)]
        t: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// The mass f(t) = ∫ρ_t over a range of t.
    Scan {
        #[command(flatten)]
        density: DensityArgs,
        #[arg(long = "t-min")]
        t_min: f64,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Paper,
    Quick,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInterval { .. }
        | Error::InvalidExponents { .. }
        | Error::InvalidSpec(_)
        | Error::UnknownDensity(_)
        | Error::NotADensity { .. }
        | Error::InvalidParameter(_)
        | Error::PoleOutsideInterval { .. }
        | Error::Syntax { .. }
        | Error::UnknownFunction { .. } => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

/// Result of a command: what to print and how to exit.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }
}

/// Runs the CLI with explicit arguments and streams; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    let output = cli.output.clone();
    match execute(cli) {
        Ok(out) => {
            let written = match &output {
                Some(path) => write_atomic(path, out.text.as_bytes()),
                None => stdout.write_all(out.text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => out.code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::result::Result<(), String> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).map_err(|e| format!("{}: {e}", tmp.display()))?;
    std::fs::rename(&tmp, path).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64)> {
    let bad = || Error::InvalidParameter(format!("{what} must look like \"a,b\", got \"{s}\""));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().replace('\u{2212}', "-").parse().map_err(|_| bad())?;
    let b: f64 = b.trim().replace('\u{2212}', "-").parse().map_err(|_| bad())?;
    Ok((a, b))
}

fn load_density(args: &DensityArgs, spec: &IntegrationSpec) -> Result<Arc<dyn Weight>> {
    if let Some(name) = &args.density {
        return Ok(Density::catalog(name)?.into_arc());
    }
    let expr = args.density_expr.as_deref().unwrap_or_default();
    let iv = args.interval.as_deref().unwrap_or_default();
    let (a, b) = parse_pair(iv, "--interval")?;
    let h = Arc::new(parse(expr)?);
    let d = Density::new(
        expr,
        Interval::new(a, b)?,
        EndpointExponents::new(args.alpha, args.beta)?,
        h,
        spec,
    )?;
    Ok(d.into_arc())
}

fn check_points(points: usize) -> Result<()> {
    if points == 0 {
        Err(Error::InvalidParameter("--points must be positive".into()))
    } else {
        Ok(())
    }
}

/// Grid for pointwise evaluation, kept off the endpoints by `1e-4·|I|`.
fn grid(iv: &Interval, points: usize) -> Vec<f64> {
    iv.guarded_grid(points, 1e-4)
}

fn execute(cli: Cli) -> Result<Outcome> {
    let spec = IntegrationSpec::new(cli.tol, IntegrationSpec::default().abs_tol, cli.quad_levels)?;
    let fmt = cli.format;
    let tol = spec.rel_tol;
    match cli.command {
        Command::Moments { density, n } => {
            let rho = load_density(&density, &spec)?;
            let mut t = OutputTable::new(&["n", "c_n"], rho.label(), tol);
            for (k, c) in moments(rho.as_ref(), n, &spec)?.into_iter().enumerate() {
                t.push(vec![k as f64, c]);
            }
            Ok(Outcome::ok(t.render(fmt)?))
        }
        Command::Ortho { density, n } => {
            let rho = load_density(&density, &spec)?;
            let c = recurrence_coefficients(rho.as_ref(), n, &spec)?;
            let mut t = OutputTable::new(&["n", "a_n", "b_n+1"], rho.label(), tol);
            for k in 0..c.degree() {
                t.push(vec![k as f64, c.a(k), c.b(k + 1)]);
            }
            Ok(Outcome::ok(t.render(fmt)?))
        }
        Command::Reducer { density, points } => {
            check_points(points)?;
            let rho = load_density(&density, &spec)?;
            let mut t = OutputTable::new(&["x", "phi"], rho.label(), tol);
            for x in grid(&rho.interval(), points) {
                t.push(vec![x, reducer(&rho, x, &spec)?]);
            }
            Ok(Outcome::ok(t.render(fmt)?))
        }
        Command::Secondary { density, points } => {
            check_points(points)?;
            let rho = load_density(&density, &spec)?;
            let mu = secondary_measure(Arc::clone(&rho), &spec)?;
            let mut t = OutputTable::new(&["x", "rho", "phi", "mu", "mu0"], rho.label(), tol);
            for x in grid(&rho.interval(), points) {
                let m = mu.mu(x)?;
                t.push(vec![x, rho.value(x)?, reducer(&rho, x, &spec)?, m, m / mu.d0()]);
            }
            Ok(Outcome::ok(t.render(fmt)?))
        }
        Command::Family { command: FamilyCommand::Density { density, t, points } } => {
            check_points(points)?;
            let rho = load_density(&density, &spec)?;
            let fam = FamilyDensity::new(Arc::clone(&rho), t, &spec)?;
            let mut table = OutputTable::new(&["x", "rho_t"], fam.label(), tol);
            for x in grid(&rho.interval(), points) {
                table.push(vec![x, fam.value(x)?]);
            }
            Ok(Outcome::ok(table.render(fmt)?))
        }
        Command::Family { command: FamilyCommand::Scan { density, t_min, t_max, steps } } => {
            if !(t_min > 0.0 && t_max > t_min && steps >= 2) {
                return Err(Error::InvalidParameter(
                    "family scan needs 0 < t-min < t-max and steps ≥ 2".into(),
                ));
            }
            let rho = load_density(&density, &spec)?;
            let c = moments(rho.as_ref(), 1, &spec)?;
            let c1 = c[1] / c[0];
            let mut table = OutputTable::new(&["t", "f"], rho.label(), tol);
            let mut code = EXIT_OK;
            for i in 0..steps {
                let t = t_min + (t_max - t_min) * i as f64 / (steps - 1) as f64;
                let fam = FamilyDensity::with_mean(Arc::clone(&rho), t, c1, &spec);
                let f = mass(&fam, &spec).unwrap_or_else(|_| {
                    code = EXIT_NUMERICAL;
                    f64::NAN
                });
                table.push(vec![t, f]);
            }
            Ok(Outcome { text: table.render(fmt)?, code })
        }
        Command::Roots { density, t, search, grid } => {
            if t == 1.0 {
                return Err(Error::InvalidParameter("t = 1 has no denominator to scan".into()));
            }
            let rho = load_density(&density, &spec)?;
            let fam = FamilyDensity::new(Arc::clone(&rho), t, &spec)?;
            let iv = rho.interval();
            let windows = match search {
                Some(s) => {
                    let (a, b) = parse_pair(&s, "--search")?;
                    vec![Interval::new(a, b)?]
                }
                None => {
                    let (lo, hi) = (1e-3 * iv.len(), 10.0 * iv.len());
                    vec![
                        Interval::new(iv.a() - hi, iv.a() - lo)?,
                        Interval::new(iv.b() + lo, iv.b() + hi)?,
                    ]
                }
            };
            let mut table = OutputTable::new(&["lo", "hi"], fam.label(), tol);
            for w in windows {
                for r in fam.denominator_roots(&w, grid.max(2), &spec)? {
                    table.push(vec![r.lo, r.hi]);
                }
            }
            Ok(Outcome::ok(table.render(fmt)?))
        }
        Command::Solve { density, lambda, g, points } => {
            check_points(points)?;
            let rho = load_density(&density, &spec)?;
            let g = Arc::new(parse(&g)?);
            let pb = IntegralEquationProblem::new(Arc::clone(&rho), lambda, g, &spec)?;
            let f = pb.solution(&spec);
            let mut table = OutputTable::new(&["x", "f", "residual"], rho.label(), tol);
            let mut worst: f64 = 0.0;
            for x in rho.interval().interior_grid(points) {
                let r = pb.residual(f.as_ref(), x, &spec)?;
                worst = worst.max(r.abs());
                table.push(vec![x, f.eval(x)?, r]);
            }
            let code = if worst > 1e-5 { EXIT_FAILED_CHECK } else { EXIT_OK };
            Ok(Outcome { text: table.render(fmt)?, code })
        }
        Command::Verify { suite: which } => {
            let which = match which {
                SuiteArg::Paper => Suite::Paper,
                SuiteArg::Quick => Suite::Quick,
            };
            let results = suite::run(which, &spec, cli.seed);
            let pass = results.iter().all(|c| c.pass());
            let text = match fmt {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&results)
                        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                    s.push('\n');
                    s
                }
                Format::Csv => verify_table(&results),
            };
            Ok(Outcome { text, code: if pass { EXIT_OK } else { EXIT_FAILED_CHECK } })
        }
        Command::Plot { input, x, y, svg } => {
            let points = read_columns(&input, &x, &y)?;
            write_atomic(&svg, line_plot(&points, &x, &y).as_bytes()).map_err(Error::InvalidParameter)?;
            Ok(Outcome::ok(String::new()))
        }
    }
}

fn verify_table(results: &[suite::Criterion]) -> String {
    let mut s = String::new();
    for c in results {
        let status = if c.pass() { "PASS" } else { "FAIL" };
        s.push_str(&format!("== [{status}] criterion {}: {}\n", c.number, c.title));
        for r in &c.reports {
            s.push_str(&format!("   {r}\n"));
        }
    }
    let failed = results.iter().filter(|c| !c.pass()).count();
    s.push_str(&format!("{} criteria, {failed} failed\n", results.len()));
    s
}

fn read_columns(path: &Path, x: &str, y: &str) -> Result<Vec<(f64, f64)>> {
    let bad = |m: String| Error::InvalidParameter(format!("{}: {m}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| bad(format!("no column '{name}'")))
    };
    let (ix, iy) = (col(x)?, col(y)?);
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| -> Result<f64> {
            let field = rec.get(i).unwrap_or("").trim();
            field
                .parse()
                .map_err(|_| bad(format!("row {}: '{field}' is not a number", line + 2)))
        };
        out.push((num(ix)?, num(iy)?));
    }
    if out.is_empty() {
        return Err(bad("no data rows".into()));
    }
    Ok(out)
}
