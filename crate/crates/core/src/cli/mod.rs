//! The `simplexht` command line: `verify`, `eval`, `sweep`, `fit` and `plot`.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! input errors. `--config FILE` reads `key = value` lines that act as flags
//! placed before the command-line ones, so explicit flags win.

pub mod plot;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::continuous::{eval_simplex_truncated, FunctionSpec, GaussianBump, QuadratureSpec};
use crate::dyadic::{enumerate_tuples, eval_dyadic_sup, verify_dyadic_telescoping, verify_parity_rule};
use crate::error::{Error, Result};
use crate::experiment::{fit_exponent, growth_sweep, load_records, records_to_csv, save_records, LatticeSettings, MaximizeSettings, Model, SweepSpec};
use crate::identities::{run_analytic_suite, SuiteConfig};
use crate::numerics::{CellFunction, HoelderExponents, LpExponent, LpNormed, TruncationRange};

pub use plot::{emit_plot, render_plot};

#[derive(Debug, Parser)]
#[command(name = "simplexht", version, about = "Numerical laboratory for the truncated simplex Hilbert transform")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run identity suites; exits 1 if any check fails
    Verify(VerifyArgs),
    /// Evaluate one form and print value, norms and trivial bound as JSON
    Eval(EvalArgs),
    /// Estimate norms over a range of scales or ratios and write records
    Sweep(SweepArgs),
    /// Fit the growth exponent of a record file
    Fit(FitArgs),
    /// Write an SVG log-log plot of a record file with its fit
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Dyadic,
    Analytic,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Dyadic,
    Continuous,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Dyadic => Model::Dyadic,
            ModelArg::Continuous => Model::Continuous,
        }
    }
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Degree n of the dyadic suite
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Side exponent L of the dyadic suite; scales l = 2..=L are checked
    #[arg(long = "L", default_value_t = 3)]
    side: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random samples for the pointwise polynomial identity
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Write the analytic report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct EvalArgs {
    #[arg(long, value_enum, default_value = "dyadic")]
    model: ModelArg,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Dyadic side exponent: functions live on the unit cells of [0, 2^L)^n
    #[arg(long = "L", default_value_t = 4)]
    side: u32,
    /// Number of dyadic scales, labelled 1..=m (scale 0 is the unit cell); defaults to L
    #[arg(long)]
    m: Option<u32>,
    /// Seed for random input functions
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON array of functions (cell functions or continuous specs)
    #[arg(long)]
    functions: Option<PathBuf>,
    /// Comma-separated Hölder exponents, `inf` allowed
    #[arg(long)]
    exps: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    #[arg(long = "R", default_value_t = 4.0)]
    big_r: f64,
    #[arg(long, default_value_t = 6.0)]
    extent: f64,
    #[arg(long, default_value_t = 0.09375)]
    spacing: f64,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "dyadic")]
    model: ModelArg,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Scale counts for dyadic sweeps, e.g. `1..4` or `2,4,6`; scales are labelled 1..=m
    #[arg(long, default_value = "1..4")]
    m: String,
    /// Values of log2(R/r) for continuous sweeps, e.g. `1..4`
    #[arg(long = "log2-ratio", default_value = "1..4")]
    log2_ratio: String,
    #[arg(long = "L", default_value_t = 5)]
    side: u32,
    /// Number of seeds (0..seeds); the best run is recorded
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    /// Comma-separated Hölder exponents; default n+1 in every slot
    #[arg(long)]
    exps: Option<String>,
    #[arg(long = "max-iter", default_value_t = 50)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Half-width of the continuous lattice
    #[arg(long, default_value_t = 2.0)]
    extent: f64,
    #[arg(long, default_value_t = 0.125)]
    spacing: f64,
    /// Inner truncation radius r of continuous sweeps
    #[arg(long, default_value_t = 0.125)]
    r: f64,
    /// Do not restart from the previous maximizer
    #[arg(long = "no-warm-start")]
    no_warm_start: bool,
    /// Record file (.csv or .json); CSV goes to stdout if omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct PlotArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

/// Runs the command line with the process's stdout and stderr.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    configure_threads();
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify(a) => verify(&a, out),
        Command::Eval(a) => eval(&a, out).map(|_| true),
        Command::Sweep(a) => sweep(&a, out).map(|_| true),
        Command::Fit(a) => fit(&a, out).map(|_| true),
        Command::Plot(a) => plot_cmd(&a).map(|_| true),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("SIMPLEXHT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Removes `--config FILE` and splices its `key = value` lines in as
/// `--key value` right after the subcommand.
fn expand_config(argv: Vec<String>) -> Result<Vec<String>> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut config = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().ok_or_else(|| Error::InvalidParameter("--config needs a file".into()))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut extra = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::RecordParse {
            path: PathBuf::from(&path),
            line: i + 1,
            field: line.to_string(),
            message: "expected key = value".into(),
        })?;
        let (k, v) = (k.trim(), v.trim());
        extra.push(format!("--{k}"));
        if v != "true" {
            extra.push(v.to_string());
        }
    }
    let at = rest.len().min(2);
    rest.splice(at..at, extra);
    Ok(rest)
}

fn parse_exps(spec: &str) -> Result<HoelderExponents> {
    let exps = spec
        .split(',')
        .map(|s| match s.trim() {
            "inf" | "infinity" => Ok(LpExponent::Infinity),
            t => t
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad exponent '{t}'")))
                .and_then(LpExponent::finite),
        })
        .collect::<Result<Vec<_>>>()?;
    HoelderExponents::new(exps)
}

fn uniform_exps(n: usize) -> Result<HoelderExponents> {
    HoelderExponents::from_finite(&vec![(n + 1) as f64; n + 1])
}

/// `a..b` (inclusive), `a,b,c`, or a single value.
fn parse_range(spec: &str) -> Result<Vec<u32>> {
    let bad = || Error::InvalidParameter(format!("bad range '{spec}', expected a..b or a,b,c"));
    let values: Vec<u32> = if let Some((a, b)) = spec.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        spec.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if values.is_empty() {
        return Err(Error::InvalidParameter(format!("range '{spec}' is empty")));
    }
    Ok(values)
}

fn write_json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    writeln!(out, "{text}").map_err(|e| Error::io("<stdout>", e))
}

fn write_text(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let mut ok = true;
    if matches!(a.suite, Suite::Dyadic | Suite::All) {
        if a.n == 0 || a.side < 2 {
            return Err(Error::InvalidParameter("dyadic suite needs n >= 1 and L >= 2".into()));
        }
        for k in 1..=a.n {
            for l in 2..=a.side {
                let r = verify_dyadic_telescoping(a.n, k, l, a.side)?;
                ok &= r.holds();
                write_text(
                    out,
                    &format!(
                        "telescoping n={} k={k} l={l} L={} discrepancy={} points={}\n",
                        a.n, a.side, r.max_discrepancy, r.points
                    ),
                )?;
            }
        }
        let mut failures = 0;
        let mut checked = 0;
        for l in 1..=a.side {
            for t in enumerate_tuples(l, a.side, a.n).into_iter().take(200) {
                for code in 0..(1u32 << (a.n + 1)) {
                    let sides: Vec<u8> = (0..=a.n).map(|i| ((code >> i) & 1) as u8).collect();
                    if verify_parity_rule(&t, &sides)? != (code.count_ones() % 2 == 0) {
                        failures += 1;
                    }
                    checked += 1;
                }
            }
        }
        ok &= failures == 0;
        write_text(out, &format!("parity n={} L={} patterns={checked} failures={failures}\n", a.n, a.side))?;
    }
    if matches!(a.suite, Suite::Analytic | Suite::All) {
        let cfg = SuiteConfig {
            seed: a.seed,
            poly_samples: a.samples,
            ..SuiteConfig::default()
        };
        let report = run_analytic_suite(&cfg)?;
        ok &= report.iter().all(|e| e.pass);
        match &a.out {
            Some(p) => {
                let text = serde_json::to_string_pretty(&report)? + "\n";
                std::fs::write(p, text).map_err(|e| Error::io(p, e))?;
                for e in &report {
                    write_text(
                        out,
                        &format!("{} samples={} max={:e} pass={}\n", e.check, e.samples, e.max_discrepancy, e.pass),
                    )?;
                }
            }
            None => write_json(out, &report)?,
        }
    }
    Ok(ok)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn spec_norm(f: &FunctionSpec, p: LpExponent, quad: &QuadratureSpec) -> Result<f64> {
    Ok(match f {
        FunctionSpec::Bump(b) => b.lp_norm(p),
        other => other.to_grid(quad.extent, quad.spacing)?.lp_norm(p),
    })
}

fn eval(a: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    match a.model {
        ModelArg::Dyadic => {
            let m = a.m.unwrap_or(a.side);
            let fs: Vec<CellFunction> = match &a.functions {
                Some(p) => read_json(p)?,
                None => (0..=a.n)
                    .map(|_| CellFunction::random_uniform(a.n, a.side, &mut rng))
                    .collect::<Result<_>>()?,
            };
            let n = fs.first().map_or(a.n, CellFunction::dimension);
            let power = HoelderExponents::power_type(n);
            let exps = match &a.exps {
                Some(s) => parse_exps(s)?,
                None => power.clone(),
            };
            if exps.len() != fs.len() {
                return Err(Error::Shape(format!("{} exponents for {} functions", exps.len(), fs.len())));
            }
            let value = eval_dyadic_sup(&fs, m)?;
            let norms: Vec<f64> = fs.iter().enumerate().map(|(i, f)| f.lp_norm(exps.get(i))).collect();
            // each scale contributes at most 2 Π‖F_i‖ at the power-type exponents
            let bound = (exps == power).then(|| 2.0 * m as f64 * norms.iter().product::<f64>());
            write_json(
                out,
                &json!({
                    "model": "dyadic",
                    "value": value,
                    "norms": norms,
                    "bound_trivial": bound,
                    "settings": {"n": n, "L": fs[0].side_exponent(), "m": m, "exps": exps.to_string(), "seed": a.seed},
                }),
            )
        }
        ModelArg::Continuous => {
            let fs: Vec<FunctionSpec> = match &a.functions {
                Some(p) => read_json(p)?,
                None => (0..=a.n).map(|_| FunctionSpec::Bump(GaussianBump::random(a.n, &mut rng))).collect(),
            };
            let n = fs.first().map_or(a.n, FunctionSpec::dimension);
            let exps = match &a.exps {
                Some(s) => parse_exps(s)?,
                None => uniform_exps(n)?,
            };
            if exps.len() != fs.len() {
                return Err(Error::Shape(format!("{} exponents for {} functions", exps.len(), fs.len())));
            }
            let range = TruncationRange::new(a.r, a.big_r)?;
            let quad = QuadratureSpec {
                extent: a.extent,
                spacing: a.spacing,
                ..QuadratureSpec::default()
            };
            let grids = fs.iter().map(|f| f.to_grid(quad.extent, quad.spacing)).collect::<Result<Vec<_>>>()?;
            let value = eval_simplex_truncated(&grids, &range, &quad)?;
            let norms = fs
                .iter()
                .enumerate()
                .map(|(i, f)| spec_norm(f, exps.get(i), &quad))
                .collect::<Result<Vec<f64>>>()?;
            let bound = 2.0 * range.log_ratio() * norms.iter().product::<f64>();
            write_json(
                out,
                &json!({
                    "model": "continuous",
                    "value": value,
                    "norms": norms,
                    "bound_trivial": bound,
                    "settings": {"n": n, "r": a.r, "R": a.big_r, "extent": a.extent, "spacing": a.spacing, "exps": exps.to_string(), "seed": a.seed},
                }),
            )
        }
    }
}

fn sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let exps = match &a.exps {
        Some(s) => parse_exps(s)?,
        None => uniform_exps(a.n)?,
    };
    let seeds: Vec<u64> = (0..a.seeds).collect();
    let mut spec = match a.model {
        ModelArg::Dyadic => SweepSpec::dyadic(a.n, a.side, parse_range(&a.m)?, exps, seeds),
        ModelArg::Continuous => SweepSpec::continuous(
            a.n,
            LatticeSettings {
                extent: a.extent,
                spacing: a.spacing,
                inner: a.r,
            },
            parse_range(&a.log2_ratio)?,
            exps,
            seeds,
        ),
    };
    spec.settings = MaximizeSettings {
        max_iter: a.max_iter,
        tol: a.tol,
    };
    spec.warm_start = !a.no_warm_start;
    let records = growth_sweep(&spec)?;
    match &a.out {
        Some(p) => save_records(&records, p),
        None => write_text(out, &records_to_csv(&records)?),
    }
}

fn fit(a: &FitArgs, out: &mut dyn Write) -> Result<()> {
    let records = load_records(&a.input)?;
    let fit = fit_exponent(&records)?;
    if let Some(p) = &a.out {
        let text = serde_json::to_string_pretty(&fit)? + "\n";
        std::fs::write(p, text).map_err(|e| Error::io(p, e))?;
    }
    write_json(out, &fit)
}

fn plot_cmd(a: &PlotArgs) -> Result<()> {
    let records = load_records(&a.input)?;
    let fit = fit_exponent(&records).ok();
    emit_plot(&records, fit.as_ref(), &a.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(
            std::iter::once("simplexht").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges_and_exponents() {
        assert_eq!(parse_range("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_range("2,5").unwrap(), vec![2, 5]);
        assert_eq!(parse_range("3").unwrap(), vec![3]);
        assert!(parse_range("4..1").is_err());
        assert!(parse_range("x").is_err());
        assert_eq!(parse_exps("3,3,3").unwrap().len(), 3);
        assert_eq!(parse_exps("2,inf,2").unwrap().get(1), LpExponent::Infinity);
        assert!(parse_exps("2,2,2").is_err());
        assert!(parse_exps("0.5,x").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["eval", "--bogus"]).0, 2);
        let (code, _, err) = run_capture(&["fit", "--input", "/nonexistent/none.csv"]);
        assert_eq!(code, 2);
        assert!(err.contains("none.csv"));
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn dyadic_verify_prints_zero_discrepancies() {
        let (code, out, _) = run_capture(&["verify", "--suite", "dyadic", "--n", "2", "--L", "3"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().filter(|l| l.starts_with("telescoping")).collect();
        assert_eq!(lines.len(), 4);
        assert!(lines.iter().all(|l| l.contains("discrepancy=0 ")));
        assert!(out.contains("failures=0"));
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.conf");
        std::fs::write(&cfg, "# defaults\nn = 1\nL = 3\nseed = 4\n").unwrap();
        let (code, out, _) = run_capture(&["eval", "--config", cfg.to_str().unwrap()]);
        assert_eq!(code, 0, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["settings"]["n"], 1);
        let (_, out, _) = run_capture(&["eval", "--config", cfg.to_str().unwrap(), "--L", "2"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["settings"]["L"], 2);
        assert_eq!(v["settings"]["seed"], 4);
        std::fs::write(&cfg, "no separator\n").unwrap();
        assert_eq!(run_capture(&["eval", "--config", cfg.to_str().unwrap()]).0, 2);
    }
}
