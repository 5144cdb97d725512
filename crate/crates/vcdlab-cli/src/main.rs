//! Batch experiment runner: generates instances, runs the kernel, pattern,
//! net and Helly experiments, and writes deterministic CSV/JSON artifacts.
//!
//! Exit codes: 0 success, 1 a tightness check reported FAIL, 2 configuration
//! error, 3 a precondition (general position, surjectivity, net size)
//! failed.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use vcdlab::applications::{
    crafted_helly_triple, epsilon_net_sample, fractional_helly_check, halfplane_circles_triple,
};
use vcdlab::arrangements::schema::InstanceFile;
use vcdlab::arrangements::{
    binomial, enumerate_realizable_patterns, gen_generic_hyperplanes, gen_pencil_instance,
    GridInstance,
};
use vcdlab::cohomology::cohomology_space;
use vcdlab::exactq::Rational;
use vcdlab::report::{sweep_csv, ExperimentReport, SweepRow};
use vcdlab::vcdensity::{fit_vcd_slope, higher_order_pattern_count, kernel_set, SlopeFit};

#[derive(Parser)]
#[command(
    name = "vcdlab",
    version,
    about = "Exact experiments on arrangement models"
)]
struct Cli {
    /// Worker threads for sweeps (default: all cores). Results do not depend
    /// on the level of parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Record wall-clock time in JSON reports (off by default so reruns are
    /// byte-identical).
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and write it as vcdlab-instance/1 JSON.
    Gen(GenArgs),
    /// Enumerate realizable 0/1-patterns of a generic hyperplane family.
    Patterns(PatternsArgs),
    /// Compute the distinct restriction kernels of an instance's test family.
    Kernels(KernelsArgs),
    /// Sweep a family over n and fit the log-log growth slope.
    Vcd(VcdArgs),
    /// Random epsilon-net construction with exhaustive verification.
    Epsnet(EpsnetArgs),
    /// Fractional-Helly census on a crafted instance.
    Helly(HellyArgs),
    /// Re-run a tightness construction and judge it against its expected value.
    Tightness(TightnessArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExampleKind {
    Grid,
    Pencil,
    Hyperplanes,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepFamily {
    Grid,
    Hyperplanes,
    Product,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    example: ExampleKind,
    /// Grid lines per direction, pencil base lines, or hyperplane subscript
    /// (the family then has n+1 members).
    #[arg(long)]
    n: usize,
    /// Projective dimension (hyperplanes only).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PatternsArgs {
    #[arg(long)]
    m: usize,
    /// Family size is n+1.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KernelsArgs {
    #[arg(long, value_enum)]
    family: ExampleKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VcdArgs {
    #[arg(long, value_enum)]
    family: SweepFamily,
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// Order of the sweep: 1 for the grid and hyperplane families, 2 for the
    /// product family (the per-family default).
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Sweep range: lines per direction (grid), family size (hyperplanes),
    /// or per-axis grid size (product).
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    n_step: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for sweep.csv and slope.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EpsnetArgs {
    /// Number of circles in the family.
    #[arg(long, default_value_t = 40)]
    n: usize,
    #[arg(long, default_value = "1/4")]
    eps: String,
    #[arg(long, default_value = "2")]
    c_const: String,
    /// Density bound used in the net-size formula.
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HellyArgs {
    /// Family size (n+1 members).
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value = "1/2")]
    alpha: String,
    /// Number of test sets in the crafted instance.
    #[arg(long, default_value_t = 6)]
    tests: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TightnessArgs {
    #[arg(long, value_enum)]
    example: ExampleKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

enum CliError {
    Config(String),
    Precondition(String),
    TightnessFailed,
}

impl From<vcdlab::Error> for CliError {
    fn from(e: vcdlab::Error) -> Self {
        match e {
            vcdlab::Error::GeneralPosition(_)
            | vcdlab::Error::NotSurjective { .. }
            | vcdlab::Error::NetTooLarge { .. }
            | vcdlab::Error::GenericityBudget { .. } => CliError::Precondition(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the global pool may already be initialized.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let timings = cli.timings;
    let result = match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Patterns(args) => run_patterns(args, timings),
        Command::Kernels(args) => run_kernels(args, timings),
        Command::Vcd(args) => run_vcd(args),
        Command::Epsnet(args) => run_epsnet(args, timings),
        Command::Helly(args) => run_helly(args, timings),
        Command::Tightness(args) => run_tightness(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::TightnessFailed) => ExitCode::from(1),
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Precondition(msg)) => {
            eprintln!("precondition failed: {msg}");
            ExitCode::from(3)
        }
    }
}

/// Seeds are mandatory for randomized commands; VCDLAB_SEED is the fallback.
fn require_seed(seed: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("VCDLAB_SEED") {
        Ok(text) => text
            .parse()
            .map_err(|_| CliError::Config("VCDLAB_SEED is not an integer".into())),
        Err(_) => Err(CliError::Config(
            "this command is randomized: pass --seed or set VCDLAB_SEED".into(),
        )),
    }
}

fn parse_rational(text: &str, what: &str) -> Result<Rational, CliError> {
    text.parse()
        .map_err(|e| CliError::Config(format!("bad {what} {text:?}: {e}")))
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, content)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn params_map<K: Display, V: Display>(pairs: &[(K, V)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn report_json<T: Serialize>(
    instance_id: String,
    p: usize,
    params: BTreeMap<String, String>,
    result: T,
    seed: u64,
    started: Instant,
    timings: bool,
) -> String {
    ExperimentReport {
        instance_id,
        p,
        params,
        result,
        seed,
        runtime_ms: timings.then(|| started.elapsed().as_millis()),
    }
    .to_json()
}

fn run_gen(args: GenArgs) -> Result<(), CliError> {
    let file = match args.example {
        ExampleKind::Grid => InstanceFile::from_grid(&GridInstance::generate(args.n)?),
        ExampleKind::Pencil => {
            let seed = require_seed(args.seed)?;
            InstanceFile::from_pencil(&gen_pencil_instance(args.n, seed)?)
        }
        ExampleKind::Hyperplanes => {
            let seed = require_seed(args.seed)?;
            let m = args
                .m
                .ok_or_else(|| CliError::Config("--m is required for hyperplanes".into()))?;
            InstanceFile::from_hyperplanes(&gen_generic_hyperplanes(m, args.n + 1, seed)?)
        }
    };
    write_file(&args.out, &file.to_json())?;
    println!("wrote {}", args.out.display());
    Ok(())
}

#[derive(Serialize)]
struct PatternsResult {
    family_size: usize,
    pattern_count: usize,
    generic_count: u128,
}

fn run_patterns(args: PatternsArgs, timings: bool) -> Result<(), CliError> {
    let started = Instant::now();
    let seed = require_seed(args.seed)?;
    let family = gen_generic_hyperplanes(args.m, args.n + 1, seed)?;
    let count = enumerate_realizable_patterns(&family).len();
    let result = PatternsResult {
        family_size: args.n + 1,
        pattern_count: count,
        generic_count: (0..=args.m).map(|i| binomial(args.n + 1, i)).sum(),
    };
    let json = report_json(
        format!("hyperplanes-m{}-n{}", args.m, args.n),
        0,
        params_map(&[("m", args.m), ("n", args.n)]),
        result,
        seed,
        started,
        timings,
    );
    write_or_print(&args.out, &json)
}

#[derive(Serialize)]
struct KernelsResult {
    ambient_h_dim: usize,
    test_count: usize,
    kernel_count: usize,
    kernel_dims: Vec<usize>,
}

fn run_kernels(args: KernelsArgs, timings: bool) -> Result<(), CliError> {
    let started = Instant::now();
    let (id, seed, complex, tests) = match args.family {
        ExampleKind::Grid => {
            let g = GridInstance::generate(args.n)?;
            let tests = g.sweep_subcomplexes();
            (format!("grid-{}", args.n), 0u64, g.complex().clone(), tests)
        }
        ExampleKind::Pencil => {
            let seed = require_seed(args.seed)?;
            let inst = gen_pencil_instance(args.n, seed)?;
            let tests: Vec<_> = inst.fibers().values().cloned().collect();
            (
                format!("pencil-{}", args.n),
                seed,
                inst.incidence_graph().clone(),
                tests,
            )
        }
        ExampleKind::Hyperplanes => {
            return Err(CliError::Config(
                "kernels supports the grid and pencil families; use `patterns` for hyperplanes"
                    .into(),
            ))
        }
    };
    let ks = kernel_set(&complex, &tests, args.p)?;
    let result = KernelsResult {
        ambient_h_dim: ks.ambient_hp_dim(),
        test_count: tests.len(),
        kernel_count: ks.len(),
        kernel_dims: ks.dimensions(),
    };
    let json = report_json(
        id,
        args.p,
        params_map(&[("n", args.n)]),
        result,
        seed,
        started,
        timings,
    );
    write_or_print(&args.out, &json)
}

#[derive(Serialize)]
struct SlopeSummary {
    family: String,
    p: usize,
    q: usize,
    dim_x: usize,
    bound: usize,
    #[serde(flatten)]
    fit: SlopeFit,
}

fn run_vcd(args: VcdArgs) -> Result<(), CliError> {
    if args.n_min < 2 || args.n_max < args.n_min || args.n_step == 0 {
        return Err(CliError::Config(
            "need 2 <= n-min <= n-max and n-step >= 1".into(),
        ));
    }
    let expected_q = match args.family {
        SweepFamily::Product => 2,
        _ => 1,
    };
    if args.q.is_some_and(|q| q != expected_q) {
        return Err(CliError::Config(format!(
            "this family is an order-{expected_q} sweep"
        )));
    }
    let n_values: Vec<usize> = (args.n_min..=args.n_max).step_by(args.n_step).collect();
    let (family_name, p, q, dim_x, points) = match args.family {
        SweepFamily::Grid => {
            if args.p != 1 {
                return Err(CliError::Config(
                    "the grid family is a degree-1 sweep".into(),
                ));
            }
            let points = map_sweep(&n_values, |n| {
                Ok((n, GridInstance::generate(n)?.sweep_distinct_kernel_count()))
            })?;
            ("grid".to_string(), 1, 1, 1, points)
        }
        SweepFamily::Hyperplanes => {
            if args.p != 0 {
                return Err(CliError::Config(
                    "the hyperplane family is a degree-0 sweep".into(),
                ));
            }
            let m = args
                .m
                .ok_or_else(|| CliError::Config("--m is required for hyperplanes".into()))?;
            let seed = require_seed(args.seed)?;
            // n is the family size here: the growth of the pattern count is
            // measured against the number of hyperplanes.
            let points = map_sweep(&n_values, |n| {
                let family = gen_generic_hyperplanes(m, n, seed.wrapping_add(n as u64))?;
                Ok((n, enumerate_realizable_patterns(&family).len()))
            })?;
            (format!("hyperplanes-m{m}"), 0, 1, m, points)
        }
        SweepFamily::Product => {
            if args.p != 0 {
                return Err(CliError::Config(
                    "the product family is a degree-0 sweep".into(),
                ));
            }
            let carrier = args.n_max;
            let mut cuts = Vec::new();
            for a in 0..carrier {
                for b in a..carrier {
                    for c in 0..carrier {
                        for d in c..carrier {
                            cuts.push((a..=b).flat_map(|x| (c..=d).map(move |y| (x, y))).collect());
                        }
                    }
                }
            }
            let points = map_sweep(&n_values, |n| {
                let sub: Vec<usize> = (0..n).collect();
                Ok((n, higher_order_pattern_count(&sub, &sub, &cuts)))
            })?;
            ("product-rectangles".to_string(), 0, 2, 4, points)
        }
    };

    let rows: Vec<SweepRow> = points
        .iter()
        .map(|&(n, count)| SweepRow {
            family: family_name.clone(),
            p,
            q,
            n,
            count,
        })
        .collect();
    let fit = fit_vcd_slope(&points)?;
    let summary = SlopeSummary {
        family: family_name,
        p,
        q,
        dim_x,
        bound: (p + q) * dim_x,
        fit,
    };

    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", args.out.display())))?;
    write_file(&args.out.join("sweep.csv"), &sweep_csv(&rows))?;
    let mut slope_json =
        serde_json::to_string_pretty(&summary).map_err(|e| CliError::Config(e.to_string()))?;
    slope_json.push('\n');
    write_file(&args.out.join("slope.json"), &slope_json)?;
    println!(
        "{} rows -> {}; slope {:.4} (bound {})",
        rows.len(),
        args.out.display(),
        summary.fit.slope,
        summary.bound
    );
    Ok(())
}

/// Evaluates sweep points in parallel, preserving input order.
fn map_sweep<F>(n_values: &[usize], f: F) -> Result<Vec<(usize, usize)>, CliError>
where
    F: Fn(usize) -> vcdlab::Result<(usize, usize)> + Sync,
{
    use rayon::prelude::*;
    let results: Vec<vcdlab::Result<(usize, usize)>> = n_values.par_iter().map(|&n| f(n)).collect();
    results
        .into_iter()
        .collect::<vcdlab::Result<Vec<_>>>()
        .map_err(CliError::from)
}

fn run_epsnet(args: EpsnetArgs, timings: bool) -> Result<(), CliError> {
    let started = Instant::now();
    let seed = require_seed(args.seed)?;
    let eps = parse_rational(&args.eps, "eps")?;
    let c_const = parse_rational(&args.c_const, "c-const")?;
    let triple = halfplane_circles_triple(args.n)?;
    let outcome = epsilon_net_sample(&triple, 1, &eps, &c_const, args.d, args.trials, seed)?;
    let json = report_json(
        format!("halfplane-circles-{}", args.n),
        1,
        params_map(&[
            ("n", args.n.to_string()),
            ("eps", args.eps.clone()),
            ("c_const", args.c_const.clone()),
            ("d", args.d.to_string()),
            ("trials", args.trials.to_string()),
        ]),
        outcome,
        seed,
        started,
        timings,
    );
    write_or_print(&args.out, &json)
}

fn run_helly(args: HellyArgs, timings: bool) -> Result<(), CliError> {
    let started = Instant::now();
    let seed = require_seed(args.seed)?;
    let alpha = parse_rational(&args.alpha, "alpha")?;
    let triple = crafted_helly_triple(args.n, args.tests, seed)?;
    let outcome = fractional_helly_check(&triple, 1, args.k, &alpha)?;
    let json = report_json(
        format!("crafted-helly-{}", args.n),
        1,
        params_map(&[
            ("n", args.n.to_string()),
            ("k", args.k.to_string()),
            ("alpha", args.alpha.clone()),
            ("tests", args.tests.to_string()),
        ]),
        outcome,
        seed,
        started,
        timings,
    );
    write_or_print(&args.out, &json)
}

fn run_tightness(args: TightnessArgs) -> Result<(), CliError> {
    let ok = match args.example {
        ExampleKind::Hyperplanes => {
            let m = args
                .m
                .ok_or_else(|| CliError::Config("--m is required for hyperplanes".into()))?;
            let seed = require_seed(args.seed)?;
            let family = gen_generic_hyperplanes(m, args.n + 1, seed)?;
            let got = enumerate_realizable_patterns(&family).len() as u128;
            let expected: u128 = (0..=m).map(|i| binomial(args.n + 1, i)).sum();
            println!(
                "hyperplanes m={m} n={}: {got} realizable patterns, expected {expected}",
                args.n
            );
            got == expected
        }
        ExampleKind::Grid => {
            let g = GridInstance::generate(args.n)?;
            let betti = cohomology_space(g.complex(), 1)?.quotient_dim();
            let expected = (args.n - 1) * (args.n - 1);
            let ks = kernel_set(g.complex(), &g.sweep_subcomplexes(), 1)?;
            let dims = ks.dimension_set();
            let full_spectrum = dims == (0..=expected).collect();
            println!(
                "grid n={}: dim H^1 = {betti} (expected {expected}); kernel dims {:?}; \
                 distinct kernels {}",
                args.n,
                dims,
                ks.len()
            );
            betti == expected && full_spectrum && ks.len() > expected
        }
        ExampleKind::Pencil => {
            let seed = require_seed(args.seed)?;
            let inst = gen_pencil_instance(args.n, seed)?;
            let tests: Vec<_> = inst.fibers().values().cloned().collect();
            let ks = kernel_set(inst.incidence_graph(), &tests, 1)?;
            let pairs = args.n * (args.n - 1) / 2;
            println!(
                "pencil n={}: {} distinct kernels over {} test points, expected >= {}",
                args.n,
                ks.len(),
                tests.len(),
                pairs + 1
            );
            ks.len() > pairs
        }
    };
    if ok {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(CliError::TightnessFailed)
    }
}
