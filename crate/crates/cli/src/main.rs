use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lowdisc::bounds::{self, AtanassovS, HammersleyBound, JumpMode};
use lowdisc::discrepancy::{star_discrepancy, DiscMethod, TaParams};
use lowdisc::harness::{self, ReproduceOptions, ReproductionManifest};
use lowdisc::padic::{padic_suite, PadicSuiteParams};
use lowdisc::search::{first_primes, greedy_search, inverse_star_search, SearchBudget, INVERSE_SEARCH_CAP};
use lowdisc::sequence::{generate_point_set, hammersley_lift};
use lowdisc::{HammersleyConvention, PointSet, ScrambleConfig};

/// Scrambled Halton and Hammersley point sets and their star discrepancy.
#[derive(Parser)]
#[command(name = "lowdisc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set file.
    Gen(GenArgs),
    /// Star discrepancy of a point set file.
    Disc(DiscArgs),
    /// CSV of N D*_N / ln N for a one-dimensional config.
    Series(SeriesArgs),
    /// Evaluate the explicit and probabilistic bounds.
    Bounds {
        #[command(subcommand)]
        op: BoundsOp,
    },
    /// Greedy shift/permutation search.
    Search(SearchArgs),
    /// Check the residue-class invariants of scrambled subsequences.
    PadicCheck(PadicArgs),
    /// Regenerate tables from reproduction manifests.
    Reproduce(ReproduceArgs),
    /// Count how often each series attains the smallest value.
    Winners {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    /// Config file; without it the plain Halton set on `--primes` is used.
    #[arg(long, conflicts_with = "primes")]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u32>,
    #[arg(long)]
    n: usize,
    /// Lift a one-dimensional config to a Hammersley set.
    #[arg(long)]
    hammersley: Option<Convention>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Indexed,
    Classic,
}

impl From<Convention> for HammersleyConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Indexed => HammersleyConvention::Indexed,
            Convention::Classic => HammersleyConvention::Classic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Exact,
    Ta,
}

#[derive(Args)]
struct TaArgs {
    #[arg(long, default_value_t = 20_000)]
    iterations: usize,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl TaArgs {
    fn params(&self) -> TaParams {
        TaParams { iterations: self.iterations, restarts: self.restarts, seed: self.seed, ..TaParams::default() }
    }

    fn method(&self, m: MethodArg) -> DiscMethod {
        match m {
            MethodArg::Auto => DiscMethod::Auto(self.params()),
            MethodArg::Exact => DiscMethod::Exact,
            MethodArg::Ta => DiscMethod::Ta(self.params()),
        }
    }
}

#[derive(Args)]
struct DiscArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[command(flatten)]
    ta: TaArgs,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    n_max: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BoundsOp {
    /// Star discrepancy bound of the base-b van der Corput sequence.
    Vdc {
        #[arg(long)]
        b: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Extreme discrepancy bound of a scrambled subsequence.
    Subsequence {
        #[arg(long)]
        p: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Extreme discrepancy bound of a scrambled Halton subsequence.
    Halton {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Atanassov's Halton bound.
    Atanassov {
        #[arg(long, value_delimiter = ',', required = true)]
        bases: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        /// Free parameter; defaults to the number of bases.
        #[arg(long)]
        s: Option<f64>,
    },
    /// Constants of the cover argument.
    Cover {
        #[arg(long, default_value_t = 13)]
        mu: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u32>,
    },
    /// c sqrt(d/N).
    Sqrt {
        #[arg(long, default_value_t = bounds::C_STAR)]
        c: f64,
        #[arg(long)]
        d: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Smallest N with c sqrt(d/N) <= eps.
    InverseSqrt {
        #[arg(long, default_value_t = bounds::C_STAR)]
        c: f64,
        #[arg(long)]
        d: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
    },
    /// First N from which an explicit Hammersley bound stays below c sqrt(d/N).
    Crossover {
        #[arg(long, value_enum)]
        kind: CrossoverKind,
        /// Halton bases for the Atanassov bound (defaults to the first d-1 primes).
        #[arg(long, value_delimiter = ',')]
        bases: Vec<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, default_value_t = bounds::C_STAR)]
        c: f64,
    },
    /// How far a computed value certifies the sqrt bound ahead.
    Jump {
        #[arg(long)]
        n0: u64,
        #[arg(long)]
        d0: f64,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = bounds::C_STAR)]
        c: f64,
        #[arg(long, value_enum, default_value = "sequence")]
        mode: JumpArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CrossoverKind {
    Base2,
    Base23,
    Atanassov,
}

#[derive(Clone, Copy, ValueEnum)]
enum JumpArg {
    Sequence,
    Pointset,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    dim: usize,
    /// Number of points; required unless `--target` asks for the smallest N.
    #[arg(long, required_unless_present = "target")]
    n: Option<usize>,
    /// Find the smallest N whose best configuration reaches this value.
    #[arg(long)]
    target: Option<f64>,
    /// Shifts per dimension: one value for all dimensions or one per dimension.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    budget_shifts: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    budget_perms: Vec<usize>,
    /// Prime per dimension (defaults to the first `dim` primes).
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u32>,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[command(flatten)]
    ta: TaArgs,
    #[arg(long, default_value_t = INVERSE_SEARCH_CAP)]
    cap: usize,
    /// Where to write the config; stdout when absent (the trace then goes to stderr).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PadicArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11")]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 20)]
    max_shift: u64,
    #[arg(long, default_value_t = 5)]
    perms: usize,
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Built-in manifest names (table1..table4); all of them when empty.
    names: Vec<String>,
    /// Manifest files to run in addition to the named ones.
    #[arg(long)]
    manifest: Vec<PathBuf>,
    #[arg(long)]
    include_long: bool,
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn per_dim<T: Copy>(values: &[T], d: usize, what: &str) -> Result<Vec<T>> {
    match values.len() {
        1 => Ok(vec![values[0]; d]),
        n if n == d => Ok(values.to_vec()),
        n => bail!("{what}: expected 1 or {d} values, got {n}"),
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let cfg = match &args.config {
        Some(path) => ScrambleConfig::read(path)?,
        None if !args.primes.is_empty() => ScrambleConfig::halton(&args.primes)?,
        None => bail!("either --config or --primes is required"),
    };
    let points = match args.hammersley {
        Some(c) => hammersley_lift(&cfg, args.n, c.into())?,
        None => generate_point_set(&cfg, args.n)?,
    };
    emit(args.out.as_ref(), &points.to_text())
}

fn disc(args: DiscArgs) -> Result<()> {
    let points = PointSet::read(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
    let r = star_discrepancy(&points, &args.ta.method(args.method))?;
    println!("{r}");
    Ok(())
}

fn series(args: SeriesArgs) -> Result<()> {
    let cfg = ScrambleConfig::read(&args.config)?;
    let mut buf = Vec::new();
    harness::emit_series(&cfg, args.n_max, &mut buf)?;
    emit(args.out.as_ref(), std::str::from_utf8(&buf)?)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

fn bounds_cmd(op: BoundsOp) -> Result<()> {
    let mut rows = Vec::new();
    match op {
        BoundsOp::Vdc { b, n } => {
            for n in n {
                rows.push(format!("vdc_star_bound,{b},{n},{}", bounds::vdc_star_bound(b, n)?));
            }
        }
        BoundsOp::Subsequence { p, n } => {
            for n in n {
                rows.push(format!("subsequence_extreme_bound,{p},{n},{}", bounds::subsequence_extreme_bound(p, n)?));
            }
        }
        BoundsOp::Halton { primes, n } => {
            for n in n {
                let v = bounds::halton_extreme_bound(&primes, n)?;
                rows.push(format!("halton_extreme_bound,{},{n},{v}", join(&primes)));
            }
        }
        BoundsOp::Atanassov { bases, n, s } => {
            let s_mode = s.map_or(AtanassovS::Dimension, AtanassovS::Value);
            let s_text = s.map_or_else(|| "d".to_string(), |v| v.to_string());
            for n in n {
                let v = bounds::atanassov_star_bound(&bases, n, s_mode)?;
                rows.push(format!("atanassov_star_bound,{},{n},{s_text},{v}", join(&bases)));
            }
        }
        BoundsOp::Cover { mu, d } => {
            for d in d {
                let p = bounds::cover_constant_pipeline(mu, d)?;
                rows.push(format!("mu_minus_sigma,{mu},{d},{}", p.mu_minus_sigma()));
                rows.push(format!("c,{mu},{d},{}", p.c));
                rows.push(format!("bracket_ok,{mu},{d},{}", p.bracket_ok));
            }
        }
        BoundsOp::Sqrt { c, d, n } => {
            for n in n {
                rows.push(format!("sqrt_bound,{c},{d},{n},{}", bounds::sqrt_bound(c, d, n)?));
            }
        }
        BoundsOp::InverseSqrt { c, d, eps } => {
            for e in eps {
                rows.push(format!("inverse_sqrt_bound,{c},{d},{e},{}", bounds::inverse_sqrt_bound(c, d, e)?));
            }
        }
        BoundsOp::Crossover { kind, bases, d, s, c } => {
            let bound = match kind {
                CrossoverKind::Base2 => HammersleyBound::Base2,
                CrossoverKind::Base23 => HammersleyBound::Base23,
                CrossoverKind::Atanassov => {
                    let bases = match (bases.is_empty(), d) {
                        (false, _) => bases,
                        (true, Some(d)) if d >= 2 => first_primes(d as usize - 1),
                        _ => bail!("the Atanassov bound needs --bases or --d >= 2"),
                    };
                    HammersleyBound::Atanassov { bases, s: s.map_or(AtanassovS::Dimension, AtanassovS::Value) }
                }
            };
            let d = bound.dim();
            let n = bounds::crossover_threshold(d, &bound, c)?;
            rows.push(format!("crossover_threshold,{kind:?},{d},{c},{n}").to_lowercase());
        }
        BoundsOp::Jump { n0, d0, d, c, mode } => {
            let mode = match mode {
                JumpArg::Sequence => JumpMode::Sequence,
                JumpArg::Pointset => JumpMode::Pointset,
            };
            let p = bounds::jump_plan(n0, d0, d, c, mode)?;
            rows.push(format!("jump_plan,{n0},{d0},{d},{c},{:?},{},{}", p.mode, p.n1, p.valid).to_lowercase());
        }
    }
    let mut text = rows.join("\n");
    text.push('\n');
    emit(None, &text)
}

fn search(args: SearchArgs) -> Result<()> {
    let d = args.dim;
    if d == 0 {
        bail!("--dim must be at least 1");
    }
    let budget = SearchBudget::new(
        per_dim(&args.budget_shifts, d, "--budget-shifts")?,
        per_dim(&args.budget_perms, d, "--budget-perms")?,
        args.ta.seed,
    )?;
    let method = args.ta.method(args.method);
    let result = match (args.target, args.n) {
        (Some(target), _) => {
            if !args.primes.is_empty() {
                bail!("--primes is not supported together with --target");
            }
            let (n, r) = inverse_star_search(d, target, &budget, &method, args.cap)?;
            eprintln!("smallest N reaching {target}: {n}");
            r
        }
        (None, Some(n)) => {
            let primes = if args.primes.is_empty() { first_primes(d) } else { args.primes.clone() };
            if primes.len() != d {
                bail!("--primes lists {} primes for dimension {d}", primes.len());
            }
            greedy_search(&primes, n, &budget, &method)?
        }
        (None, None) => bail!("either --n or --target is required"),
    };
    let trace = format!(
        "{}N={} value={:.10}{} evaluations={}\n",
        result.trace_text(),
        result.n,
        result.value,
        if result.is_exact { "" } else { " (lower bound)" },
        result.evaluations
    );
    let mut config = result.config.to_json();
    config.push('\n');
    match &args.out {
        Some(path) => {
            emit(Some(path), &config)?;
            emit(None, &trace)
        }
        None => {
            eprint!("{trace}");
            emit(None, &config)
        }
    }
}

fn padic_check(args: PadicArgs) -> Result<bool> {
    let params = PadicSuiteParams {
        primes: args.primes,
        max_shift: args.max_shift,
        perms: args.perms,
        sizes: args.sizes,
        seed: args.seed,
    };
    let reports = padic_suite(&params)?;
    for r in &reports {
        println!("{r}");
    }
    Ok(reports.iter().all(|r| r.passed()))
}

fn reproduce(args: ReproduceArgs) -> Result<bool> {
    let mut manifests = Vec::new();
    let names: Vec<String> = if args.names.is_empty() && args.manifest.is_empty() {
        ReproductionManifest::builtin_names().into_iter().map(String::from).collect()
    } else {
        args.names
    };
    for name in &names {
        manifests.push(ReproductionManifest::builtin(name)?);
    }
    for path in &args.manifest {
        manifests.push(ReproductionManifest::read(path).with_context(|| format!("reading {}", path.display()))?);
    }
    let opts = ReproduceOptions { include_long: args.include_long };
    let mut ok = true;
    for m in &manifests {
        let report = harness::reproduce(m, opts);
        print!("{report}");
        ok &= report.passed();
    }
    Ok(ok)
}

fn winners(files: &[PathBuf]) -> Result<()> {
    let series = files
        .iter()
        .map(|f| {
            let text = std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
            Ok(harness::read_series(&text)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let w = harness::count_winners(&series)?;
    println!("file,ties_count_for_all,ties_count_for_none");
    for (i, f) in files.iter().enumerate() {
        println!("{},{},{}", f.display(), w.ties_count_for_all[i], w.ties_count_for_none[i]);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(a) => gen(a)?,
        Command::Disc(a) => disc(a)?,
        Command::Series(a) => series(a)?,
        Command::Bounds { op } => bounds_cmd(op)?,
        Command::Search(a) => search(a)?,
        Command::PadicCheck(a) => return padic_check(a),
        Command::Reproduce(a) => return reproduce(a),
        Command::Winners { files } => winners(&files)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
