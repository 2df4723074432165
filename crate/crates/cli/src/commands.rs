use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vdwforge_core::constructions::{build_pipeline, erdos_turan_set, plan, Mode, PipelineConfig, PipelineOutput};
use vdwforge_core::oracle::{kappa_cyclic, vdw, SearchValue};
use vdwforge_core::planner::{bound_table, Window};
use vdwforge_core::progressions::find_mono_ap;
use vdwforge_core::{Coloring, Error, Group, VerifyMode};

use crate::certificate::{Certificate, Verdict};
use crate::exit;
use crate::parallel::{find_mono_ap_par, with_threads};

#[derive(Debug, Parser)]
#[command(name = "vdwforge", version, about = "Build and check colorings of Z/NZ with no monochromatic k-term progression")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the blow-up pipeline and write a certificate
    Construct(ConstructArgs),
    /// Re-verify a certificate from the file alone
    Verify(VerifyArgs),
    /// Exact w(k;r) by exhaustive search
    Vdw(VdwArgs),
    /// Least k with a good r-coloring of Z/n, by exhaustive search
    Kappa(KappaArgs),
    /// Decomposition r = a + 3b, bound rows and a pipeline plan
    Params(ParamsArgs),
    /// Digit set mod p^t with all digits nonzero
    Etset(EtsetArgs),
    /// Verifier throughput on a seeded random coloring
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Forced,
}

#[derive(Debug, Args)]
struct Threads {
    /// Worker threads for verification [default: all cores]
    #[arg(long, env = "VDWFORGE_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    r: u32,
    /// Prime window slack, as a fraction (1/20) or decimal (0.05)
    #[arg(long, default_value = "1/20", value_parser = parse_ratio)]
    epsilon: Ratio<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Forced)]
    mode: ModeArg,
    /// Prime window (lo, hi] replacing ((1 - eps) k, k]
    #[arg(long, value_parser = parse_window)]
    window: Option<Window>,
    /// Blow-up attempts per stage
    #[arg(long, default_value_t = 100)]
    retries: u64,
    /// Resampling rounds allowed for each base coloring
    #[arg(long, default_value_t = 100_000)]
    resample_cap: u64,
    /// Certificate path; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    threads: Threads,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    path: PathBuf,
    /// Use the plain element-by-element search instead of the bitset kernel
    #[arg(long)]
    naive: bool,
    #[command(flatten)]
    threads: Threads,
}

#[derive(Debug, Args)]
struct VdwArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    r: u32,
    /// Longest interval tried
    #[arg(long, default_value_t = 1000)]
    max_n: usize,
    /// Search nodes before giving up
    #[arg(long, default_value_t = 1_000_000_000)]
    budget: u64,
    /// Also print an extremal coloring of 1..w-1
    #[arg(long)]
    witness: bool,
}

#[derive(Debug, Args)]
struct KappaArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    r: u32,
    #[arg(long, default_value_t = 12)]
    max_k: usize,
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    /// Also print a good coloring by residue
    #[arg(long)]
    witness: bool,
}

#[derive(Debug, Args)]
struct ParamsArgs {
    #[arg(long)]
    r: u32,
    /// Also show the bound row and the pipeline plan for this k
    #[arg(long)]
    k: Option<u64>,
    #[arg(long, default_value = "1/20", value_parser = parse_ratio)]
    epsilon: Ratio<u64>,
    #[arg(long, value_parser = parse_window)]
    window: Option<Window>,
}

#[derive(Debug, Args)]
struct EtsetArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    t: u32,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 4)]
    r: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    naive: bool,
    #[command(flatten)]
    threads: Threads,
}

/// `a/b` or a plain decimal such as `0.05`.
pub fn parse_ratio(s: &str) -> Result<Ratio<u64>, String> {
    let bad = || format!("`{s}` is not a fraction or decimal");
    if let Some((num, den)) = s.split_once('/') {
        let num: u64 = num.trim().parse().map_err(|_| bad())?;
        let den: u64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err("zero denominator".into());
        }
        return Ok(Ratio::new(num, den));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 18 || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let num: u64 = digits.parse().map_err(|_| bad())?;
    Ok(Ratio::new(num, 10u64.pow(frac.len() as u32)))
}

/// `lo:hi` for the window `(lo, hi]`.
pub fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("`{s}` is not of the form lo:hi"))?;
    let lo: u64 = lo.parse().map_err(|_| format!("bad lower end `{lo}`"))?;
    let hi: u64 = hi.parse().map_err(|_| format!("bad upper end `{hi}`"))?;
    if lo >= hi {
        return Err("window needs lo < hi".into());
    }
    Ok(Window { lo, hi })
}

/// Parses `args` and runs one subcommand, returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayHelpOnMissingArgumentOrSubcommand, DisplayVersion};
            return match e.kind() {
                DisplayHelp | DisplayVersion => {
                    let _ = write!(out, "{e}");
                    exit::OK
                }
                DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(err, "{e}");
                    exit::USAGE
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    exit::USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Construct(a) => construct(a, out, err),
        Command::Verify(a) => verify(a, out),
        Command::Vdw(a) => cmd_vdw(a, out),
        Command::Kappa(a) => cmd_kappa(a, out),
        Command::Params(a) => params(a, out),
        Command::Etset(a) => etset(a, out),
        Command::Bench(a) => bench(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn failure(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        failure(exit::IO, e.to_string())
    }
}

fn pool_error(e: rayon::ThreadPoolBuildError) -> Failure {
    failure(exit::USAGE, format!("cannot start worker threads: {e}"))
}

/// Exit code and message for a core error met while constructing.
fn construct_failure(e: Error) -> Failure {
    match e {
        Error::Infeasible { reports } => {
            let mut msg = String::from("infeasible in strict mode");
            if reports.is_empty() {
                msg.push_str(": not enough primes in ((1 - eps) k, k]");
            }
            for (i, r) in reports.iter().enumerate() {
                msg.push_str(&format!("\nstage {}:\n{}", i + 1, r.to_kv_block().trim_end()));
            }
            failure(exit::INFEASIBLE, msg)
        }
        Error::NotEnoughPrimes { ref found, needed } => failure(
            exit::INFEASIBLE,
            format!("need {needed} primes in the window, found {found:?}; widen it with --window lo:hi"),
        ),
        Error::TooLarge { what } => failure(exit::INFEASIBLE, format!("{what} is too large to build")),
        Error::RetriesExhausted { attempts, witness } => failure(
            exit::EXHAUSTED,
            format!("blow-up gave up after {attempts} attempts; last witness: {witness}"),
        ),
        Error::ResampleCapExhausted { resamples, witness } => failure(
            exit::EXHAUSTED,
            format!("resampling gave up after {resamples} rounds; last witness: {witness}"),
        ),
        Error::VerificationFailed { witness } => {
            failure(exit::VERIFY_FAILED, format!("final coloring failed verification: {witness}"))
        }
        other => failure(exit::USAGE, other.to_string()),
    }
}

fn params_line(cfg: &PipelineConfig, built: &PipelineOutput) -> String {
    let p = &built.plan;
    let primes: Vec<String> = p.primes.iter().map(u64::to_string).collect();
    let mut line = format!(
        "mode={} eps={} window={} a={} b={} primes={} t0={} t_prime={} resamples={}",
        match cfg.mode {
            Mode::Strict => "strict",
            Mode::Forced => "forced",
        },
        p.epsilon,
        cfg.window.map_or("-".to_string(), |w| format!("{}:{}", w.lo, w.hi)),
        p.a,
        p.b,
        primes.join(","),
        p.t0,
        p.t_prime,
        built.resamples,
    );
    for (i, r) in p.reports.iter().enumerate() {
        line.push_str(&format!(" | stage{} {}", i + 1, r.to_kv_line()));
    }
    line
}

fn construct(a: ConstructArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = PipelineConfig {
        k: a.k,
        r: a.r,
        epsilon: a.epsilon,
        seed: a.seed,
        mode: match a.mode {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Forced => Mode::Forced,
        },
        window: a.window,
        resample_cap: a.resample_cap,
        retry_cap: a.retries,
    };
    let built = build_pipeline(&cfg).map_err(construct_failure)?;
    let k = usize::try_from(a.k).map_err(|_| failure(exit::USAGE, "k too large"))?;
    let recheck = with_threads(a.threads.threads, || find_mono_ap_par(&built.coloring, k)).map_err(pool_error)?;
    if let Some(w) = recheck {
        return Err(failure(exit::VERIFY_FAILED, format!("final coloring failed verification: {w}")));
    }
    let cert = Certificate::from_coloring(&built.coloring, a.k, Some(a.seed), params_line(&cfg, &built), built.attempts);
    let summary = format!(
        "VERIFIED N={} k={} r={} seed={} attempts={}",
        cert.n, cert.k, cert.r, a.seed, cert.attempts
    );
    match &a.out {
        Some(path) => {
            fs::write(path, cert.to_text())?;
            writeln!(out, "{summary} -> {}", path.display())?;
        }
        None => {
            out.write_all(cert.to_text().as_bytes())?;
            writeln!(err, "{summary}")?;
        }
    }
    Ok(exit::OK)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = fs::read(&a.path).map_err(|e| failure(exit::NO_INPUT, format!("{}: {e}", a.path.display())))?;
    let text = String::from_utf8(text).map_err(|_| failure(exit::MALFORMED, "certificate is not UTF-8"))?;
    let cert = Certificate::parse(&text).map_err(|e| failure(exit::MALFORMED, format!("{}: {e}", a.path.display())))?;
    let coloring = cert.coloring().map_err(|e| failure(exit::MALFORMED, e.to_string()))?;
    let k = usize::try_from(cert.k).map_err(|_| failure(exit::MALFORMED, "k too large"))?;
    let witness = if a.naive {
        find_mono_ap(&coloring, k, VerifyMode::Naive)
    } else {
        with_threads(a.threads.threads, || find_mono_ap_par(&coloring, k)).map_err(pool_error)?
    };
    match witness {
        None => {
            writeln!(out, "VERIFIED N={} k={} r={}", cert.n, cert.k, cert.r)?;
            if cert.verdict == Verdict::Unverified {
                writeln!(out, "note: file was marked UNVERIFIED")?;
            }
            Ok(exit::OK)
        }
        Some(w) => {
            writeln!(out, "FAILED N={} k={} r={}", cert.n, cert.k, cert.r)?;
            writeln!(out, "witness: {w}")?;
            Ok(exit::VERIFY_FAILED)
        }
    }
}

fn join(colors: &[u32]) -> String {
    colors.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_vdw(a: VdwArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if a.k < 2 || a.r == 0 {
        return Err(failure(exit::USAGE, "need k >= 2 and r >= 1"));
    }
    let res = vdw(a.k, a.r, a.max_n, a.budget);
    let code = match res.value {
        SearchValue::Exact(w) => {
            writeln!(out, "w({};{}) = {w}", a.k, a.r)?;
            exit::OK
        }
        SearchValue::AtLeast(w) => {
            writeln!(out, "w({};{}) >= {w} (indeterminate after {} nodes)", a.k, a.r, res.nodes)?;
            exit::INDETERMINATE
        }
        _ => {
            writeln!(out, "w({};{}) indeterminate", a.k, a.r)?;
            exit::INDETERMINATE
        }
    };
    if a.witness {
        if let Some(w) = &res.witness {
            writeln!(out, "witness: {}", join(w))?;
        }
    }
    Ok(code)
}

fn cmd_kappa(a: KappaArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if a.r == 0 {
        return Err(failure(exit::USAGE, "need r >= 1"));
    }
    let res = kappa_cyclic(a.n, a.r, a.max_k, a.budget).map_err(|e| failure(exit::USAGE, e.to_string()))?;
    let name = format!("kappa(Z/{};{})", a.n, a.r);
    let code = match res.value {
        SearchValue::Exact(k) => {
            writeln!(out, "{name} = {k}")?;
            exit::OK
        }
        SearchValue::AtLeast(k) => {
            writeln!(out, "{name} >= {k} (no k up to {} works)", a.max_k)?;
            exit::INDETERMINATE
        }
        SearchValue::AtMost(k) => {
            writeln!(out, "{name} <= {k} (smaller k left undecided)")?;
            exit::INDETERMINATE
        }
        SearchValue::Indeterminate => {
            writeln!(out, "{name} indeterminate")?;
            exit::INDETERMINATE
        }
    };
    if a.witness {
        if let Some(w) = &res.witness {
            writeln!(out, "witness: {}", join(w))?;
        }
    }
    Ok(code)
}

fn params(a: ParamsArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let ks = a.k.map_or(3..=3, |k| k..=k);
    let table = bound_table(a.r, ks).map_err(|e| failure(exit::USAGE, e.to_string()))?;
    writeln!(out, "{}", table.summary())?;
    let Some(k) = a.k else { return Ok(exit::OK) };
    for row in &table.rows {
        writeln!(out, "k={} erdos_lovasz={} blowup={}", row.k, row.erdos_lovasz, row.blowup)?;
    }
    let mut cfg = PipelineConfig::new(k, a.r);
    cfg.epsilon = a.epsilon;
    cfg.window = a.window;
    let p = plan(&cfg).map_err(construct_failure)?;
    let primes: Vec<String> = p.primes.iter().map(u64::to_string).collect();
    writeln!(out, "primes={} t0={} t_prime={} N={}", primes.join(","), p.t0, p.t_prime, p.n)?;
    for (i, v) in p.factor_gcol.iter().enumerate() {
        writeln!(out, "H{i}: order={} gcol={} margin={}", p.factors[i], v.ok, v.margin)?;
    }
    for (i, r) in p.reports.iter().enumerate() {
        writeln!(out, "stage {}:", i + 1)?;
        write!(out, "{}", r.to_kv_block())?;
    }
    writeln!(out, "feasible: {}", p.feasible())?;
    Ok(exit::OK)
}

fn etset(a: EtsetArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let set = erdos_turan_set(a.p, a.t).map_err(|e| failure(exit::USAGE, e.to_string()))?;
    let items: Vec<String> = set.iter().map(u64::to_string).collect();
    writeln!(out, "{}", items.join(" "))?;
    Ok(exit::OK)
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if a.r == 0 {
        return Err(failure(exit::USAGE, "need r >= 1"));
    }
    let group = Group::cyclic(a.n).map_err(|e| failure(exit::USAGE, e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let coloring = Coloring::from_fn(group, a.r, |_| rng.gen_range(1..=a.r)).map_err(|e| failure(exit::USAGE, e.to_string()))?;
    let start = Instant::now();
    let witness = if a.naive {
        find_mono_ap(&coloring, a.k, VerifyMode::Naive)
    } else {
        with_threads(a.threads.threads, || find_mono_ap_par(&coloring, a.k)).map_err(pool_error)?
    };
    let wall = start.elapsed();
    let rate = a.n as f64 / wall.as_secs_f64().max(1e-9);
    writeln!(
        out,
        "n={} k={} r={} mode={} result={} wall_ms={:.3} elements_per_sec={:.0}",
        a.n,
        a.k,
        a.r,
        if a.naive { "naive" } else { "fast" },
        witness.map_or("free".to_string(), |w| format!("witness d={}", w.diff)),
        wall.as_secs_f64() * 1e3,
        rate
    )?;
    Ok(exit::OK)
}
