use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use clap::{Parser, ValueEnum};
use modcomp::budget::Deadline;
use modcomp::framework::{prove, AnalysisConfig, Bound, CpProblem, FrameworkError};
use modcomp::render::{render_json_string, render_text};
use modcomp::sat::SolverConfig;
use modcomp::term::LanguageSpec;
use modcomp::trs_io::parse_trs;

/// Time granted beyond the analysis timeout before the watchdog answers.
const GRACE: Duration = Duration::from_secs(4);

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Complexity {
    Derivational,
    Runtime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ProofStyle {
    Text,
    Json,
    None,
}

/// Polynomial upper bounds on the derivational or runtime complexity of
/// (relative) term rewrite systems.
#[derive(Parser, Debug, Clone)]
#[command(name = "modcomp", version)]
struct Args {
    /// A TRS file in the plain-text format, or a directory of `.trs` files.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "derivational")]
    complexity: Complexity,
    /// Analysis time limit per problem, in seconds.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    #[arg(long, value_enum, default_value = "on")]
    tighten: Switch,
    /// Comma-separated matrix dimensions.
    #[arg(long, default_value = "1,2,3", value_delimiter = ',')]
    dims: Vec<usize>,
    /// Bit width of natural matrix coefficients.
    #[arg(long, default_value_t = modcomp::synth::DEFAULT_COEFF_BITS)]
    coeff_bits: usize,
    /// Bit width of natural constant vectors.
    #[arg(long, default_value_t = modcomp::synth::DEFAULT_CONST_BITS)]
    const_bits: usize,
    /// Bit width of finite arctic entries.
    #[arg(long, default_value_t = modcomp::synth::DEFAULT_COEFF_BITS)]
    arctic_bits: usize,
    #[arg(long, value_enum, default_value = "none")]
    proof: ProofStyle,
    /// Seed for the bundled solver's decision heuristic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// External DIMACS solver command used instead of the bundled one.
    #[arg(long)]
    solver: Option<String>,
    /// Runs the portfolio sequentially so reruns are byte-identical.
    #[arg(long)]
    deterministic: bool,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Internal(_) => 2,
        }
    }
}

impl From<FrameworkError> for Failure {
    fn from(e: FrameworkError) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn config(args: &Args) -> Result<AnalysisConfig, Failure> {
    if args.dims.is_empty() || args.dims.iter().any(|&d| d == 0) {
        return Err(Failure::Input("--dims needs positive dimensions".into()));
    }
    if [args.coeff_bits, args.const_bits, args.arctic_bits].iter().any(|&b| b == 0 || b > 16) {
        return Err(Failure::Input("bit widths must lie in 1..=16".into()));
    }
    if !args.timeout.is_finite() || args.timeout <= 0.0 {
        return Err(Failure::Input("--timeout must be positive".into()));
    }
    let mut cfg = AnalysisConfig {
        dims: args.dims.clone(),
        coeff_bits: args.coeff_bits,
        const_bits: args.const_bits,
        arctic_bits: args.arctic_bits,
        deterministic: args.deterministic,
        ..Default::default()
    };
    cfg.solver = SolverConfig { seed: args.seed, external: args.solver.clone(), ..cfg.solver };
    Ok(cfg)
}

fn language(args: &Args) -> LanguageSpec {
    match args.complexity {
        Complexity::Derivational => LanguageSpec::AllTerms,
        Complexity::Runtime => LanguageSpec::ConstructorBased,
    }
}

/// Verdict line plus the requested proof rendering.
fn analyze_file(path: &Path, args: &Args, cfg: &AnalysisConfig) -> Result<String, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let rel = parse_trs(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let problem = CpProblem::new(rel, language(args));
    let deadline = Deadline::after(Duration::from_secs_f64(args.timeout));
    let proof = prove(&problem, cfg, args.tighten == Switch::On, &deadline)?;
    proof.recheck().map_err(|e| Failure::Internal(format!("proof fails its own check: {e}")))?;
    Ok(match args.proof {
        ProofStyle::None => format!("{}\n", proof.total_bound().verdict()),
        ProofStyle::Text => render_text(&proof),
        ProofStyle::Json => format!("{}\n{}\n", proof.total_bound().verdict(), render_json_string(&proof)),
    })
}

/// Prints MAYBE and exits if the analysis overruns its time limit; `done`
/// is set once real output has started.
fn watchdog(limit: Duration, done: Arc<Mutex<bool>>) {
    thread::spawn(move || {
        thread::sleep(limit);
        let finished = done.lock().unwrap_or_else(|p| p.into_inner());
        if !*finished {
            println!("{}", Bound::Unknown.verdict());
            let _ = std::io::stdout().flush();
            std::process::exit(0);
        }
    });
}

fn trs_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "trs")).collect();
    files.sort();
    Ok(files)
}

fn run(args: &Args) -> Result<(), Failure> {
    let cfg = config(args)?;
    let limit = Duration::from_secs_f64(args.timeout) + GRACE;
    if !args.input.is_dir() {
        let done = Arc::new(Mutex::new(false));
        watchdog(limit, done.clone());
        let out = analyze_file(&args.input, args, &cfg);
        let mut finished = done.lock().unwrap_or_else(|p| p.into_inner());
        *finished = true;
        print!("{}", out?);
        return Ok(());
    }
    let mut worst: Option<Failure> = None;
    for path in trs_files(&args.input)? {
        let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        let single = Args { input: path.clone(), proof: ProofStyle::None, ..args.clone() };
        match analyze_file(&path, &single, &cfg) {
            Ok(out) => println!("{name}: {}", out.trim_end()),
            Err(f) => {
                eprintln!("{name}: {}", message(&f));
                println!("{name}: ERROR");
                if worst.as_ref().map_or(true, |w| f.code() > w.code()) {
                    worst = Some(f);
                }
            }
        }
    }
    worst.map_or(Ok(()), Err)
}

fn message(f: &Failure) -> &str {
    match f {
        Failure::Input(m) | Failure::Internal(m) => m,
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", message(&f));
            ExitCode::from(f.code())
        }
    }
}
