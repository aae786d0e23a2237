use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use origami_kz::cli::{self, Cache, CertifyOptions, CommandError, CommandResult};
use origami_kz::lyapunov::LyapunovConfig;

const EXIT_CODES: &str = "\
Exit codes:
  0  success (all requested certificates established)
  1  other failure (I/O, internal invariant)
  2  input could not be parsed
  3  permutations do not act transitively
  4  affine group not identified with SL(2,Z) (Veech group is a proper subgroup)
  5  a certificate is false, undecided, or no witness was found within budget
  6  census request above the 9-square cap";

#[derive(Parser)]
#[command(name = "origami", version, about = "Invariants, monodromy and certificates for square-tiled surfaces", after_help = EXIT_CODES)]
struct Cli {
    /// Cache directory (default: $ORIGAMI_CACHE_DIR or ./.origami-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Always recompute and do not write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArg {
    /// JSON file with fields name, h, v (cycle notation) and optional n.
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Stratum, genus, Veech group, cylinders and homological dimensions.
    Analyze {
        #[command(flatten)]
        input: InputArg,
        /// Direction p,q for cylinder data (repeatable).
        #[arg(long = "direction", value_parser = parse_direction)]
        directions: Vec<(i64, i64)>,
        #[arg(long, default_value_t = 10_000)]
        orbit_limit: usize,
    },
    /// Action of T and S on homology and on its zero-holonomy part.
    Monodromy {
        #[command(flatten)]
        input: InputArg,
    },
    /// Zariski density, arithmeticity and mod-2 congruence certificates.
    Certify {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        density: bool,
        #[arg(long)]
        arithmeticity: bool,
        #[arg(long = "congruence-mod2")]
        congruence_mod2: bool,
        #[arg(long)]
        pinching_word: Option<String>,
        #[arg(long)]
        unipotent_word: Option<String>,
        /// Word in the transvections A, B, C (lowercase for inverses).
        #[arg(long)]
        arithmeticity_word: Option<String>,
        #[arg(long, default_value_t = 12)]
        search_depth: usize,
        #[arg(long, default_value_t = 100)]
        galois_primes: usize,
    },
    /// Monte Carlo Lyapunov exponents of the zero-holonomy cocycle.
    Lyapunov {
        #[command(flatten)]
        input: InputArg,
        /// Total continued-fraction digit-steps over all trials.
        #[arg(long, default_value_t = 1_000_000)]
        iters: u64,
        #[arg(long, default_value_t = 32)]
        trials: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        digit_cap: u32,
        #[arg(long, default_value_t = 1)]
        reorthonormalize_every: usize,
    },
    /// Reduced origamis with Veech group SL(2,Z), up to a number of squares.
    Census {
        #[arg(long)]
        max_squares: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_direction(s: &str) -> Result<(i64, i64), String> {
    let (p, q) = s.split_once(',').ok_or("expected p,q")?;
    Ok((p.trim().parse().map_err(|e| format!("{e}"))?, q.trim().parse().map_err(|e| format!("{e}"))?))
}

fn read_input(path: &PathBuf) -> Result<(String, origami_kz::Origami), CommandError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandError { code: cli::EXIT_PARSE, message: format!("{}: {e}", path.display()) })?;
    let (_, o) = cli::load_input(&text)?;
    Ok((cli::digest(text.as_bytes()), o))
}

fn run(args: Cli) -> Result<(cli::Report, Option<PathBuf>), CommandError> {
    let cache = (!args.no_cache).then(|| Cache::resolve(args.cache_dir.as_deref()));
    let cache = cache.as_ref();
    let with_input = |path: &PathBuf, command: &str, params: Value, f: &dyn Fn(&origami_kz::Origami) -> CommandResult| {
        let (hash, o) = read_input(path)?;
        cli::cached(cache, &hash, command, &params, || f(&o))
    };
    match args.command {
        Command::Analyze { input, directions, orbit_limit } => {
            let directions = if directions.is_empty() { cli::DEFAULT_DIRECTIONS.to_vec() } else { directions };
            let params = json!({ "directions": directions, "orbit_limit": orbit_limit });
            with_input(&input.input, "analyze", params, &|o| cli::analyze(o, &directions, orbit_limit)).map(|r| (r, None))
        }
        Command::Monodromy { input } => with_input(&input.input, "monodromy", json!({}), &cli::monodromy).map(|r| (r, None)),
        Command::Certify {
            input,
            density,
            arithmeticity,
            congruence_mod2,
            pinching_word,
            unipotent_word,
            arithmeticity_word,
            search_depth,
            galois_primes,
        } => {
            let all = !(density || arithmeticity || congruence_mod2);
            let opts = CertifyOptions {
                density: all || density,
                arithmeticity: all || arithmeticity,
                congruence_mod2: all || congruence_mod2,
                pinching_word,
                unipotent_word,
                arithmeticity_word,
                search_depth,
                galois_primes,
            };
            let params = serde_json::to_value(&opts).expect("options serialize");
            with_input(&input.input, "certify", params, &|o| cli::certify(o, &opts)).map(|r| (r, None))
        }
        Command::Lyapunov { input, iters, trials, seed, digit_cap, reorthonormalize_every } => {
            let cfg = LyapunovConfig { iterations: iters, trials, seed, digit_cap, reorthonormalize_every };
            let params = serde_json::to_value(&cfg).expect("config serializes");
            with_input(&input.input, "lyapunov", params, &|o| cli::lyapunov(o, &cfg)).map(|r| (r, None))
        }
        Command::Census { max_squares, out } => {
            let params = json!({ "max_squares": max_squares });
            let hash = cli::digest(b"");
            cli::cached(cache, &hash, "census", &params, || cli::run_census(max_squares)).map(|r| (r, out))
        }
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    match run(args) {
        Ok((report, out)) => {
            let text = cli::render(&report);
            if let Some(path) = out {
                if let Err(e) = cli::write_atomic(&path, text.as_bytes()) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(cli::EXIT_FAILURE as u8);
                }
            }
            print!("{text}");
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
