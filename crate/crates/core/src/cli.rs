//! Commands behind the `origami` binary: JSON reports, exit codes and the
//! on-disk result cache.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::census::{census, MAX_CENSUS_SQUARES};
use crate::certificates::{
    arithmeticity_for_origami, congruence_image_mod2, density_for_monodromy, unimodular_model,
    DEFAULT_GALOIS_PRIMES,
};
use crate::error::Error;
use crate::fixtures;
use crate::linalg::{IntMatrix, IntPolynomial};
use crate::lyapunov::{estimate_exponents, LyapunovConfig};
use crate::monodromy::{induced_matrices, MonodromyPair};
use crate::origami::{Origami, OrigamiInput};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_ENV: &str = "ORIGAMI_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".origami-cache";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_TRANSITIVE: i32 = 3;
pub const EXIT_NOT_VEECH_FULL: i32 = 4;
pub const EXIT_UNDECIDED: i32 = 5;
pub const EXIT_CENSUS_LIMIT: i32 = 6;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::MalformedCycles(_) | Error::DegreeMismatch(..) | Error::Parse(_) | Error::MalformedWord(_) => {
            EXIT_PARSE
        }
        Error::RequiresTransitive => EXIT_NOT_TRANSITIVE,
        Error::NotInVeechGroup(_) => EXIT_NOT_VEECH_FULL,
        Error::Undecided { .. } | Error::NoWitnessFound { .. } => EXIT_UNDECIDED,
        _ => EXIT_FAILURE,
    }
}

#[derive(Debug)]
pub struct CommandError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError { code: exit_code(&e), message: e.to_string() }
    }
}

pub type CommandResult = std::result::Result<Report, CommandError>;

/// A command's JSON result; `complete` is false when some certificate is
/// not established.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct Report {
    pub result: Value,
    pub complete: bool,
}

impl Report {
    fn done(result: Value) -> Self {
        Report { result, complete: true }
    }

    pub fn exit_code(&self) -> i32 {
        if self.complete {
            EXIT_OK
        } else {
            EXIT_UNDECIDED
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

pub fn load_input(text: &str) -> std::result::Result<(OrigamiInput, Origami), CommandError> {
    let input = OrigamiInput::from_json(text)?;
    let o = input.to_origami()?;
    Ok((input, o))
}

pub const DEFAULT_DIRECTIONS: [(i64, i64); 3] = [(1, 0), (0, 1), (1, 2)];

pub fn analyze(o: &Origami, directions: &[(i64, i64)], orbit_limit: usize) -> CommandResult {
    let stratum = o.stratum()?;
    let orbit = o.sl2z_orbit(orbit_limit);
    let horizontal = o.horizontal_cylinders();
    let mut dims = Vec::new();
    for &(p, q) in directions {
        let dec = o.cylinders_in_direction(p, q)?;
        dims.push(json!({
            "direction": [p, q],
            "circumferences": dec.circumferences(),
            "homological_dimension": o.homological_dimension(p, q)?,
        }));
    }
    Ok(Report::done(json!({
        "name": o.name,
        "squares": o.n(),
        "stratum": stratum.zero_orders,
        "stratum_name": stratum.to_string(),
        "genus": stratum.genus,
        "commutator_cycle_type": o.commutator().cycle_type(),
        "veech_full": o.is_veech_full(),
        "orbit_size": orbit.size(),
        "orbit_truncated": orbit.truncated,
        "reduced": o.is_reduced(),
        "horizontal_cylinders": {
            "circumferences": horizontal.circumferences(),
            "heights": horizontal.cylinders.iter().map(|c| c.height).collect::<Vec<_>>(),
        },
        "directions": dims,
    })))
}

fn charpoly_value(m: &IntMatrix) -> crate::error::Result<Value> {
    if m.rows() == 0 {
        return Ok(Value::Null);
    }
    Ok(to_value(&IntPolynomial::char_poly(m)?))
}

fn is_flagship(o: &Origami) -> bool {
    fixtures::flagship().to_origami().is_ok_and(|f| f.is_same_origami(o))
}

pub fn monodromy(o: &Origami) -> CommandResult {
    if !o.is_veech_full() {
        return Err(CommandError {
            code: EXIT_NOT_VEECH_FULL,
            message: "affine group not identified with SL(2,Z): the Veech group is a proper subgroup".into(),
        });
    }
    let mp = induced_matrices(o)?;
    let dim = mp.split.dim();
    let residual = |m: &IntMatrix, f: &IntMatrix| &m.congruent(f) - f;
    let full_residual_zero = residual(&mp.full_t, &mp.basis.gram).is_zero()
        && residual(&mp.full_s, &mp.basis.gram).is_zero();
    let restricted_residual_zero = residual(&mp.restricted_t, &mp.split.restricted_gram).is_zero()
        && residual(&mp.restricted_s, &mp.split.restricted_gram).is_zero();
    let rank_t6 = if dim > 0 { Some((&mp.restricted_t.pow(6) - &IntMatrix::identity(dim)).rank()) } else { None };
    let fixture_match = if is_flagship(o) && dim == 6 {
        let g = fixtures::generators();
        Some(
            IntPolynomial::char_poly(&mp.restricted_t)? == IntPolynomial::char_poly(&g.alpha_t)?
                && IntPolynomial::char_poly(&mp.restricted_s)? == IntPolynomial::char_poly(&g.alpha_s)?,
        )
    } else {
        None
    };
    Ok(Report::done(json!({
        "name": o.name,
        "homology_rank": mp.basis.rank(),
        "zero_holonomy_rank": dim,
        "note": if dim == 0 { Some("zero-holonomy part is trivial; restricted matrices are empty") } else { None },
        "intersection_form": mp.basis.gram,
        "restricted_form": mp.split.restricted_gram,
        "full_t": mp.full_t,
        "full_s": mp.full_s,
        "restricted_t": mp.restricted_t,
        "restricted_s": mp.restricted_s,
        "charpoly_full_t": charpoly_value(&mp.full_t)?,
        "charpoly_full_s": charpoly_value(&mp.full_s)?,
        "charpoly_restricted_t": charpoly_value(&mp.restricted_t)?,
        "charpoly_restricted_s": charpoly_value(&mp.restricted_s)?,
        "symplectic_residual_zero": full_residual_zero && restricted_residual_zero,
        "rank_t6_minus_identity": rank_t6,
        "matches_reference_charpolys": fixture_match,
    })))
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyOptions {
    pub density: bool,
    pub arithmeticity: bool,
    pub congruence_mod2: bool,
    pub pinching_word: Option<String>,
    pub unipotent_word: Option<String>,
    pub arithmeticity_word: Option<String>,
    pub search_depth: usize,
    pub galois_primes: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            density: true,
            arithmeticity: true,
            congruence_mod2: true,
            pinching_word: None,
            unipotent_word: None,
            arithmeticity_word: None,
            search_depth: 12,
            galois_primes: DEFAULT_GALOIS_PRIMES,
        }
    }
}

pub const DEFAULT_PINCHING_WORD: &str = "STST^20";
pub const DEFAULT_UNIPOTENT_WORD: &str = "T^6";
pub const DEFAULT_ARITHMETICITY_WORD: &str = "ABabC^3a";

/// Short words over `T`, `S` in order of length, for surfaces without a
/// known pinching element.
fn candidate_words(max_len: usize) -> Vec<String> {
    let letters = ['T', 'S', 't', 's'];
    let mut out = Vec::new();
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in letters {
                // skip words with a letter next to its own inverse
                let cancels = w.chars().last().is_some_and(|c| c != l && c.eq_ignore_ascii_case(&l));
                if !cancels {
                    next.push(format!("{w}{l}"));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn certify_density(mp: &MonodromyPair, opts: &CertifyOptions) -> crate::error::Result<Value> {
    let unipotent = opts.unipotent_word.clone().unwrap_or_else(|| DEFAULT_UNIPOTENT_WORD.into());
    let first = opts.pinching_word.clone().unwrap_or_else(|| DEFAULT_PINCHING_WORD.into());
    let mut cert = density_for_monodromy(mp, &first, &unipotent, opts.galois_primes)?;
    let mut tried = 1;
    if !cert.pinching_report.verdict && opts.pinching_word.is_none() {
        for w in candidate_words(6) {
            tried += 1;
            let c = density_for_monodromy(mp, &w, &unipotent, opts.galois_primes)?;
            if c.pinching_report.verdict {
                cert = c;
                break;
            }
        }
    }
    let mut v = to_value(&cert);
    v["pinching_words_tried"] = json!(tried);
    Ok(v)
}

pub fn certify(o: &Origami, opts: &CertifyOptions) -> CommandResult {
    if !o.is_veech_full() {
        return Err(CommandError {
            code: EXIT_NOT_VEECH_FULL,
            message: "affine group not identified with SL(2,Z): the Veech group is a proper subgroup".into(),
        });
    }
    let mp = induced_matrices(o)?;
    let mut out = serde_json::Map::new();
    out.insert("name".into(), json!(o.name));
    let mut complete = true;
    if opts.density {
        let v = match certify_density(&mp, opts) {
            Ok(v) => v,
            Err(e) => json!({ "verdict": false, "error": e.to_string() }),
        };
        complete &= v["verdict"] == json!(true);
        out.insert("density".into(), v);
    }
    if opts.arithmeticity {
        let word = opts.arithmeticity_word.as_deref().unwrap_or(DEFAULT_ARITHMETICITY_WORD);
        let v = match arithmeticity_for_origami(o, &mp, DEFAULT_DIRECTIONS, Some(word), opts.search_depth) {
            Ok(c) => to_value(&c),
            Err(e) => json!({ "verdict": false, "error": e.to_string() }),
        };
        complete &= v["verdict"] == json!(true);
        out.insert("arithmeticity".into(), v);
    }
    if opts.congruence_mod2 {
        let (gens, form) = unimodular_model(&[mp.restricted_t.clone(), mp.restricted_s.clone()], &mp.split.restricted_gram)?;
        let report = congruence_image_mod2(&gens, &form)?;
        let mut v = to_value(&report);
        v["lagrange_identity"] = json!(&report.index * report.image_order == report.ambient_order);
        out.insert("congruence_mod2".into(), v);
    }
    Ok(Report { result: Value::Object(out), complete })
}

pub fn lyapunov(o: &Origami, cfg: &LyapunovConfig) -> CommandResult {
    if !o.is_veech_full() {
        return Err(CommandError {
            code: EXIT_NOT_VEECH_FULL,
            message: "affine group not identified with SL(2,Z): the Veech group is a proper subgroup".into(),
        });
    }
    let mp = induced_matrices(o)?;
    let est = estimate_exponents(&mp, cfg)?;
    let mut v = to_value(&est);
    v["name"] = json!(o.name);
    Ok(Report::done(v))
}

pub fn run_census(max_squares: usize) -> CommandResult {
    if max_squares > MAX_CENSUS_SQUARES {
        return Err(CommandError {
            code: EXIT_CENSUS_LIMIT,
            message: format!("census is capped at {MAX_CENSUS_SQUARES} squares; refusing {max_squares}"),
        });
    }
    let entries = census(max_squares)?;
    Ok(Report::done(json!({
        "max_squares": max_squares,
        "count": entries.len(),
        "entries": entries,
    })))
}

/// Stored result of one command invocation.
#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct RunRecord {
    pub input_hash: String,
    pub command: String,
    pub parameters: Value,
    pub report: Report,
    pub tool_version: String,
    pub timestamp: u64,
}

pub struct Cache {
    dir: PathBuf,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// Flag, then environment variable, then the default directory.
    pub fn resolve(flag: Option<&Path>) -> Self {
        match flag {
            Some(p) => Cache::new(p),
            None => Cache::new(std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR), PathBuf::from)),
        }
    }

    fn key(input_hash: &str, command: &str, parameters: &Value) -> String {
        let material = json!([input_hash, command, parameters, TOOL_VERSION]);
        digest(material.to_string().as_bytes())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, input_hash: &str, command: &str, parameters: &Value) -> Option<RunRecord> {
        let text = fs::read_to_string(self.path(&Self::key(input_hash, command, parameters))).ok()?;
        let rec: RunRecord = serde_json::from_str(&text).ok()?;
        (rec.input_hash == input_hash
            && rec.command == command
            && rec.parameters == *parameters
            && rec.tool_version == TOOL_VERSION)
            .then_some(rec)
    }

    pub fn put(&self, input_hash: &str, command: &str, parameters: &Value, report: &Report) -> std::io::Result<()> {
        let rec = RunRecord {
            input_hash: input_hash.to_string(),
            command: command.to_string(),
            parameters: parameters.clone(),
            report: report.clone(),
            tool_version: TOOL_VERSION.to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        };
        let path = self.path(&Self::key(input_hash, command, parameters));
        write_atomic(&path, serde_json::to_string_pretty(&rec)?.as_bytes())
    }
}

/// Write to a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Runs `f` unless an identical earlier run is cached.
pub fn cached(
    cache: Option<&Cache>,
    input_hash: &str,
    command: &str,
    parameters: &Value,
    f: impl FnOnce() -> CommandResult,
) -> CommandResult {
    if let Some(c) = cache {
        if let Some(rec) = c.get(input_hash, command, parameters) {
            return Ok(rec.report);
        }
    }
    let report = f()?;
    if let Some(c) = cache {
        c.put(input_hash, command, parameters, &report)
            .map_err(|e| CommandError { code: EXIT_FAILURE, message: format!("cache write failed: {e}") })?;
    }
    Ok(report)
}

/// Pretty JSON with a trailing newline, as printed by the binary.
pub fn render(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(&report.result).expect("report serializes");
    s.push('\n');
    s
}
