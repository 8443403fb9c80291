//! The `cq` command line.
//!
//! Exit codes: 0 success, 2 parse error, 3 search cap reached or
//! indeterminate, 4 failed structural check, 5 invalid input.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::canonical::canonical_key;
use crate::error::{MutationError, ParseError, RelationError, TiltError};
use crate::format::{
    canonical_text, parse_presentation, presentation_to_json, presentation_to_text, quiver_to_dot,
    quiver_to_json, serialize_quiver, Format,
};
use crate::mutation::{
    dynkin_type_of, is_double_path_avoiding, mutate_sequence, mutation_class, DEFAULT_MAX_ENTRY,
    DEFAULT_MAX_MEMBERS,
};
use crate::quiver::Quiver;
use crate::relations::{synthesize_relations, AlgebraPresentation, DEFAULT_NILPOTENCY_CAP};
use crate::tilted::{
    check_structure, cluster_tilt_with_cap, ArrowClass, ClusterTiltOutput, Report,
};
use crate::type_a::{enumerate_triangulations, flip, quiver_of};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_STRUCTURE: i32 = 4;
pub const EXIT_INVALID: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
            OutputFormat::Dot => Format::Dot,
        }
    }
}

/// Search limits and output format shared by all subcommands.
#[derive(Debug, Clone, PartialEq, Eq, clap::Args)]
pub struct Config {
    /// Stop mutation-class searches after this many members.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_MEMBERS, value_parser = positive)]
    pub max_members: usize,
    /// Stop mutation-class searches at exchange entries above this bound.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ENTRY as usize, value_parser = positive)]
    pub max_entry: usize,
    /// Largest path length tried when bounding the nilpotency index.
    #[arg(long, global = true, default_value_t = DEFAULT_NILPOTENCY_CAP, value_parser = positive)]
    pub nilpotency_cap: usize,
    #[arg(long = "format", global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output_format: OutputFormat,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cq",
    version,
    about = "Quiver mutation and cluster-tilted algebras of Dynkin type"
)]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mutate a quiver at one or more vertices, in order.
    Mutate {
        file: PathBuf,
        /// Vertex name; repeat for a sequence of mutations.
        #[arg(long = "at", required = true)]
        at: Vec<String>,
    },
    /// Enumerate the mutation class up to isomorphism.
    Class {
        file: PathBuf,
        /// Print only the number of members.
        #[arg(long)]
        count_only: bool,
    },
    /// Print the Dynkin type of the mutation class, or `none`.
    Type { file: PathBuf },
    /// Decide whether the quiver is double-path-avoiding.
    Dpa {
        file: PathBuf,
        /// Isomorphism classes to explore before giving up (default: --max-members).
        #[arg(long, value_parser = positive)]
        cap: Option<usize>,
    },
    /// Synthesize the relations of the cluster-tilted algebra with this quiver.
    Relations { file: PathBuf },
    /// Build the cluster-tilted algebra of a tilted presentation.
    FromTilted {
        file: PathBuf,
        /// Also write the quiver as Graphviz, f-arrows dashed.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Run the structural checks; exit 4 if any fails.
        #[arg(long)]
        check: bool,
    },
    /// Type-A triangulation model of the M-gon.
    OracleA {
        #[arg(long)]
        ngon: usize,
        /// Compare quivers of triangulations with the mutation class of linear A_{M-3}.
        #[arg(long, conflicts_with = "check_flips")]
        census: bool,
        /// Check that flips match mutations for every triangulation and diagonal.
        #[arg(long)]
        check_flips: bool,
    },
    /// Run every `<name>.tilted` case in a directory, comparing with `<name>.expected` when present.
    Corpus { dir: PathBuf },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::new(EXIT_PARSE, format!("parse error at {e}"))
    }
}

impl From<MutationError> for Failure {
    fn from(e: MutationError) -> Self {
        let code = match e {
            MutationError::Indeterminate { .. } => EXIT_CAP,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<RelationError> for Failure {
    fn from(e: RelationError) -> Self {
        let code = match e {
            RelationError::NilpotencyCapExceeded { .. } => EXIT_CAP,
            RelationError::TooManyShortestPaths { .. } => EXIT_STRUCTURE,
            RelationError::Mutation(MutationError::Indeterminate { .. }) => EXIT_CAP,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<TiltError> for Failure {
    fn from(e: TiltError) -> Self {
        let code = match &e {
            TiltError::InconsistentRelations(_) => EXIT_STRUCTURE,
            TiltError::Relation(r) => return Failure::from(r.clone()),
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Runs `cq` with the given arguments (including the program name) and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}: {}", error_prefix(), f.message);
            f.code
        }
    }
}

fn error_prefix() -> &'static str {
    match std::env::var("CQ_COLOR").as_deref() {
        Ok("1") | Ok("always") => "\x1b[31merror\x1b[0m",
        _ => "error",
    }
}

fn read(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn load(path: &FsPath) -> Result<AlgebraPresentation, Failure> {
    parse_presentation(&read(path)?)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}:{e}", path.display())))
}

fn emit(out: &mut dyn Write, s: &str) -> Result<(), Failure> {
    out.write_all(s.as_bytes())
        .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))
}

fn emit_json(out: &mut dyn Write, v: &impl Serialize) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(v).expect("serializable");
    emit(out, &(s + "\n"))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cfg = &cli.config;
    match &cli.command {
        Command::Mutate { file, at } => cmd_mutate(cfg, file, at, out),
        Command::Class { file, count_only } => cmd_class(cfg, file, *count_only, out, err),
        Command::Type { file } => cmd_type(cfg, file, out),
        Command::Dpa { file, cap } => cmd_dpa(cfg, file, cap.unwrap_or(cfg.max_members), out),
        Command::Relations { file } => cmd_relations(cfg, file, out),
        Command::FromTilted { file, dot, check } => {
            cmd_from_tilted(cfg, file, dot.as_deref(), *check, out, err)
        }
        Command::OracleA {
            ngon,
            census,
            check_flips,
        } => cmd_oracle(cfg, *ngon, *census, *check_flips, out),
        Command::Corpus { dir } => cmd_corpus(cfg, dir, out),
    }
}

fn cmd_mutate(cfg: &Config, file: &FsPath, at: &[String], out: &mut dyn Write) -> Outcome {
    let q = load(file)?.quiver;
    let seq = at
        .iter()
        .map(|name| {
            q.vertex_by_name(name)
                .ok_or_else(|| Failure::new(EXIT_INVALID, format!("unknown vertex `{name}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let m = mutate_sequence(&q, &seq)?;
    emit(out, &serialize_quiver(&m, cfg.output_format.into()))?;
    Ok(EXIT_OK)
}

fn cmd_class(
    cfg: &Config,
    file: &FsPath,
    count_only: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let q = load(file)?.quiver;
    let class = mutation_class(&q, cfg.max_members, cfg.max_entry as i64)?;
    let witness = |key: &str| -> Vec<String> {
        class.witness[key]
            .iter()
            .map(|&v| q.vertex_name(v))
            .collect()
    };
    if count_only {
        emit(out, &format!("{}\n", class.len()))?;
    } else if cfg.output_format == OutputFormat::Json {
        let members: Vec<_> = class
            .members
            .iter()
            .map(|(key, m)| json!({ "key": key, "witness": witness(key), "quiver": quiver_to_json(m) }))
            .collect();
        emit_json(
            out,
            &json!({ "count": class.len(), "truncated": class.truncated, "members": members }),
        )?;
    } else {
        let mut s = format!("members {}\n", class.len());
        for (key, _) in &class.members {
            s.push_str(&format!("{key}\tvia [{}]\n", witness(key).join(" ")));
        }
        emit(out, &s)?;
    }
    if class.truncated {
        let _ = writeln!(
            err,
            "{}: class search truncated by --max-members or --max-entry",
            error_prefix()
        );
        return Ok(EXIT_CAP);
    }
    Ok(EXIT_OK)
}

fn cmd_type(cfg: &Config, file: &FsPath, out: &mut dyn Write) -> Outcome {
    let q = load(file)?.quiver;
    let t = dynkin_type_of(&q).map(|t| t.to_string());
    match cfg.output_format {
        OutputFormat::Json => emit_json(out, &json!({ "type": t }))?,
        _ => emit(out, &format!("{}\n", t.as_deref().unwrap_or("none")))?,
    }
    Ok(EXIT_OK)
}

fn cmd_dpa(cfg: &Config, file: &FsPath, cap: usize, out: &mut dyn Write) -> Outcome {
    let q = load(file)?.quiver;
    let verdict = is_double_path_avoiding(&q, cap)?;
    match cfg.output_format {
        OutputFormat::Json => emit_json(out, &json!({ "double_path_avoiding": verdict }))?,
        _ => emit(out, &format!("{verdict}\n"))?,
    }
    Ok(EXIT_OK)
}

fn emit_presentation(
    cfg: &Config,
    p: &AlgebraPresentation,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    match cfg.output_format {
        OutputFormat::Text => emit(out, &presentation_to_text(p)),
        OutputFormat::Json => emit_json(out, &presentation_to_json(p)),
        OutputFormat::Dot => emit(out, &quiver_to_dot(&p.quiver, &Default::default())),
    }
}

fn cmd_relations(cfg: &Config, file: &FsPath, out: &mut dyn Write) -> Outcome {
    let q = load(file)?.quiver;
    let p = synthesize_relations(&q)?;
    emit_presentation(cfg, &p, out)?;
    Ok(EXIT_OK)
}

fn tilt_text(o: &ClusterTiltOutput) -> String {
    let q = &o.gamma.quiver;
    let mut s = presentation_to_text(&o.gamma);
    s.push_str(&format!("# type {}\n", o.dynkin));
    for a in q.arrows() {
        let class = match o.classes[&a.name] {
            ArrowClass::M => "m",
            ArrowClass::F => "f",
        };
        s.push_str(&format!("# class {} {class}\n", a.name));
    }
    for (f, &k) in &o.provenance {
        s.push_str(&format!(
            "# {f} from {}\n",
            o.tilted.relations[k].display(&o.tilted.quiver)
        ));
    }
    s
}

fn tilt_json(o: &ClusterTiltOutput, structure: Option<&Report>) -> serde_json::Value {
    let provenance: BTreeMap<&str, String> = o
        .provenance
        .iter()
        .map(|(f, &k)| (f.as_str(), o.tilted.relations[k].display(&o.tilted.quiver)))
        .collect();
    let mut v = json!({
        "type": o.dynkin,
        "presentation": presentation_to_json(&o.gamma),
        "classes": o.classes,
        "provenance": provenance,
    });
    if let Some(r) = structure {
        v["structure"] = json!(r);
    }
    v
}

fn cmd_from_tilted(
    cfg: &Config,
    file: &FsPath,
    dot: Option<&FsPath>,
    check: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let p = load(file)?;
    let o = match cluster_tilt_with_cap(&p, cfg.nilpotency_cap) {
        Ok(o) => o,
        Err(TiltError::Invalid(_)) => {
            let report = crate::tilted::validate_with_cap(&p, cfg.nilpotency_cap);
            let _ = write!(err, "{report}");
            return Err(Failure::new(
                EXIT_INVALID,
                "input is not a valid tilted presentation",
            ));
        }
        Err(e) => return Err(e.into()),
    };
    let report = check.then(|| check_structure(&o));
    if let Some(path) = dot {
        fs::write(path, quiver_to_dot(&o.gamma.quiver, &o.f_arrows()))
            .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))?;
    }
    match cfg.output_format {
        OutputFormat::Json => emit_json(out, &tilt_json(&o, report.as_ref()))?,
        OutputFormat::Dot => emit(out, &quiver_to_dot(&o.gamma.quiver, &o.f_arrows()))?,
        OutputFormat::Text => {
            let mut s = tilt_text(&o);
            if let Some(r) = &report {
                for line in r.to_string().lines() {
                    s.push_str(&format!("# check {line}\n"));
                }
            }
            emit(out, &s)?;
        }
    }
    match report {
        Some(r) if !r.passed() => {
            let _ = write!(err, "{r}");
            Err(Failure::new(EXIT_STRUCTURE, "structural check failed"))
        }
        _ => Ok(EXIT_OK),
    }
}

fn linear_quiver(n: usize) -> Quiver {
    Quiver::from_arrows(n, (1..n).map(|i| (format!("a{i}"), i - 1, i)))
        .expect("valid linear quiver")
}

fn cmd_oracle(
    cfg: &Config,
    m: usize,
    census: bool,
    check_flips: bool,
    out: &mut dyn Write,
) -> Outcome {
    let ts = enumerate_triangulations(m).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    let mut v = json!({ "ngon": m, "rank": m - 3, "triangulations": ts.len() });
    let mut code = EXIT_OK;
    if census {
        let from_triangulations: BTreeSet<String> =
            ts.iter().map(|t| canonical_key(&quiver_of(t))).collect();
        let class = mutation_class(&linear_quiver(m - 3), cfg.max_members, cfg.max_entry as i64)?;
        let from_class: BTreeSet<String> = class.keys().map(String::from).collect();
        let equal = !class.truncated && from_class == from_triangulations;
        v["census"] = json!({
            "distinct_quivers": from_triangulations.len(),
            "mutation_class_size": class.len(),
            "truncated": class.truncated,
            "equal": equal,
        });
        if class.truncated {
            code = EXIT_CAP;
        } else if !equal {
            code = EXIT_STRUCTURE;
        }
    }
    if check_flips {
        let mut checked = 0usize;
        let mut failures = Vec::new();
        for t in &ts {
            let q = quiver_of(t);
            for (k, d) in t.diagonals().iter().enumerate() {
                let flipped = flip(t, d).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
                let mutated = crate::mutation::mutate(&q, k)?;
                checked += 1;
                if !crate::canonical::is_isomorphic(&quiver_of(&flipped), &mutated) {
                    failures.push(format!("{t} at {d}"));
                }
            }
        }
        if !failures.is_empty() {
            code = EXIT_STRUCTURE;
        }
        v["flips"] = json!({ "checked": checked, "failures": failures });
    }
    emit_json(out, &v)?;
    Ok(code)
}

/// Outcome of one corpus case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Runs every `*.tilted` file in `dir` (sorted by name): cluster tilt,
/// structural checks, and a byte comparison of canonical serializations with
/// `<name>.expected` when that file exists.
pub fn corpus_run(dir: &FsPath, nilpotency_cap: usize) -> Result<Vec<CaseResult>, String> {
    let entries = fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut cases: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "tilted"))
        .collect();
    cases.sort();
    if cases.is_empty() {
        return Err(format!("{}: no .tilted cases", dir.display()));
    }
    Ok(cases
        .iter()
        .map(|path| run_case(path, nilpotency_cap))
        .collect())
}

fn run_case(path: &FsPath, cap: usize) -> CaseResult {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let result = |passed: bool, detail: String| CaseResult {
        name: name.clone(),
        passed,
        detail,
    };
    let input = match fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|s| parse_presentation(&s).map_err(|e| format!("parse error at {e}")))
    {
        Ok(p) => p,
        Err(e) => return result(false, e),
    };
    let o = match cluster_tilt_with_cap(&input, cap) {
        Ok(o) => o,
        Err(e) => return result(false, e.to_string()),
    };
    let report = check_structure(&o);
    if !report.passed() {
        return result(false, report.summary());
    }
    let expected_path = path.with_extension("expected");
    let compared = if expected_path.exists() {
        let expected = match fs::read_to_string(&expected_path)
            .map_err(|e| e.to_string())
            .and_then(|s| {
                parse_presentation(&s).map_err(|e| format!("expected file: parse error at {e}"))
            }) {
            Ok(p) => p,
            Err(e) => return result(false, e),
        };
        if canonical_text(&expected) != canonical_text(&o.gamma) {
            return result(false, "output differs from expected".into());
        }
        ", matches expected"
    } else {
        ""
    };
    result(
        true,
        format!(
            "{} arrows, {} relations, type {}{compared}",
            o.gamma.quiver.arrow_count(),
            o.gamma.relations.len(),
            o.dynkin
        ),
    )
}

fn cmd_corpus(cfg: &Config, dir: &FsPath, out: &mut dyn Write) -> Outcome {
    let results = corpus_run(dir, cfg.nilpotency_cap).map_err(|e| Failure::new(EXIT_INVALID, e))?;
    let passed = results.iter().filter(|r| r.passed).count();
    match cfg.output_format {
        OutputFormat::Json => emit_json(
            out,
            &json!({ "cases": results, "passed": passed, "failed": results.len() - passed }),
        )?,
        _ => {
            let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
            let mut s = String::new();
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                s.push_str(&format!("{status}  {:width$}  {}\n", r.name, r.detail));
            }
            s.push_str(&format!("{passed}/{} passed\n", results.len()));
            emit(out, &s)?;
        }
    }
    Ok(if passed == results.len() {
        EXIT_OK
    } else {
        EXIT_STRUCTURE
    })
}
