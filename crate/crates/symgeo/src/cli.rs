//! Command-line front end.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use symgeo_core::cas::{Env, Precision};
use symgeo_core::engine::{EngineError, Model};
use symgeo_core::geom::GeomError;

use crate::curves::{self, curve_doc};
use crate::json::{warning_text, ModelDoc, SceneDoc};
use crate::report::{self, parse_assignment, parse_precision};
use crate::{api, sweep};

pub const PRECISION_ENV: &str = "SYMGEO_PRECISION_BITS";

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    /// A `prove` query did not return the proof it asked for.
    pub const PROOF_FAILED: i32 = 1;
    /// Usage, parse or name errors.
    pub const USAGE: i32 = 2;
    /// Geometric failures: degenerate or singular witnesses, ranges.
    pub const GEOMETRY: i32 = 3;
    pub const NO_INPUT: i32 = 66;
    pub const IO_ERROR: i32 = 74;
    /// The port is taken.
    pub const TEMP_FAIL: i32 = 75;
}

#[derive(Debug, Parser)]
#[command(
    name = "symgeo",
    version,
    about = "Exact symbolic geometry: proofs, measurements, loci and envelopes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveFormat {
    Csv,
    Svg,
    Implicit,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and construct a model and check it at its witness.
    Check { path: PathBuf },
    /// Evaluate every query, symbolically and at the witness.
    Query {
        path: PathBuf,
        /// Move a witness first: `name=value`; values may use `pi` and `deg(...)`.
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
        /// Print a JSON document instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Sample, draw or implicitize a locus or envelope query.
    Curve {
        path: PathBuf,
        query: String,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = CurveFormat::Csv)]
        format: CurveFormat,
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
        /// Write to a file instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Step one indeterminate and tabulate every measurement as CSV.
    Sweep {
        path: PathBuf,
        name: String,
        #[arg(allow_negative_numbers = true)]
        from: String,
        #[arg(allow_negative_numbers = true)]
        to: String,
        steps: usize,
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
        /// Decimals printed per value.
        #[arg(long, default_value_t = 6)]
        digits: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Export the numeric scene as JSON.
    Scene {
        path: PathBuf,
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
    /// Serve the HTTP API until interrupted.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

pub fn engine_exit(e: &EngineError) -> i32 {
    match e {
        EngineError::Parse(_) | EngineError::UnknownQuery(_) | EngineError::Unsupported(_) => exit::USAGE,
        EngineError::Geom {
            error: GeomError::UnknownName(_),
            ..
        } => exit::USAGE,
        _ => exit::GEOMETRY,
    }
}

/// Error text with the offending source line underlined when there is a span.
fn describe(path: &Path, src: &str, e: &EngineError) -> String {
    let Some(span) = e.span() else {
        return format!("{}: {}: {e}", path.display(), e.code());
    };
    let msg = match e {
        EngineError::Parse(p) => p.message.clone(),
        e => e.to_string(),
    };
    let mut out = format!("{}:{}:{}: {}: {msg}", path.display(), span.line, span.col, e.code());
    if let Some(line) = src.lines().nth(span.line.saturating_sub(1) as usize) {
        let width = (span.end.saturating_sub(span.start)).clamp(1, line.len().max(1));
        out.push_str(&format!(
            "\n  {line}\n  {}{}",
            " ".repeat(span.col.saturating_sub(1) as usize),
            "^".repeat(width)
        ));
    }
    out
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn fail(&mut self, code: i32, msg: impl std::fmt::Display) -> i32 {
        let _ = writeln!(self.err, "symgeo: {msg}");
        code
    }
}

fn precision() -> Result<Precision, String> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => parse_precision(&v).map_err(|e| format!("{PRECISION_ENV}: {e}")),
        Err(_) => Ok(Precision::default()),
    }
}

/// Reads, builds and moves witnesses; errors come back as exit codes.
fn load(io: &mut Io, path: &Path, set: &[String]) -> Result<Model, i32> {
    let precision = precision().map_err(|e| io.fail(exit::USAGE, e))?;
    let assignments: Vec<(String, f64)> = set
        .iter()
        .map(|s| parse_assignment(s))
        .collect::<Result<_, _>>()
        .map_err(|e| io.fail(exit::USAGE, e))?;
    let src = std::fs::read_to_string(path).map_err(|e| io.fail(exit::NO_INPUT, format!("{}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map_or("model".into(), |s| s.to_string_lossy().into_owned());
    let mut model =
        Model::build_with(&name, &src, precision).map_err(|e| io.fail(engine_exit(&e), describe(path, &src, &e)))?;
    if !assignments.is_empty() {
        let refs: Vec<(&str, f64)> = assignments.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let warnings = model
            .set_witnesses(&refs)
            .map_err(|e| io.fail(engine_exit(&e), describe(path, &src, &e)))?;
        for w in warnings {
            let _ = writeln!(io.err, "warning: {}", warning_text(&w));
        }
    }
    Ok(model)
}

fn emit(io: &mut Io, output: Option<&Path>, text: &str) -> i32 {
    match output {
        Some(p) => match std::fs::write(p, text) {
            Ok(()) => exit::OK,
            Err(e) => io.fail(exit::IO_ERROR, format!("{}: {e}", p.display())),
        },
        None => match io.out.write_all(text.as_bytes()) {
            Ok(()) => exit::OK,
            Err(e) => io.fail(exit::IO_ERROR, e),
        },
    }
}

fn proofs_exit(m: &Model) -> i32 {
    if m.all_proofs_hold() {
        exit::OK
    } else {
        exit::PROOF_FAILED
    }
}

/// Largest coordinate magnitude among points and circles of the scene.
fn scene_extent(m: &Model) -> f64 {
    m.scene()
        .entities
        .iter()
        .filter_map(|e| match e.kind {
            "point" => Some(e.values[0].abs().max(e.values[1].abs())),
            "circle" => Some(e.values[0].abs().max(e.values[1].abs()) + e.values[2].abs()),
            _ => None,
        })
        .filter(|v| v.is_finite())
        .fold(1.0, f64::max)
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut io = Io { out, err };
    match cli.command {
        Command::Check { path } => {
            let m = match load(&mut io, &path, &[]) {
                Ok(m) => m,
                Err(c) => return c,
            };
            if let Err(e) = m.geom.check_witness(&Env::new()) {
                return io.fail(exit::GEOMETRY, format!("{}: {e}", path.display()));
            }
            let entities = m.scene().entities.len();
            let failed = m.results().iter().filter(|r| r.outcome.is_err()).count();
            let _ = writeln!(
                io.out,
                "{}: ok, {} indeterminates, {entities} entities, {} queries ({failed} failed)",
                path.display(),
                m.indeterminates().len(),
                m.results().len()
            );
            proofs_exit(&m)
        }
        Command::Query { path, set, json } => {
            let m = match load(&mut io, &path, &set) {
                Ok(m) => m,
                Err(c) => return c,
            };
            let text = if json {
                serde_json::to_string_pretty(&ModelDoc::new(&m)).unwrap() + "\n"
            } else {
                report::report(&m)
            };
            match emit(&mut io, None, &text) {
                exit::OK => proofs_exit(&m),
                c => c,
            }
        }
        Command::Scene { path, set } => {
            let m = match load(&mut io, &path, &set) {
                Ok(m) => m,
                Err(c) => return c,
            };
            let doc: SceneDoc = m.scene().into();
            emit(&mut io, None, &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))
        }
        Command::Curve {
            path,
            query,
            samples,
            format,
            set,
            output,
        } => {
            let m = match load(&mut io, &path, &set) {
                Ok(m) => m,
                Err(c) => return c,
            };
            let text = match format {
                CurveFormat::Implicit => curves::implicit_text(&m, &query).map(|s| s + "\n"),
                _ => curve_doc(&m, &query, samples, format == CurveFormat::Json).map(|doc| match format {
                    CurveFormat::Csv => curves::csv(&doc),
                    CurveFormat::Svg => curves::svg(&doc, scene_extent(&m)),
                    _ => serde_json::to_string_pretty(&doc).unwrap() + "\n",
                }),
            };
            match text {
                Ok(t) => emit(&mut io, output.as_deref(), &t),
                Err(e) => io.fail(engine_exit(&e), format!("{query}: {}: {e}", e.code())),
            }
        }
        Command::Sweep {
            path,
            name,
            from,
            to,
            steps,
            set,
            digits,
            output,
        } => {
            let (from, to) = match (report::parse_value(&from), report::parse_value(&to)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return io.fail(exit::USAGE, e),
            };
            let m = match load(&mut io, &path, &set) {
                Ok(m) => m,
                Err(c) => return c,
            };
            let s = match sweep::sweep(&m, &name, from, to, steps) {
                Ok(s) => s,
                Err(e) => return io.fail(engine_exit(&e), format!("{}: {e}", e.code())),
            };
            for (c, spread) in &s.non_constant {
                let _ = writeln!(io.err, "warning: {c} is proved constant but varies by {spread:e}");
            }
            match emit(&mut io, output.as_deref(), &s.to_csv(digits)) {
                exit::OK if s.failed_rows() == s.rows.len() => {
                    io.fail(exit::GEOMETRY, "the model is singular at every step")
                }
                c => c,
            }
        }
        Command::Serve { port, host } => serve(&mut io, &host, port),
    }
}

fn serve(io: &mut Io, host: &str, port: u16) -> i32 {
    let precision = match precision() {
        Ok(p) => p,
        Err(e) => return io.fail(exit::USAGE, e),
    };
    let listener = match std::net::TcpListener::bind((host, port)) {
        Ok(l) => l,
        Err(e) if e.kind() == io::ErrorKind::AddrInUse => {
            return io.fail(exit::TEMP_FAIL, format!("{host}:{port} is already in use"))
        }
        Err(e) => return io.fail(exit::USAGE, format!("{host}:{port}: {e}")),
    };
    let addr = listener.local_addr().expect("bound socket has an address");
    let _ = writeln!(io.out, "listening on http://{addr}");
    let _ = io.out.flush();
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => return io.fail(exit::TEMP_FAIL, e),
    };
    let result = runtime.block_on(async move {
        listener.set_nonblocking(true)?;
        let listener = tokio::net::TcpListener::from_std(listener)?;
        let state = api::AppState::new(api::DEFAULT_CAPACITY, api::DEFAULT_TTL, precision);
        api::serve(listener, state).await
    });
    match result {
        Ok(()) => exit::OK,
        Err(e) => io.fail(exit::TEMP_FAIL, e),
    }
}
