//! `voxml`: validate, inspect and simulate voxicons and scenes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use voxml::interpreter::{ground, run, InterpError, Outcome, RunConfig};
use voxml::io::{
    locate, parse_logical_form, parse_scene, parse_voxicon, serialize_trace, serialize_voxeme,
    ParseError, Term,
};
use voxml::model::{Severity, VoxemeKind};
use voxml::shipped;
use voxml::spatial::{minimal_embedding_space, SceneState, SpatialError, SpatialParams};
use voxml::voxicon::{lint, stats, Voxicon, VoxiconError};

const OK: u8 = 0;
const INVALID: u8 = 1;
const SYNTAX: u8 = 2;
const FAILED: u8 = 3;
const USAGE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "voxml",
    version,
    about = "Validate, inspect and simulate VoxML voxicons and scenes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every entry of a voxeme or voxicon file against the schema.
    Validate { file: PathBuf },
    /// Run cross-entry checks over a voxicon.
    Lint {
        /// Voxicon file; the bundled voxicon when omitted.
        file: Option<PathBuf>,
    },
    /// Print the entries defined for a predicate.
    Lookup {
        pred: String,
        /// Restrict to one voxeme kind (object, program, attribute, relation, function).
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        voxicon: Option<PathBuf>,
    },
    /// Count entries by kind, head, program head and scale.
    Stats {
        /// Voxicon file; the bundled voxicon when omitted.
        file: Option<PathBuf>,
    },
    /// Ground a logical form against a scene and print the evaluation log.
    Eval {
        /// Logical form, e.g. "put(apple, on(plate))".
        lf: String,
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        spatial: SpatialFlags,
    },
    /// Run a program call and write its trace.
    Simulate {
        /// Logical form, e.g. "put(apple, on(plate))".
        lf: String,
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        spatial: SpatialFlags,
        /// Maximum number of ticks before the run is cut off.
        #[arg(long, default_value_t = 10_000)]
        max_ticks: u64,
        /// World units moved per tick.
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        speed: f64,
        /// Distance within which `at` holds.
        #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
        at_eps: f64,
        /// Write the trace to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the minimal embedding space of a scene.
    Mes {
        /// Scene file; the bundled scene when omitted.
        #[arg(long)]
        scene: Option<PathBuf>,
        /// Clearance added on every side.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        margin: f64,
    },
}

#[derive(Args)]
struct Inputs {
    /// Scene file; the bundled scene when omitted.
    #[arg(long)]
    scene: Option<PathBuf>,
    /// Voxicon file; the bundled voxicon when omitted.
    #[arg(long)]
    voxicon: Option<PathBuf>,
}

#[derive(Args)]
struct SpatialFlags {
    /// Contact tolerance for RCC-8 relations.
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    eps: f64,
    /// Alignment tolerance in degrees.
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    align_tol: f64,
    /// Ratio below which one extent is much smaller than another.
    #[arg(long, default_value_t = 0.25, allow_negative_numbers = true)]
    ratio: f64,
}

impl SpatialFlags {
    fn params(&self) -> Result<SpatialParams, Fail> {
        let check = |name: &str, v: f64, ok: bool| {
            if ok && v.is_finite() {
                Ok(())
            } else {
                Err(Fail::new(USAGE, format!("--{name} out of range: {v}")))
            }
        };
        check("eps", self.eps, self.eps >= 0.0)?;
        check("align-tol", self.align_tol, self.align_tol >= 0.0)?;
        check("ratio", self.ratio, self.ratio > 0.0 && self.ratio < 1.0)?;
        Ok(SpatialParams {
            eps: self.eps,
            align_tol_deg: self.align_tol,
            ratio: self.ratio,
            ..SpatialParams::default()
        })
    }
}

/// A failed command: exit code and message for standard error.
struct Fail {
    code: u8,
    message: String,
}

impl Fail {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Fail {
            code,
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::new(USAGE, format!("{}: {e}", path.display())))
}

fn positioned(origin: &str, e: &ParseError) -> String {
    format!("{origin}:{e}")
}

fn voxicon_failure(origin: &str, e: &VoxiconError) -> Fail {
    let code = if e.is_syntax() { SYNTAX } else { INVALID };
    let lines: Vec<String> = e
        .errors()
        .iter()
        .map(|err| positioned(origin, err))
        .collect();
    Fail::new(code, lines.join("\n"))
}

/// A voxicon together with the text and name it was read from.
struct Loaded {
    voxicon: Voxicon,
    text: String,
    origin: String,
}

impl Loaded {
    /// `origin:line:col` for a field of an entry, or `origin` alone.
    fn position(&self, pred: &str, kind: VoxemeKind, path: &str) -> String {
        match locate(&self.text, pred, kind, path) {
            Some((line, column)) => format!("{}:{line}:{column}", self.origin),
            None => self.origin.clone(),
        }
    }
}

fn load_voxicon(path: Option<&Path>) -> Result<Loaded, Fail> {
    let (origin, text) = match path {
        None => (
            "<bundled voxicon>".to_string(),
            shipped::VOXICON.to_string(),
        ),
        Some(p) => (p.display().to_string(), read(p)?),
    };
    let voxicon = parse_voxicon(&text).map_err(|e| voxicon_failure(&origin, &e))?;
    Ok(Loaded {
        voxicon,
        text,
        origin,
    })
}

fn load_scene(path: Option<&Path>) -> Result<SceneState, Fail> {
    let (origin, text) = match path {
        None => (
            "<bundled scene>".to_string(),
            shipped::KITCHEN_SCENE.to_string(),
        ),
        Some(p) => (p.display().to_string(), read(p)?),
    };
    parse_scene(&text).map_err(|e| Fail::new(SYNTAX, positioned(&origin, &e)))
}

fn load_lf(text: &str) -> Result<Term, Fail> {
    parse_logical_form(text).map_err(|e| Fail::new(SYNTAX, positioned("<logical form>", &e)))
}

fn interp_failure(e: InterpError) -> Fail {
    match e {
        InterpError::BadConfig(_) => Fail::new(USAGE, e.to_string()),
        e => Fail::new(FAILED, e.to_string()),
    }
}

fn validate(file: &Path, out: &mut String) -> Result<u8, Fail> {
    let v = load_voxicon(Some(file))?;
    let reports = v.voxicon.validate();
    let mut errors = 0;
    for r in &reports {
        let n = r.errors().count();
        errors += n;
        out.push_str(&format!(
            "{} {}: {n} error(s), {} warning(s)\n",
            r.kind,
            r.pred,
            r.issues.len() - n
        ));
        for i in &r.issues {
            let at = v.position(&r.pred, r.kind, &i.path);
            out.push_str(&format!(
                "  {at}: {}: {}: {}\n",
                i.severity, i.path, i.message
            ));
        }
    }
    out.push_str(&format!("{} entries, {errors} error(s)\n", reports.len()));
    Ok(if errors == 0 { OK } else { INVALID })
}

fn cmd_lint(file: Option<&Path>, out: &mut String) -> Result<u8, Fail> {
    let v = load_voxicon(file)?;
    let diags = lint(&v.voxicon);
    for d in &diags {
        out.push_str(&format!("{}: {d}\n", v.position(&d.pred, d.kind, &d.path)));
    }
    let errors = diags
        .iter()
        .filter(|d| d.severity == Severity::Error)
        .count();
    out.push_str(&format!(
        "{} diagnostic(s), {errors} error(s)\n",
        diags.len()
    ));
    Ok(if errors == 0 { OK } else { INVALID })
}

fn cmd_lookup(
    pred: &str,
    kind: Option<&str>,
    voxicon: Option<&Path>,
    out: &mut String,
) -> Result<u8, Fail> {
    let kind = kind
        .map(|k| {
            k.parse::<VoxemeKind>()
                .map_err(|e| Fail::new(USAGE, e.to_string()))
        })
        .transpose()?;
    let v = load_voxicon(voxicon)?;
    let found: Vec<_> = v
        .voxicon
        .lookup_any(pred)
        .filter(|x| kind.is_none_or(|k| x.kind() == k))
        .collect();
    if found.is_empty() {
        return Err(Fail::new(INVALID, format!("no entry for `{pred}`")));
    }
    let texts: Vec<String> = found.into_iter().map(serialize_voxeme).collect();
    out.push_str(&texts.join("\n"));
    Ok(OK)
}

fn cmd_eval(lf: &str, inputs: &Inputs, flags: &SpatialFlags, out: &mut String) -> Result<u8, Fail> {
    let params = flags.params()?;
    let term = load_lf(lf)?;
    let v = load_voxicon(inputs.voxicon.as_deref())?;
    let scene = load_scene(inputs.scene.as_deref())?;
    let g = ground(&term, &v.voxicon, &scene, &params).map_err(interp_failure)?;
    out.push_str(&format!("{}\n", g.term()));
    for entry in &g.log {
        out.push_str(&format!("  {entry}\n"));
    }
    Ok(OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    lf: &str,
    inputs: &Inputs,
    flags: &SpatialFlags,
    max_ticks: u64,
    speed: f64,
    at_eps: f64,
    trace_out: Option<&Path>,
    out: &mut String,
    err: &mut String,
) -> Result<u8, Fail> {
    let spatial = flags.params()?;
    if !(at_eps >= 0.0 && at_eps.is_finite()) {
        return Err(Fail::new(USAGE, format!("--at-eps out of range: {at_eps}")));
    }
    let cfg = RunConfig {
        max_ticks,
        speed,
        at_eps,
        spatial,
    };
    let term = load_lf(lf)?;
    let v = load_voxicon(inputs.voxicon.as_deref())?;
    let scene = load_scene(inputs.scene.as_deref())?;
    let trace = run(&term, &v.voxicon, &scene, &cfg).map_err(interp_failure)?;
    let text = serialize_trace(&trace);
    match trace_out {
        Some(p) => {
            fs::write(p, &text).map_err(|e| Fail::new(USAGE, format!("{}: {e}", p.display())))?
        }
        None => out.push_str(&text),
    }
    let last = trace.final_state();
    let facts: Vec<String> = last.facts.iter().map(ToString::to_string).collect();
    let relations: Vec<String> = last
        .relation_facts(cfg.spatial.eps)
        .iter()
        .map(ToString::to_string)
        .collect();
    let fired: Vec<String> = trace.fired.iter().map(ToString::to_string).collect();
    err.push_str(&format!("outcome: {}\n", trace.outcome));
    err.push_str(&format!("ticks: {}\n", trace.transitions.len()));
    err.push_str(&format!("moves: {}\n", trace.move_count()));
    err.push_str(&format!("event: {}\n", trace.event));
    err.push_str(&format!("fired: {}\n", fired.join("; ")));
    err.push_str(&format!("facts: {}\n", facts.join("; ")));
    err.push_str(&format!("relations: {}\n", relations.join("; ")));
    Ok(if trace.outcome == Outcome::Completed {
        OK
    } else {
        FAILED
    })
}

fn cmd_mes(scene: Option<&Path>, margin: f64, out: &mut String) -> Result<u8, Fail> {
    let s = load_scene(scene)?;
    let objects: Vec<_> = s.objects.values().cloned().collect();
    let b = minimal_embedding_space(&objects, margin).map_err(|e| match e {
        SpatialError::BadParameter(_) => Fail::new(USAGE, e.to_string()),
        e => Fail::new(FAILED, e.to_string()),
    })?;
    out.push_str(&format!("{b}\n"));
    Ok(OK)
}

fn dispatch(cli: &Cli, out: &mut String, err: &mut String) -> Result<u8, Fail> {
    match &cli.command {
        Command::Validate { file } => validate(file, out),
        Command::Lint { file } => cmd_lint(file.as_deref(), out),
        Command::Lookup {
            pred,
            kind,
            voxicon,
        } => cmd_lookup(pred, kind.as_deref(), voxicon.as_deref(), out),
        Command::Stats { file } => {
            let v = load_voxicon(file.as_deref())?;
            out.push_str(&stats(&v.voxicon).to_string());
            Ok(OK)
        }
        Command::Eval {
            lf,
            inputs,
            spatial,
        } => cmd_eval(lf, inputs, spatial, out),
        Command::Simulate {
            lf,
            inputs,
            spatial,
            max_ticks,
            speed,
            at_eps,
            out: trace_out,
        } => cmd_simulate(
            lf,
            inputs,
            spatial,
            *max_ticks,
            *speed,
            *at_eps,
            trace_out.as_deref(),
            out,
            err,
        ),
        Command::Mes { scene, margin } => cmd_mes(scene.as_deref(), *margin, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    let (mut out, mut err) = (String::new(), String::new());
    let code = dispatch(&cli, &mut out, &mut err).unwrap_or_else(|f| {
        err.push_str(&format!("error: {}\n", f.message));
        f.code
    });
    let _ = std::io::stdout().write_all(out.as_bytes());
    let _ = std::io::stderr().write_all(err.as_bytes());
    ExitCode::from(code)
}
