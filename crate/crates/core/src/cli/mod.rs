//! The `e2` command line.

mod spec;

pub use spec::CustomSpec;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::chart::{render_chart, Format};
use crate::cohomology::OracleSettings;
use crate::scenarios::{build_scenario, oracle_check, Params, Scenario, ScenarioError, SCENARIOS};
use crate::specseq::{
    abutment_diagonal, collapse_bound, obstruction_report, run_pages, turn_page, Page,
};

#[derive(Debug, Parser)]
#[command(name = "e2", version, about = "Exact E2 pages and charts for T-algebra spectral sequences")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Range of t, as `a:b`.
    #[arg(long, global = true, value_parser = parse_window)]
    window: Option<(i64, i64)>,
    /// Largest s shown.
    #[arg(long, global = true)]
    smax: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Ascii)]
    format: FormatArg,
    /// Write the chart here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Recompute the page with the cotriple resolution and compare.
    #[arg(long, global = true)]
    oracle: bool,
    /// Scenario parameter `key=value`; repeatable.
    #[arg(long = "param", global = true, value_parser = parse_param)]
    params: Vec<(String, String)>,
    /// Page to draw; later pages apply the injected differentials.
    #[arg(long, global = true, default_value_t = 2)]
    page: usize,
    /// Append collapse, edge-map and abutment information (ascii only).
    #[arg(long, global = true)]
    report: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One of the built-in examples.
    Scenario { name: String },
    /// A presentation read from a JSON file.
    Custom {
        #[arg(long)]
        spec: PathBuf,
    },
    /// List the built-in examples.
    List,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Ascii,
    Svg,
    Json,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected a:b")?;
    let a = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

enum Failure {
    Usage(String),
    Compute(String),
}

/// The innermost variant name of a nested error, e.g. `NotRegular`.
fn error_name<E: std::fmt::Debug>(e: &E) -> String {
    const WRAPPERS: [&str; 6] = ["Cohomology", "Resolution", "Algebra", "Graded", "SpecSeq", "LinAlg"];
    let debug = format!("{e:?}");
    let mut rest = debug.as_str();
    loop {
        let end = rest
            .find(|c: char| !c.is_alphanumeric() && c != '_')
            .unwrap_or(rest.len());
        let name = &rest[..end];
        if WRAPPERS.contains(&name) && rest[end..].starts_with('(') {
            rest = &rest[end + 1..];
        } else {
            return name.to_string();
        }
    }
}

/// `Name: message`, without repeating a name the message already leads with.
fn named<E: std::fmt::Debug + std::fmt::Display>(e: &E) -> String {
    let name = error_name(e);
    let text = e.to_string();
    if text.starts_with(&name) {
        text
    } else {
        format!("{name}: {text}")
    }
}

fn failure(e: ScenarioError) -> Failure {
    let text = named(&e);
    if e.is_usage() {
        Failure::Usage(text)
    } else {
        Failure::Compute(text)
    }
}

fn page_at(sc: &Scenario, r: usize) -> Result<Page, Failure> {
    if r < 2 {
        return Err(Failure::Usage("--page must be at least 2".into()));
    }
    let pages = run_pages(&sc.page, &sc.differentials).map_err(|e| failure(e.into()))?;
    if let Some(p) = pages.iter().find(|p| p.r == r) {
        return Ok(p.clone());
    }
    let mut p = pages.last().expect("nonempty").clone();
    while p.r < r {
        p = turn_page(&p, &[]).map_err(|e| failure(e.into()))?;
    }
    Ok(p)
}

fn report(sc: &Scenario) -> Result<String, Failure> {
    let mut out = String::new();
    let bound = collapse_bound(&sc.page, None);
    match bound.page {
        Some(r) => {
            let _ = writeln!(out, "collapse: E_{r} = E_inf ({})", bound.justification);
        }
        None => {
            let _ = writeln!(out, "collapse: {}", bound.justification);
        }
    }
    if let Some(note) = &sc.collapse_note {
        let _ = writeln!(out, "  because {note}");
    }
    let rep = obstruction_report(&sc.page, &sc.differentials).map_err(|e| failure(e.into()))?;
    let tri = |b: Option<bool>| match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "undecided in window",
    };
    let _ = writeln!(out, "edge map surjective: {}", tri(Some(rep.surjective)));
    let _ = writeln!(out, "edge map injective: {}", tri(rep.injective));
    let _ = writeln!(out, "edge map bijective: {}", tri(rep.bijective()));
    for c in &rep.classes {
        match &c.killed_by {
            None => {
                let _ = writeln!(out, "class {}: survives", c.class);
            }
            Some(o) => {
                let _ = writeln!(out, "class {}: supports d_{} ({})", c.class, o.r, o.citation);
            }
        }
    }
    let pages = run_pages(&sc.page, &sc.differentials).map_err(|e| failure(e.into()))?;
    let last = pages.last().expect("nonempty");
    let w = last.window;
    for stem in (w.t_min.max(0) - w.s_max as i64)..=w.t_max {
        let a = abutment_diagonal(last, stem);
        if a.pieces.is_empty() {
            continue;
        }
        let pieces: Vec<String> = a
            .pieces
            .iter()
            .map(|p| format!("{} at s={}{}", p.value, p.s, if p.window_limited { "~" } else { "" }))
            .collect();
        let _ = writeln!(out, "stem {stem}: {}", pieces.join(", "));
    }
    Ok(out)
}

fn execute(args: Args, stderr: &mut dyn Write) -> Result<(String, Option<PathBuf>), Failure> {
    let params: Params = args.params.iter().cloned().collect();
    let format = match args.format {
        FormatArg::Ascii => Format::Ascii,
        FormatArg::Svg => Format::Svg,
        FormatArg::Json => Format::Json,
    };
    if args.report && !matches!(format, Format::Ascii) {
        return Err(Failure::Usage("--report needs --format ascii".into()));
    }
    let sc = match &args.command {
        Command::List => return Ok((SCENARIOS.join("\n") + "\n", args.out)),
        Command::Scenario { name } => {
            build_scenario(name, &params, args.window, args.smax).map_err(failure)?
        }
        Command::Custom { spec } => {
            if !params.is_empty() {
                return Err(Failure::Usage("--param applies to scenarios only".into()));
            }
            let text = std::fs::read_to_string(spec)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", spec.display())))?;
            let parsed: CustomSpec = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("InvalidSpec: {e}")))?;
            let prepared = parsed.prepare(args.window, args.smax).map_err(|e| {
                // anything wrong with the presentation itself is the caller's fault
                Failure::Usage(named(&e))
            })?;
            prepared.compute().map_err(failure)?
        }
    };
    if args.oracle {
        let check = oracle_check(&sc, &OracleSettings::default(), 2, 6).map_err(failure)?;
        if let Some(why) = &check.skipped {
            let _ = writeln!(stderr, "oracle: skipped ({why})");
        } else if let Some(bad) = check.compared.iter().find(|c| c.page != c.oracle) {
            return Err(Failure::Compute(format!(
                "OracleMismatch: at (s={}, t={}) the page has {} and the oracle {}{}",
                bad.s,
                bad.t,
                bad.page,
                bad.oracle,
                if bad.window_limited { " (oracle window-limited)" } else { "" }
            )));
        } else {
            let _ = writeln!(stderr, "oracle: {} spots agree", check.compared.len());
        }
    }
    let page = page_at(&sc, args.page)?;
    let mut text = render_chart(&page, format);
    if args.report {
        text.push_str(&report(&sc)?);
    }
    Ok((text, args.out))
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    return 0;
                }
                _ => 1,
            };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    match execute(args, stderr) {
        Ok((text, None)) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Ok((text, Some(path))) => match std::fs::write(&path, text) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                2
            }
        },
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "usage error: {msg}");
            1
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}
