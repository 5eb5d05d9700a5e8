//! Command line entry points. Exit codes: 0 complete or ok, 1 invalid or a
//! rejected step, 2 incomplete but sound, 3 usage or IO error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use ndp_core::export::{export_frames, export_latex, export_unicode};
use ndp_core::{check_proof, replay, CheckStatus, ProofState};

use crate::persist;
use crate::script::Script;
use crate::wire::system_profile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INCOMPLETE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser)]
#[command(name = "ndp", version, about = "Goal-directed natural deduction planner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a saved proof and check every line.
    Check {
        path: PathBuf,
        /// Check against this system instead of the one in the file.
        #[arg(long)]
        system: Option<String>,
    },
    /// Write a saved proof as LaTeX, text, or one text file per step.
    Export {
        path: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        /// Output directory. LaTeX and text go to stdout when omitted;
        /// frames go to the current directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a proof script headlessly and print the result.
    Prove {
        script: PathBuf,
        /// Save the final session (.ndp editable, .ndu demonstration).
        #[arg(long)]
        save: Option<PathBuf>,
        /// System for scripts that do not name one.
        #[arg(long, env = "NDP_SYSTEM")]
        system: Option<String>,
    },
    /// Print the proof after the first k events of a saved file.
    Replay {
        path: PathBuf,
        #[arg(long)]
        upto: Option<usize>,
    },
    /// Serve the session API, and optionally the web UI assets.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        assets: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Latex,
    Text,
    Frames,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let mut text = e.render().to_string();
            if e.use_stderr() && !text.contains("Usage:") {
                text.push_str(&format!("\n{}\n", Cli::command().render_usage()));
            }
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Check { path, system } => check(&path, system.as_deref(), out),
        Command::Export { path, format, out: dir } => export(&path, format, dir.as_deref(), out),
        Command::Prove { script, save, system } => prove(&script, save.as_deref(), system.as_deref(), out, err),
        Command::Replay { path, upto } => replay_cmd(&path, upto, out, err),
        Command::Serve { host, port, assets } => serve(&host, port, assets, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn status_code(status: CheckStatus) -> i32 {
    match status {
        CheckStatus::Complete => EXIT_OK,
        CheckStatus::Invalid => EXIT_INVALID,
        CheckStatus::IncompleteButSound => EXIT_INCOMPLETE,
    }
}

/// Diagnostics one per line, then the overall status.
fn report(state: &ProofState, out: &mut dyn Write) -> anyhow::Result<i32> {
    let report = check_proof(state);
    for d in &report.diagnostics {
        writeln!(out, "{d}")?;
    }
    writeln!(out, "status: {}", report.status.as_str())?;
    Ok(status_code(report.status))
}

fn check(path: &Path, system: Option<&str>, out: &mut dyn Write) -> anyhow::Result<i32> {
    let doc = persist::read_document(path)?;
    let mut state = match replay(&doc, doc.undo_cursor) {
        Ok(st) => st,
        Err(e) => {
            writeln!(out, "{}:ReplayError:{e}", e.error.at().unwrap_or(0))?;
            writeln!(out, "status: {}", CheckStatus::Invalid.as_str())?;
            return Ok(EXIT_INVALID);
        }
    };
    if let Some(name) = system {
        let axioms = crate::wire::custom_axioms(&doc.system);
        state.system = system_profile(name, &axioms)?;
    }
    report(&state, out)
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "proof".into())
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn export(path: &Path, format: Format, dir: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<i32> {
    let mut doc = persist::read_document(path)?;
    // Undone events are history, not part of the proof being exported.
    doc.events.truncate(doc.undo_cursor);
    let state = replay(&doc, doc.undo_cursor)?;
    let single = |text: String, ext: &str, out: &mut dyn Write| -> anyhow::Result<i32> {
        match dir {
            None => out.write_all(text.as_bytes())?,
            Some(d) => {
                fs::create_dir_all(d)?;
                write_file(&d.join(format!("{}.{ext}", stem(path))), &text)?;
            }
        }
        Ok(EXIT_OK)
    };
    match format {
        Format::Latex => single(export_latex(&state.render()), "tex", out),
        Format::Text => single(export_unicode(&state.render()), "txt", out),
        Format::Frames => {
            let d = dir.unwrap_or(Path::new("."));
            fs::create_dir_all(d)?;
            let frames = export_frames(&doc)?;
            for (i, frame) in frames.frames.iter().enumerate() {
                let name = d.join(format!("frame-{i:03}.txt"));
                write_file(&name, &export_unicode(frame))?;
                writeln!(out, "{}", name.display())?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn prove(
    path: &Path,
    save: Option<&Path>,
    system: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<i32> {
    let text = fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let script = Script::from_json(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let run = script.run(system)?;
    out.write_all(export_unicode(&run.session.state().render()).as_bytes())?;
    if let Some(p) = save {
        persist::save(&run.session, p)?;
    }
    if let Some((step, e)) = run.failure {
        writeln!(err, "step {step}: {}: {e}", e.code())?;
        return Ok(EXIT_INVALID);
    }
    let status = check_proof(run.session.state()).status;
    writeln!(out, "status: {}", status.as_str())?;
    Ok(status_code(status))
}

fn replay_cmd(path: &Path, upto: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let doc = persist::read_document(path)?;
    let k = upto.unwrap_or(doc.undo_cursor);
    if k > doc.events.len() {
        anyhow::bail!("--upto {k} is beyond the {} recorded events", doc.events.len());
    }
    match replay(&doc, k) {
        Ok(st) => {
            out.write_all(export_unicode(&st.render()).as_bytes())?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "{e}")?;
            Ok(EXIT_INVALID)
        }
    }
}

fn serve(host: &str, port: u16, assets: Option<PathBuf>, err: &mut dyn Write) -> anyhow::Result<i32> {
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(async {
        let listener = match tokio::net::TcpListener::bind((host, port)).await {
            Ok(l) => l,
            Err(e) => {
                writeln!(err, "error: cannot listen on {host}:{port}: {e}")?;
                return Ok(EXIT_USAGE);
            }
        };
        writeln!(err, "listening on http://{}", listener.local_addr()?)?;
        crate::server::serve(listener, assets).await?;
        Ok(EXIT_OK)
    })
}
