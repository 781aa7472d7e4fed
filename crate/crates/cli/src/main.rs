use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use orbit_lie_cli::config::{parse_rational, Emit};
use orbit_lie_cli::{parse_config, run, to_json, to_table};

#[derive(Parser)]
#[command(name = "orbit-lie", version, about = "Orbit algebras and their Lie algebra actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a job config.
    Run {
        config: PathBuf,
        /// Level bound, overriding `N` in the config.
        #[arg(long)]
        level: Option<usize>,
        /// Outputs to produce, overriding `emit` in the config.
        #[arg(long, value_delimiter = ',')]
        emit: Option<Vec<Emit>>,
        /// Write report.json, report.txt, e.dot and f.dot here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Give a measure parameter a rational value, as `name=value`.
        #[arg(long, value_parser = parse_assignment)]
        specialize: Vec<(String, BigRational)>,
    },
}

fn parse_assignment(s: &str) -> Result<(String, BigRational), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    Ok((name.trim().to_string(), parse_rational(value)?))
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), String> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let Command::Run { config, level, emit, out, specialize } = Cli::parse().command;
    let result = (|| {
        let text = fs::read_to_string(&config).map_err(|e| format!("cannot read {}: {e}", config.display()))?;
        let mut job = parse_config(&text).map_err(|e| format!("{}: {e}", config.display()))?;
        if let Some(n) = level {
            job.set_level(n);
        }
        if let Some(emit) = emit {
            job.set_emit(emit);
        }
        if job.emit.is_empty() {
            job.set_emit(vec![Emit::Table]);
        }
        for (name, value) in specialize {
            job.specialize(&name, value).map_err(|e| e.to_string())?;
        }

        let report = run(&job);
        let dot = report.dot.clone();
        match &out {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
                for kind in &job.emit {
                    match kind {
                        Emit::Json => write(dir, "report.json", &to_json(&report))?,
                        Emit::Table => write(dir, "report.txt", &to_table(&report))?,
                        Emit::Dot => {
                            if let Some((e, f)) = &dot {
                                write(dir, "e.dot", e)?;
                                write(dir, "f.dot", f)?;
                            }
                        }
                    }
                }
            }
            None => {
                for kind in &job.emit {
                    match kind {
                        Emit::Json => print!("{}", to_json(&report)),
                        Emit::Table => print!("{}", to_table(&report)),
                        Emit::Dot => {
                            if let Some((e, f)) = &dot {
                                print!("{e}{f}");
                            }
                        }
                    }
                }
            }
        }
        for note in &report.notes {
            eprintln!("note: {note}");
        }
        Ok::<bool, String>(report.failed())
    })();
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
