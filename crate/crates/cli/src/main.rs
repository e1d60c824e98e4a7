//! `statatom`: batch front end of the statatom library.
//!
//! Exit status: 0 on success, 1 for usage and input errors, 2 when a numerical
//! method fails to converge.

mod args;
mod commands;
mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Format};

#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Lib(statatom::Error),
    Io(std::io::Error),
}

impl From<statatom::Error> for AppError {
    fn from(e: statatom::Error) -> Self {
        AppError::Lib(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Lib(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Usage(m) if m.starts_with("error:") => write!(f, "{m}"),
            AppError::Usage(m) => write!(f, "usage error: {m}"),
            AppError::Lib(e) => write!(f, "{e}"),
            AppError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

/// Position of the subcommand name and the value of `--config`, if any.
fn find_config(argv: &[OsString]) -> (Option<usize>, Option<OsString>) {
    let sub = argv.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')).map(|i| i + 1);
    let mut config = None;
    for (i, a) in argv.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            config = argv.get(i + 1).cloned();
        } else if let Some(v) = s.strip_prefix("--config=") {
            config = Some(OsString::from(v));
        }
    }
    (sub, config)
}

/// Turns `key = value` lines into flags; keys already given on the command line are skipped
/// so that flags override the file.
fn config_flags(path: &Path, argv: &[OsString]) -> Result<Vec<OsString>, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    let given = |flag: &str| {
        argv.iter().any(|a| {
            let s = a.to_string_lossy();
            s == flag || s.starts_with(&format!("{flag}="))
        })
    };
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            AppError::Usage(format!("{}:{}: expected key=value", path.display(), n + 1))
        })?;
        let (k, v) = (k.trim().replace('_', "-"), v.trim());
        if k == "config" {
            return Err(AppError::Usage("config files cannot include other config files".into()));
        }
        let flag = format!("--{k}");
        if given(&flag) {
            continue;
        }
        match v {
            "true" => out.push(flag.into()),
            "false" => {}
            _ => out.push(format!("{flag}={v}").into()),
        }
    }
    Ok(out)
}

fn write_output(table: &table::Table, format: Format, out: Option<&Path>) -> Result<(), AppError> {
    let mut sink: Box<dyn Write> = match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    match format {
        Format::Csv => table.write_csv(&mut sink)?,
        Format::Json => table.write_json(&mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

fn run(argv: Vec<OsString>) -> Result<(), AppError> {
    let (sub, config) = find_config(&argv);
    let mut argv_full = argv.clone();
    if let (Some(sub), Some(config)) = (sub, config) {
        let extra = config_flags(Path::new(&config), &argv)?;
        argv_full.splice(sub + 1..sub + 1, extra);
    }
    let cli = match Cli::try_parse_from(argv_full) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(AppError::Usage(e.render().to_string())),
    };
    let common = cli.command.common().clone();
    let table = commands::run(&cli.command)?;
    write_output(&table, common.format, common.out.as_deref())
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        // output cut short by a closed pipe (e.g. `| head`)
        Err(AppError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("statatom: {}", e.to_string().trim_end());
            ExitCode::from(e.exit_code())
        }
    }
}
