mod cli;
mod commands;
mod input;
mod manifest;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use cli::Cli;
use commands::Artifact;
use manifest::{current_timestamp, RunManifest};

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(cutseq_core::Error),
}

impl From<cutseq_core::Error> for CliError {
    fn from(e: cutseq_core::Error) -> Self {
        match e {
            cutseq_core::Error::Parse(msg) => CliError::Usage(msg),
            e => CliError::Domain(e),
        }
    }
}

struct Outcome {
    code: u8,
    stdout: String,
    stderr: String,
}

impl Outcome {
    fn usage(msg: String) -> Self {
        Outcome { code: 1, stdout: String::new(), stderr: msg }
    }
}

fn render(cli: &Cli, args: &[String], timestamp: u64) -> Outcome {
    let Some(cmd) = &cli.command else {
        return Outcome::usage("a subcommand is required; see `cutseq --help`\n".into());
    };
    let name = commands::name(cmd);
    let manifest = RunManifest::new(name, args, cli.seed, timestamp);
    match commands::run(cmd, cli.seed) {
        Ok(Artifact::Json(mut body)) => {
            body.insert("schema".into(), json!(format!("cutseq/{name}/v{SCHEMA_VERSION}")));
            body.insert("manifest".into(), json!(manifest));
            let v = serde_json::Value::Object(body);
            let mut text = if cli.pretty { serde_json::to_string_pretty(&v) } else { serde_json::to_string(&v) }
                .expect("output serializes");
            text.push('\n');
            Outcome { code: 0, stdout: text, stderr: String::new() }
        }
        Ok(Artifact::Svg(svg)) => Outcome { code: 0, stdout: svg + &manifest.svg_comment(), stderr: String::new() },
        Err(CliError::Usage(msg)) => Outcome::usage(format!("error: {msg}\n")),
        Err(CliError::Domain(e)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn parse(args: &[String]) -> Result<Cli, Outcome> {
    let argv = std::iter::once("cutseq".to_string()).chain(args.iter().cloned());
    Cli::try_parse_from(argv).map_err(|e| {
        let code = match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
            _ => 1,
        };
        let text = e.render().to_string();
        if code == 0 {
            Outcome { code, stdout: text, stderr: String::new() }
        } else {
            Outcome::usage(text)
        }
    })
}

fn run(args: Vec<String>) -> Outcome {
    let cli = match parse(&args) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let Some(path) = &cli.replay else {
        return render(&cli, &args, current_timestamp());
    };
    if cli.command.is_some() {
        return Outcome::usage("--replay takes no subcommand\n".into());
    }
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("error: cannot read {}: {e}\n", path.display())),
    };
    let m = match RunManifest::extract(&text) {
        Ok(m) => m,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let mut out = match parse(&m.args) {
        Ok(c) if c.replay.is_none() => render(&c, &m.args, m.timestamp),
        Ok(_) => Outcome::usage("error: manifest is itself a replay\n".into()),
        Err(o) => o,
    };
    if m.version != env!("CARGO_PKG_VERSION") {
        out.stderr.insert_str(0, &format!("warning: manifest written by version {}\n", m.version));
    }
    out
}

fn main() -> ExitCode {
    let out = run(std::env::args().skip(1).collect());
    let _ = std::io::stdout().lock().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code)
}
