//! `fraclab` command line front end.
//!
//! Every invocation emits exactly one [`RunRecord`] line. Exit codes: 0 for
//! certified or converged, 1 for a violation or flag, 2 for invalid input.

mod args;
mod batch;
mod commands;

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use sha2::{Digest, Sha256};

pub use args::{Args, Command};
pub use batch::{run_batch, BatchSummary};

use crate::record::Record;
use crate::{Error, Result};

/// Environment variable that adds `wall_ms` to every record.
pub const TIMING_ENV: &str = "FRACLAB_TIMING";
/// Environment variable capping batch parallelism.
pub const THREADS_ENV: &str = "FRACLAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Certified,
    Violated,
    Converged,
    Flagged,
    Error,
}

impl Outcome {
    pub const ALL: [Outcome; 5] = [
        Outcome::Certified,
        Outcome::Violated,
        Outcome::Converged,
        Outcome::Flagged,
        Outcome::Error,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Certified => "certified",
            Outcome::Violated => "violated",
            Outcome::Converged => "converged",
            Outcome::Flagged => "flagged",
            Outcome::Error => "error",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Certified | Outcome::Converged => 0,
            Outcome::Violated | Outcome::Flagged => 1,
            Outcome::Error => 2,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Outcome::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| Error::param("outcome", format!("unknown outcome `{s}`")))
    }
}

/// One line of output: header fields followed by the module report.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub subcommand: String,
    /// First 16 hex digits of the SHA-256 of the canonical inputs.
    pub config_hash: String,
    pub seed: Option<u64>,
    pub outcome: Outcome,
    /// Present only when timing is enabled; omitted otherwise so that
    /// repeated runs are byte-identical.
    pub wall_ms: Option<u64>,
    pub payload: Record,
}

const HEADER: [&str; 5] = ["subcommand", "config_hash", "seed", "outcome", "wall_ms"];

impl RunRecord {
    pub fn to_record(&self) -> Record {
        let mut r = Record::new();
        r.push("subcommand", self.subcommand.as_str())
            .push("config_hash", self.config_hash.as_str())
            .push("seed", self.seed.map_or("-".to_string(), |s| s.to_string()))
            .push("outcome", self.outcome.as_str());
        if let Some(ms) = self.wall_ms {
            r.push("wall_ms", ms.to_string());
        }
        r.extend(&self.payload);
        r
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code()
    }
}

impl fmt::Display for RunRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_record().fmt(f)
    }
}

impl FromStr for RunRecord {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let rec: Record = line.parse()?;
        let need = |k: &str| {
            rec.get(k).ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("record is missing `{k}`"),
            })
        };
        let seed = match need("seed")? {
            "-" => None,
            s => Some(s.parse().map_err(|_| Error::Parse {
                line: 1,
                message: format!("bad seed `{s}`"),
            })?),
        };
        let wall_ms = rec
            .get("wall_ms")
            .map(|v| {
                v.parse().map_err(|_| Error::Parse {
                    line: 1,
                    message: format!("bad wall_ms `{v}`"),
                })
            })
            .transpose()?;
        let mut payload = Record::new();
        for (k, v) in rec.fields() {
            if !HEADER.contains(&k.as_str()) {
                payload.push(k, v.as_str());
            }
        }
        Ok(RunRecord {
            subcommand: need("subcommand")?.to_string(),
            config_hash: need("config_hash")?.to_string(),
            seed,
            outcome: need("outcome")?.parse()?,
            wall_ms,
            payload,
        })
    }
}

pub(crate) fn short_hash(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

pub(crate) fn timing_enabled(args_flag: bool) -> bool {
    args_flag || std::env::var(TIMING_ENV).is_ok_and(|v| !v.is_empty() && v != "0")
}

/// Executes one non-batch invocation and builds its record. Invalid input
/// becomes an `error` record; the message is also returned for the
/// diagnostic stream.
pub fn execute(args: &Args) -> (RunRecord, Option<String>) {
    let start = Instant::now();
    let hash = short_hash(commands::canonical_inputs(args).as_bytes());
    let (outcome, payload, message) = match commands::dispatch(args) {
        Ok((outcome, payload)) => (outcome, payload, None),
        Err(e) => {
            let mut p = Record::new();
            p.push("error", e.to_string());
            (Outcome::Error, p, Some(e.to_string()))
        }
    };
    let record = RunRecord {
        subcommand: args.command.name().to_string(),
        config_hash: hash,
        seed: args.seed,
        outcome,
        wall_ms: timing_enabled(args.timing).then(|| start.elapsed().as_millis() as u64),
        payload,
    };
    (record, message)
}

fn write_line(out: Option<&std::path::Path>, stdout: &mut dyn Write, line: &str) -> Result<()> {
    match out {
        None => writeln!(stdout, "{line}").map_err(|e| Error::io("<stdout>", e)),
        Some(path) => std::fs::write(path, format!("{line}\n")).map_err(|e| Error::io(path, e)),
    }
}

/// Parses `argv` (including the program name), runs it and returns the exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let args = match Args::parse_from_argv(argv.iter().cloned()) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let _ = write!(stderr, "{}", e.render());
            let mut payload = Record::new();
            payload.push("error", e.kind().to_string());
            let name = argv
                .get(1)
                .map_or("-".to_string(), |a| a.to_string_lossy().into_owned());
            let record = RunRecord {
                subcommand: name,
                config_hash: "-".into(),
                seed: None,
                outcome: Outcome::Error,
                wall_ms: None,
                payload,
            };
            let _ = writeln!(stdout, "{record}");
            return 2;
        }
    };
    if let Err(e) = args.validate() {
        let _ = writeln!(stderr, "fraclab: {e}");
        let record = invalid_record(&args, &e);
        let _ = write_line(args.out.as_deref(), stdout, &record.to_string());
        return 2;
    }
    if args.command == Command::Batch {
        return batch::run_batch_command(&args, stdout, stderr);
    }
    let (record, message) = execute(&args);
    if let Some(m) = message {
        let _ = writeln!(stderr, "fraclab: {m}");
    }
    if let Err(e) = write_line(args.out.as_deref(), stdout, &record.to_string()) {
        let _ = writeln!(stderr, "fraclab: {e}");
        return 2;
    }
    record.exit_code()
}

fn invalid_record(args: &Args, e: &Error) -> RunRecord {
    let mut payload = Record::new();
    payload.push("error", e.to_string());
    RunRecord {
        subcommand: args.command.name().to_string(),
        config_hash: short_hash(commands::canonical_inputs(args).as_bytes()),
        seed: args.seed,
        outcome: Outcome::Error,
        wall_ms: None,
        payload,
    }
}

/// Entry point for the binary.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
