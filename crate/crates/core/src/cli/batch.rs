use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::args::{Args, Command};
use super::{execute, short_hash, Outcome, RunRecord, THREADS_ENV};
use crate::record::Record;
use crate::{Error, Result};

/// Per-outcome counts of a batch.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BatchSummary {
    pub runs: usize,
    pub certified: usize,
    pub violated: usize,
    pub converged: usize,
    pub flagged: usize,
    pub error: usize,
}

impl BatchSummary {
    fn add(&mut self, o: Outcome) {
        self.runs += 1;
        match o {
            Outcome::Certified => self.certified += 1,
            Outcome::Violated => self.violated += 1,
            Outcome::Converged => self.converged += 1,
            Outcome::Flagged => self.flagged += 1,
            Outcome::Error => self.error += 1,
        }
    }

    pub fn outcome(&self) -> Outcome {
        if self.error > 0 {
            Outcome::Error
        } else if self.violated + self.flagged > 0 {
            Outcome::Flagged
        } else {
            Outcome::Certified
        }
    }

    pub fn to_record(&self) -> Record {
        let mut r = Record::new();
        r.push("runs", self.runs.to_string())
            .push("certified", self.certified.to_string())
            .push("violated", self.violated.to_string())
            .push("converged", self.converged.to_string())
            .push("flagged", self.flagged.to_string())
            .push("error", self.error.to_string());
        r
    }
}

/// Parses every manifest line up front. Blank lines and `#` comments are
/// skipped; any other line is an argument list for one run.
pub fn parse_manifest(text: &str) -> Result<Vec<Args>> {
    let mut runs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let argv = std::iter::once("fraclab").chain(line.split_whitespace());
        let args = Args::parse_from_argv(argv).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.kind().to_string(),
        })?;
        if args.command == Command::Batch {
            return Err(Error::Parse {
                line: i + 1,
                message: "batch lines cannot start another batch".into(),
            });
        }
        args.validate().map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        runs.push(args);
    }
    Ok(runs)
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs a manifest and returns the per-run records in manifest order plus
/// the summary. Nothing runs if any line is malformed.
pub fn run_batch(manifest: &Path) -> Result<(Vec<RunRecord>, BatchSummary, String)> {
    let text = std::fs::read_to_string(manifest).map_err(|e| Error::io(manifest, e))?;
    let runs = parse_manifest(&text)?;
    let work = || -> Vec<RunRecord> { runs.par_iter().map(|a| execute(a).0).collect() };
    let records = match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::param("FRACLAB_THREADS", e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut summary = BatchSummary::default();
    for r in &records {
        summary.add(r.outcome);
    }
    Ok((records, summary, short_hash(text.as_bytes())))
}

pub(crate) fn run_batch_command(
    args: &Args,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let manifest = args.manifest.as_deref().expect("validated");
    let mut lines = Vec::new();
    let code = match run_batch(manifest) {
        Ok((records, summary, hash)) => {
            lines.extend(records.iter().map(ToString::to_string));
            let rec = RunRecord {
                subcommand: "batch".into(),
                config_hash: hash,
                seed: None,
                outcome: summary.outcome(),
                wall_ms: None,
                payload: summary.to_record(),
            };
            lines.push(rec.to_string());
            rec.exit_code()
        }
        Err(e) => {
            let _ = writeln!(stderr, "fraclab: batch aborted, nothing was run: {e}");
            let mut payload = BatchSummary::default().to_record();
            payload.push("error", e.to_string());
            let rec = RunRecord {
                subcommand: "batch".into(),
                config_hash: "-".into(),
                seed: None,
                outcome: Outcome::Error,
                wall_ms: None,
                payload,
            };
            lines.push(rec.to_string());
            2
        }
    };
    let mut text = lines.join("\n");
    text.push('\n');
    let written = match &args.out {
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
        Some(path) => std::fs::write(path, &text).map_err(|e| Error::io(path, e)),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "fraclab: {e}");
        return 2;
    }
    code
}
