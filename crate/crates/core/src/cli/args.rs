use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::generators::FieldGenerator;
use crate::nonlinearity::NonlinearitySpec;
use crate::record::Record;
use crate::spectral::io;
use crate::{Error, Field, Grid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Polya-Szegő certificate for --field at order --s
    VerifyPs,
    /// Gagliardo–Nirenberg certificate for --field with indices --s --p --q --r
    VerifyGn,
    /// Sharp Sobolev constant for n from --grid and order --s
    SobolevConst,
    /// Binomial multiplier series at --xi2, order --s, --k terms
    SeriesCheck,
    /// Bessel pairing of --field against its rearrangement, order index --k
    PairingCheck,
    /// Mollifier convergence diagnostic on --grid at order --s over --levels
    Compactness,
    /// Sample the structural assumptions of --spec
    #[value(name = "check-F")]
    CheckF,
    /// Constrained ground state from --config
    Minimize,
    /// Critical-mass probe over --c-list
    ProbeMass,
    /// Supercritical dilation probe over --deltas
    ProbeSuper,
    /// Run every line of a manifest
    Batch,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyPs => "verify-ps",
            Command::VerifyGn => "verify-gn",
            Command::SobolevConst => "sobolev-const",
            Command::SeriesCheck => "series-check",
            Command::PairingCheck => "pairing-check",
            Command::Compactness => "compactness",
            Command::CheckF => "check-F",
            Command::Minimize => "minimize",
            Command::ProbeMass => "probe-mass",
            Command::ProbeSuper => "probe-super",
            Command::Batch => "batch",
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "fraclab",
    version,
    about = "Fractional inequality certificates and constrained ground states"
)]
pub struct Args {
    pub command: Command,
    /// Manifest file (batch only)
    pub manifest: Option<PathBuf>,

    /// Config file with [grid], [solver], [nonlinearity] sections
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Field file, or a generator: gen:gaussian[:width[:amplitude]], gen:bump[:radius],
    /// gen:two-bump, gen:indicator[:radius], gen:random[:seed]
    #[arg(long)]
    pub field: Option<String>,
    /// Record destination (default standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid as n,N,L
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    /// Mass constraint level
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// CSV trace destination
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Gagliardo–Nirenberg power m (default q)
    #[arg(long)]
    pub m: Option<f64>,
    /// Inequality constant override
    #[arg(long)]
    pub constant: Option<f64>,
    /// Series terms or Bessel order index
    #[arg(long)]
    pub k: Option<u32>,
    /// Squared frequency for series-check
    #[arg(long)]
    pub xi2: Option<f64>,
    /// Comma-separated mollifier levels
    #[arg(long)]
    pub levels: Option<String>,
    /// Comma-separated integer dilations
    #[arg(long)]
    pub deltas: Option<String>,
    /// Comma-separated increasing masses
    #[arg(long = "c-list")]
    pub c_list: Option<String>,
    /// Nonlinearity as `family=power l=.. K=.. a=.. params=..`
    #[arg(long)]
    pub spec: Option<String>,
    /// Write the final field of minimize here
    #[arg(long)]
    pub dump: Option<PathBuf>,
    /// Add wall_ms to the record
    #[arg(long)]
    pub timing: bool,
}

impl Args {
    pub fn parse_from_argv<I, T>(argv: I) -> std::result::Result<Args, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        Args::try_parse_from(argv)
    }

    pub fn grid(&self) -> Result<Option<Grid>> {
        self.grid.as_deref().map(str::parse).transpose()
    }

    pub fn require_grid(&self) -> Result<Grid> {
        self.grid()?
            .ok_or_else(|| Error::param("grid", "--grid n,N,L is required"))
    }

    pub fn require_s(&self) -> Result<f64> {
        self.s.ok_or_else(|| Error::param("s", "--s is required"))
    }

    pub fn tol(&self, default: f64) -> Result<f64> {
        match self.tol {
            None => Ok(default),
            Some(t) if t >= 0.0 && t.is_finite() => Ok(t),
            Some(t) => Err(Error::param(
                "tol",
                format!("must be finite and >= 0, got {t}"),
            )),
        }
    }

    /// Loads `--field`, generating it on `--grid` when it names a generator.
    pub fn field(&self) -> Result<Field> {
        let spec = self
            .field
            .as_deref()
            .ok_or_else(|| Error::param("field", "--field is required"))?;
        match field_source(spec)? {
            FieldSource::Generator(g) => {
                let grid = self.require_grid()?;
                g.generate(grid, self.seed.unwrap_or(0))
            }
            FieldSource::File(path) => {
                let u = io::read(&path)?;
                if let Some(grid) = self.grid()? {
                    if grid != *u.grid() {
                        return Err(Error::GridMismatch(format!(
                            "--grid {grid} but {} holds {}",
                            path.display(),
                            u.grid()
                        )));
                    }
                }
                Ok(u)
            }
        }
    }

    pub fn nonlinearity(&self, s: f64, n: usize) -> Result<Option<NonlinearitySpec>> {
        let Some(text) = &self.spec else {
            return Ok(None);
        };
        let rec: Record = text.parse()?;
        NonlinearitySpec::from_entries(|k| rec.get(k), s, n).map(Some)
    }

    /// Flag-level checks that need no computation. Used to reject a batch
    /// manifest before any run starts.
    pub fn validate(&self) -> Result<()> {
        if self.command == Command::Batch {
            if self.manifest.is_none() {
                return Err(Error::param("manifest", "batch needs a manifest path"));
            }
        } else if self.manifest.is_some() {
            return Err(Error::param("manifest", "unexpected positional argument"));
        }
        self.grid()?;
        self.tol(0.0)?;
        if let Some(f) = &self.field {
            field_source(f)?;
        }
        if let Some(v) = &self.levels {
            parse_list(v, "levels")?;
        }
        if let Some(v) = &self.deltas {
            parse_list(v, "deltas")?;
        }
        if let Some(v) = &self.c_list {
            parse_list(v, "c-list")?;
        }
        if let Some(v) = &self.spec {
            v.parse::<Record>()?;
        }
        Ok(())
    }
}

pub enum FieldSource {
    Generator(FieldGenerator),
    File(PathBuf),
}

pub fn field_source(spec: &str) -> Result<FieldSource> {
    if spec.starts_with("gen:") {
        Ok(FieldSource::Generator(spec.parse()?))
    } else {
        Ok(FieldSource::File(PathBuf::from(spec)))
    }
}

pub fn parse_list(text: &str, name: &'static str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::param(name, format!("bad number `{t}`")))
        })
        .collect()
}
