//! Config-file loading, flag/file/default merging, and shared resolution of
//! state parameters, grids, and output targets.
//!
//! Precedence is flags > config file > built-in defaults; the config file is
//! JSON whose keys are the long flag names (kebab-case).

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use csqs_core::{Error as CoreError, NormalizedCsqs, PhaseGrid, StateParams};

use crate::{GridArgs, OutputArgs, OutputFormat, StateArgs};

/// Margin (in phase-space units) the auto-grid keeps between the state's
/// center and the grid edge before re-centering.
const COVER_MARGIN: f64 = 3.0;

/// Substituted amplitude for the exactly-degenerate request (r = 0, alpha = 0):
/// the nearest normalizable state on the same branch, whose every emitted
/// quantity is within 1e-7 of the vacuum limit.
const DEGENERATE_ALPHA: f64 = 1e-4;

/// Top-level CLI error with the documented exit-code mapping.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config file, or invalid parameter values. Exit 2.
    Usage(String),
    /// A numerical-domain failure from the core library. Exit 3.
    Numeric(CoreError),
    /// The comparison report found a non-quarantined breach. Exit 4.
    CompareFailed { breaches: Vec<String> },
    /// Filesystem failure. Exit 1.
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::CompareFailed { .. } => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Numeric(err) => write!(f, "{err}"),
            CliError::CompareFailed { breaches } => {
                write!(f, "comparison failed: {}", breaches.join("; "))
            }
            CliError::Io(err) => write!(f, "{err}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            // Parameter validation is a usage problem; everything else the
            // core can raise is a numerical-domain failure.
            CoreError::InvalidParams(msg) => CliError::Usage(msg),
            other => CliError::Numeric(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

/// Complex flag value parsed from `RE` or `RE,IM`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg {
    pub re: f64,
    pub im: f64,
}

pub fn parse_complex(raw: &str) -> Result<ComplexArg, String> {
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{s}` is not a number"))
    };
    match raw.split_once(',') {
        Some((re, im)) => Ok(ComplexArg {
            re: parse(re)?,
            im: parse(im)?,
        }),
        None => Ok(ComplexArg {
            re: parse(raw)?,
            im: 0.0,
        }),
    }
}

/// Config-file schema: every key optional, named after its long flag.
#[derive(Deserialize, Default)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<String>,
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    pub t: Option<f64>,
    pub r: Option<f64>,
    pub negative_t: Option<bool>,
    pub cutoff: Option<usize>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub kappa_t: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
    pub oracle: Option<bool>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub alpha_step: Option<f64>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub r_step: Option<f64>,
}

pub fn load_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

/// Resolved state plus the bookkeeping the output layer needs.
pub struct ResolvedState {
    pub state: NormalizedCsqs,
    pub cutoff: Option<usize>,
}

/// Merges flags over config and validates the "exactly one of t/r" contract.
/// The exactly-degenerate request (r = 0, alpha = 0) is substituted by the
/// nearest normalizable state with a note on stderr.
pub fn resolve_state(args: &StateArgs, cfg: &FileConfig) -> Result<ResolvedState, CliError> {
    let alpha = resolve_alpha(args, cfg)?;

    // t/r are a group: if either came from flags, the file's pair is ignored.
    let (t, r) = if args.t.is_some() || args.r.is_some() {
        (args.t, args.r)
    } else {
        (cfg.t, cfg.r)
    };
    let negative_t = args.negative_t || cfg.negative_t.unwrap_or(false);

    let params = match (t, r) {
        (Some(t), None) => StateParams::from_t(to_c(alpha), t)?,
        (None, Some(r)) => {
            if negative_t {
                StateParams::from_r_negative_t(to_c(alpha), r)?
            } else {
                StateParams::from_r(to_c(alpha), r)?
            }
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give exactly one of --t / --r (both were supplied)".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "give exactly one of --t / --r (neither was supplied)".into(),
            ))
        }
    };

    let params = if params.r() == 0.0 && params.alpha() == Complex64::ZERO {
        eprintln!(
            "note: r = 0 with alpha = 0 is degenerate (the superposition annihilates \
             the vacuum); substituting alpha = {DEGENERATE_ALPHA:e} on the same branch"
        );
        StateParams::from_t(Complex64::new(DEGENERATE_ALPHA, 0.0), params.t())?
    } else {
        params
    };

    Ok(ResolvedState {
        state: NormalizedCsqs::new(params)?,
        cutoff: args.cutoff.or(cfg.cutoff),
    })
}

fn resolve_alpha(args: &StateArgs, cfg: &FileConfig) -> Result<ComplexArg, CliError> {
    if let Some(a) = args.alpha {
        return Ok(a);
    }
    if args.alpha_re.is_some() || args.alpha_im.is_some() {
        return Ok(ComplexArg {
            re: args.alpha_re.unwrap_or(0.0),
            im: args.alpha_im.unwrap_or(0.0),
        });
    }
    if let Some(raw) = &cfg.alpha {
        return parse_complex(raw).map_err(|e| CliError::Usage(format!("bad alpha in config: {e}")));
    }
    Ok(ComplexArg {
        re: cfg.alpha_re.unwrap_or(0.0),
        im: cfg.alpha_im.unwrap_or(0.0),
    })
}

fn to_c(a: ComplexArg) -> Complex64 {
    Complex64::new(a.re, a.im)
}

/// Builds the evaluation grid: explicit bounds/sizes win (missing pieces fall
/// back to the 401x401 [-6,6]^2 box); otherwise the default box is used,
/// re-centered on `center` when it would clip the state.
pub fn resolve_grid(
    args: &GridArgs,
    cfg: &FileConfig,
    center: Complex64,
) -> Result<PhaseGrid, CliError> {
    let x_min = args.x_min.or(cfg.x_min);
    let x_max = args.x_max.or(cfg.x_max);
    let y_min = args.y_min.or(cfg.y_min);
    let y_max = args.y_max.or(cfg.y_max);
    let nx = args.nx.or(cfg.nx);
    let ny = args.ny.or(cfg.ny);

    let any_explicit = x_min.is_some()
        || x_max.is_some()
        || y_min.is_some()
        || y_max.is_some()
        || nx.is_some()
        || ny.is_some();

    if !any_explicit {
        let base = PhaseGrid::default();
        return Ok(if base.covers(center, COVER_MARGIN) {
            base
        } else {
            PhaseGrid::centered_on(center)
        });
    }

    let base = PhaseGrid::default();
    let grid = PhaseGrid::new(
        x_min.unwrap_or(base.x_min()),
        x_max.unwrap_or(base.x_max()),
        y_min.unwrap_or(base.y_min()),
        y_max.unwrap_or(base.y_max()),
        nx.unwrap_or(base.nx()),
        ny.unwrap_or(base.ny()),
    )?;
    if !grid.covers(center, COVER_MARGIN) {
        eprintln!(
            "warning: grid [{}, {}]x[{}, {}] sits close to the state centered at \
             ({}, {}); integrals may be truncated",
            grid.x_min(),
            grid.x_max(),
            grid.y_min(),
            grid.y_max(),
            center.re,
            center.im
        );
    }
    Ok(grid)
}

/// Output format: flag > config > CSV.
pub fn resolve_format(out: &OutputArgs, cfg: &FileConfig) -> Result<OutputFormat, CliError> {
    if let Some(f) = out.format {
        return Ok(f);
    }
    match cfg.format.as_deref() {
        None => Ok(OutputFormat::Csv),
        Some("csv") => Ok(OutputFormat::Csv),
        Some("json") => Ok(OutputFormat::Json),
        Some(other) => Err(CliError::Usage(format!(
            "bad format in config: `{other}` (expected csv or json)"
        ))),
    }
}

/// Output path: flag > config > `<stem>.<ext>` in the working directory.
pub fn resolve_output(out: &OutputArgs, cfg: &FileConfig, stem: &str, format: OutputFormat) -> PathBuf {
    out.output
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| {
            let ext = match format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            };
            PathBuf::from(format!("{stem}.{ext}"))
        })
}
