use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use shapecert::complex::Realization;
use shapecert::embed::{heuristic_embed, EmbedConfig};
use shapecert::lcp::simplex_square_distance;
use shapecert::prover::{prove_existence, ProverConfig};
use shapecert::rational::Rational;

use crate::error::CliError;
use crate::format::ComplexDescription;
use crate::obj::to_obj;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

pub fn load(path: &Path) -> Result<ComplexDescription, CliError> {
    ComplexDescription::parse(&read(path)?).map_err(|e| match e {
        CliError::Parse {
            line,
            column,
            message,
            ..
        } => CliError::Parse {
            origin: path.display().to_string(),
            line,
            column,
            message,
        },
        other => other,
    })
}

/// The file's coordinates, or a fresh embedding when only an embed block
/// is present.
fn starting_realization(d: &ComplexDescription) -> Result<Realization, CliError> {
    if let Some(r) = &d.realization {
        return Ok(r.clone());
    }
    match &d.embed {
        Some(cfg) => Ok(heuristic_embed(&d.complex, d.dim, &d.spec, cfg)?),
        None => Err(CliError::Usage(
            "input has neither [coordinates] nor an [embed] block".into(),
        )),
    }
}

#[derive(Debug, Clone)]
pub struct ProveArgs {
    pub input: PathBuf,
    pub config: ProverConfig,
    pub verbose: bool,
    pub log_out: Option<PathBuf>,
}

/// Returns whether existence was proven.
pub fn prove(args: &ProveArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let d = load(&args.input)?;
    let r = starting_realization(&d)?;
    let report = prove_existence(&r, &d.spec, args.config);
    let log = report.render_log();
    if let Some(path) = &args.log_out {
        write_file(path, &log)?;
    }
    if args.verbose {
        emit(out, &log)?;
    } else {
        let last = log.lines().last().unwrap_or_default().trim();
        emit(out, &format!("{last}\n"))?;
    }
    Ok(report.is_proven())
}

#[derive(Debug, Clone, Default)]
pub struct EmbedOverrides {
    pub seed: Option<u64>,
    pub round_digits: Option<u32>,
    pub repulsion_strength: Option<f64>,
    pub spring_strength: Option<f64>,
    pub time_step: Option<f64>,
    pub phase1_iterations: Option<usize>,
    pub phase2_iterations: Option<usize>,
    pub max_restarts: Option<usize>,
}

impl EmbedOverrides {
    pub fn apply(&self, base: EmbedConfig) -> EmbedConfig {
        EmbedConfig {
            repulsion_strength: self.repulsion_strength.unwrap_or(base.repulsion_strength),
            spring_strength: self.spring_strength.unwrap_or(base.spring_strength),
            time_step: self.time_step.unwrap_or(base.time_step),
            phase1_iterations: self.phase1_iterations.unwrap_or(base.phase1_iterations),
            phase2_iterations: self.phase2_iterations.unwrap_or(base.phase2_iterations),
            rng_seed: self.seed.unwrap_or(base.rng_seed),
            final_round_digits: self.round_digits.unwrap_or(base.final_round_digits),
            max_restarts: self.max_restarts.unwrap_or(base.max_restarts),
        }
    }
}

/// Writes the input description back with freshly embedded coordinates.
pub fn embed(
    input: &Path,
    overrides: &EmbedOverrides,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut d = load(input)?;
    let cfg = overrides.apply(d.embed.clone().unwrap_or_default());
    let r = heuristic_embed(&d.complex, d.dim, &d.spec, &cfg)?;
    d.realization = Some(r);
    d.embed = Some(cfg);
    let text = d.to_toml();
    match out_path {
        Some(p) => write_file(p, &text),
        None => emit(out, &text),
    }
}

pub fn export_obj(
    input: &Path,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let d = load(input)?;
    let r = d.realization.as_ref().ok_or_else(|| {
        CliError::Usage(format!("{}: no [coordinates] to export", input.display()))
    })?;
    let text = to_obj(r, d.round_digits());
    match out_path {
        Some(p) => write_file(p, &text),
        None => emit(out, &text),
    }
}

pub type Points = Vec<Vec<Rational>>;

/// Parses `[[1, 2], [3/4, 0.5]]` into points.
pub fn parse_point_list(s: &str) -> Result<Points, CliError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || {
        CliError::Usage(format!(
            "cannot parse point list {s:?}; expected [[x, y, ...], ...]"
        ))
    };
    let inner = compact
        .strip_prefix("[[")
        .and_then(|t| t.strip_suffix("]]"))
        .ok_or_else(bad)?;
    inner
        .split("],[")
        .map(|point| {
            point
                .split(',')
                .map(|x| {
                    x.parse::<Rational>()
                        .map_err(|e| CliError::Usage(format!("{s:?}: {e}")))
                })
                .collect()
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DistanceFile {
    x: Vec<Vec<toml::Value>>,
    y: Vec<Vec<toml::Value>>,
}

fn value_to_rational(v: &toml::Value) -> Result<Rational, CliError> {
    match v {
        toml::Value::Integer(n) => Ok(Rational::from(*n)),
        toml::Value::String(s) => s.parse().map_err(|e| CliError::Usage(format!("{e}"))),
        other => Err(CliError::Usage(format!(
            "expected an integer or fraction string, got {other}"
        ))),
    }
}

/// Reads `x = [[...], ...]` and `y = [[...], ...]` from a TOML file.
pub fn load_point_lists(path: &Path) -> Result<(Points, Points), CliError> {
    let text = read(path)?;
    let raw: DistanceFile = toml::from_str(&text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        let before = &text[..offset.min(text.len())];
        CliError::Parse {
            origin: path.display().to_string(),
            line: before.matches('\n').count() + 1,
            column: before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1,
            message: e.message().to_string(),
        }
    })?;
    let convert = |pts: &[Vec<toml::Value>]| -> Result<Points, CliError> {
        pts.iter()
            .map(|p| p.iter().map(value_to_rational).collect())
            .collect()
    };
    Ok((convert(&raw.x)?, convert(&raw.y)?))
}

/// Exact squared distance and closest points as `(d, ([x..], [y..]))`.
pub fn distance(x: &[Vec<Rational>], y: &[Vec<Rational>]) -> Result<String, CliError> {
    Ok(simplex_square_distance(x, y)?.to_tuple_string())
}
