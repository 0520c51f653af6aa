//! TOML description of a complex, its target lengths and optionally a
//! starting realization.
//!
//! ```toml
//! mode = "maximal_simplices"
//! data = [["a", "b"], ["b", "c"], ["c", "a"]]
//! dim = 2
//!
//! [desired_sq_lengths]
//! "a,b" = 1
//! "b,c" = "1 / 4"
//! default = "0.75"
//!
//! [coordinates]
//! a = ["0", "0"]
//! b = ["1", "0"]
//! c = ["1 / 4", "0.433"]
//!
//! [embed]
//! seed = 3
//! ```

use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use shapecert::complex::{AbstractSimplicialComplex, Realization, SquaredLengthSpec};
use shapecert::embed::EmbedConfig;
use shapecert::rational::Rational;
use toml::Spanned;

use crate::error::CliError;

pub const MODE_MAXIMAL_SIMPLICES: &str = "maximal_simplices";
const DEFAULT_KEY: &str = "default";

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDescription {
    pub complex: AbstractSimplicialComplex,
    pub dim: usize,
    pub spec: SquaredLengthSpec,
    pub realization: Option<Realization>,
    pub embed: Option<EmbedConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Int(i64),
    Float(f64),
    Text(String),
}

type RawPoint = Spanned<Vec<Spanned<RawNumber>>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    mode: Spanned<String>,
    data: Spanned<Vec<Vec<String>>>,
    dim: Spanned<i64>,
    desired_sq_lengths: BTreeMap<Spanned<String>, Spanned<RawNumber>>,
    coordinates: Option<Spanned<BTreeMap<String, RawPoint>>>,
    embed: Option<RawEmbed>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEmbed {
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_round_digits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    repulsion_strength: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spring_strength: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase1_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase2_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_restarts: Option<usize>,
}

#[derive(Serialize)]
struct OutFile {
    mode: &'static str,
    data: Vec<Vec<String>>,
    dim: usize,
    desired_sq_lengths: BTreeMap<String, RawNumber>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coordinates: Option<BTreeMap<String, Vec<RawNumber>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    embed: Option<RawEmbed>,
}

/// Locates byte offsets in the source for diagnostics.
struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn line_col(&self, offset: usize) -> (usize, usize) {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }

    fn error(&self, span: Range<usize>, message: impl Into<String>) -> CliError {
        let (line, column) = self.line_col(span.start);
        CliError::Parse {
            origin: "<input>".into(),
            line,
            column,
            message: message.into(),
        }
    }
}

fn to_rational(src: &Source, raw: &Spanned<RawNumber>) -> Result<Rational, CliError> {
    match raw.get_ref() {
        RawNumber::Int(n) => Ok(Rational::from(*n)),
        RawNumber::Text(s) => s.parse().map_err(|e| src.error(raw.span(), format!("{e}"))),
        RawNumber::Float(_) => Err(src.error(
            raw.span(),
            "bare floats are not exact; write decimals as strings, e.g. \"0.75\"",
        )),
    }
}

fn from_rational(x: &Rational) -> RawNumber {
    if x.is_integer() {
        if let Ok(n) = i64::try_from(x.numer()) {
            return RawNumber::Int(n);
        }
    }
    RawNumber::Text(x.to_string())
}

impl ComplexDescription {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let src = Source { text };
        let raw: RawFile = toml::from_str(text).map_err(|e| {
            let span = e.span().unwrap_or(0..0);
            src.error(span, e.message().to_string())
        })?;

        if raw.mode.get_ref() != MODE_MAXIMAL_SIMPLICES {
            return Err(src.error(
                raw.mode.span(),
                format!(
                    "unsupported mode {:?}; expected {MODE_MAXIMAL_SIMPLICES:?}",
                    raw.mode.get_ref()
                ),
            ));
        }
        let complex = AbstractSimplicialComplex::from_maximal_simplices(raw.data.get_ref())
            .map_err(|e| src.error(raw.data.span(), e.to_string()))?;
        let dim = usize::try_from(*raw.dim.get_ref())
            .ok()
            .filter(|&d| d > 0)
            .ok_or_else(|| src.error(raw.dim.span(), "dim must be a positive integer"))?;

        let mut spec = SquaredLengthSpec::new();
        for (key, value) in &raw.desired_sq_lengths {
            let v = to_rational(&src, value)?;
            if key.get_ref() == DEFAULT_KEY {
                spec.set_default(Some(v));
                continue;
            }
            let (a, b) = key
                .get_ref()
                .split_once(',')
                .map(|(a, b)| (a.trim(), b.trim()))
                .ok_or_else(|| {
                    src.error(key.span(), "length keys look like \"a,b\" or \"default\"")
                })?;
            for label in [a, b] {
                if complex.vertex_index(label).is_none() {
                    return Err(src.error(key.span(), format!("unknown vertex {label:?}")));
                }
            }
            spec.set(a, b, v);
        }
        spec.resolve(&complex)
            .map_err(|e| src.error(0..0, format!("desired_sq_lengths: {e}")))?;

        let realization = match &raw.coordinates {
            None => None,
            Some(table) => {
                let mut coords = BTreeMap::new();
                for (label, values) in table.get_ref() {
                    let point = values
                        .get_ref()
                        .iter()
                        .map(|v| to_rational(&src, v))
                        .collect::<Result<Vec<_>, _>>()?;
                    if point.len() != dim {
                        return Err(src.error(
                            values.span(),
                            format!(
                                "vertex {label:?} has {} coordinates, expected {dim}",
                                point.len()
                            ),
                        ));
                    }
                    coords.insert(label.clone(), point);
                }
                let r = Realization::new(complex.clone(), dim, &coords)
                    .map_err(|e| src.error(table.span(), e.to_string()))?;
                Some(r)
            }
        };

        let embed = match raw.embed {
            None => None,
            Some(e) => {
                let d = EmbedConfig::default();
                let cfg = EmbedConfig {
                    repulsion_strength: e.repulsion_strength.unwrap_or(d.repulsion_strength),
                    spring_strength: e.spring_strength.unwrap_or(d.spring_strength),
                    time_step: e.time_step.unwrap_or(d.time_step),
                    phase1_iterations: e.phase1_iterations.unwrap_or(d.phase1_iterations),
                    phase2_iterations: e.phase2_iterations.unwrap_or(d.phase2_iterations),
                    rng_seed: e.seed.unwrap_or(d.rng_seed),
                    final_round_digits: e.final_round_digits.unwrap_or(d.final_round_digits),
                    max_restarts: e.max_restarts.unwrap_or(d.max_restarts),
                };
                cfg.validate()
                    .map_err(|err| src.error(0..0, format!("embed: {err}")))?;
                Some(cfg)
            }
        };

        Ok(ComplexDescription {
            complex,
            dim,
            spec,
            realization,
            embed,
        })
    }

    pub fn to_toml(&self) -> String {
        let mut lengths: BTreeMap<String, RawNumber> = self
            .spec
            .entries()
            .iter()
            .map(|((a, b), v)| (format!("{a},{b}"), from_rational(v)))
            .collect();
        if let Some(d) = self.spec.default_value() {
            lengths.insert(DEFAULT_KEY.to_string(), from_rational(d));
        }
        let coordinates = self.realization.as_ref().map(|r| {
            r.coords_by_label()
                .into_iter()
                .map(|(label, p)| {
                    (
                        label,
                        p.iter().map(|x| RawNumber::Text(x.to_string())).collect(),
                    )
                })
                .collect()
        });
        let embed = self.embed.as_ref().map(|c| RawEmbed {
            seed: Some(c.rng_seed),
            final_round_digits: Some(c.final_round_digits),
            repulsion_strength: Some(c.repulsion_strength),
            spring_strength: Some(c.spring_strength),
            time_step: Some(c.time_step),
            phase1_iterations: Some(c.phase1_iterations),
            phase2_iterations: Some(c.phase2_iterations),
            max_restarts: Some(c.max_restarts),
        });
        let out = OutFile {
            mode: MODE_MAXIMAL_SIMPLICES,
            data: self.complex.maximal_input().to_vec(),
            dim: self.dim,
            desired_sq_lengths: lengths,
            coordinates,
            embed,
        };
        toml::to_string(&out).expect("description always serializes")
    }

    /// Rounding precision used for decimal output.
    pub fn round_digits(&self) -> u32 {
        self.embed
            .as_ref()
            .map_or(EmbedConfig::default().final_round_digits, |e| {
                e.final_round_digits
            })
    }
}
