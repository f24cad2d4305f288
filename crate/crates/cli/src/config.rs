//! Experiment config files: TOML sections `[line]`, `[blocks]`, `[recursive]`,
//! `[target]`, `[scan]` and `[estimate]`. Exact values are `"p/q"` strings (plain
//! integers are accepted too).

use construct::Mode;
use num_rational::BigRational;
use search::{EstimateMode, Strategy};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::parse::{line_col, rational};
use crate::CliError;

/// An exact rational read from `"p/q"` or an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frac(pub BigRational);

impl Serialize for Frac {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Frac {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Frac(BigRational::from_integer(i.into()))),
            Raw::Str(s) => rational(&s).map(Frac).ok_or_else(|| serde::de::Error::custom(format!("not a fraction: {s:?}"))),
        }
    }
}

fn default_theta() -> u64 {
    5
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSection {
    pub n: usize,
    /// One period of ratios.
    pub gamma: Vec<Frac>,
    #[serde(default = "default_theta")]
    pub theta: u64,
    pub seed: Option<u64>,
    pub mode: Option<Mode>,
    /// Treat `gamma` as `γ_1 … γ_{n−1}` and complete it with `n − 1` copies of `C_1`.
    #[serde(default)]
    pub complete_period: bool,
    /// Number of digits and floors echoed in the transcript.
    pub transcript: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSection {
    pub d: usize,
    pub m: usize,
    /// `d` rows of `m` or `m + 1` ratios.
    pub beta: Vec<Vec<Frac>>,
    /// Needed in strict mode, `1 < c₂ < (1+1/m)^{1/d}`.
    pub c2: Option<Frac>,
    #[serde(default = "default_theta")]
    pub theta: u64,
    pub seed: Option<u64>,
    pub mode: Option<Mode>,
    pub transcript: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecursiveSection {
    pub n: usize,
    pub d: usize,
    /// `γ_1 … γ_{n−d}`.
    pub gamma: Vec<Frac>,
    #[serde(default = "default_theta")]
    pub theta: u64,
    pub seed: Option<u64>,
    pub mode: Option<Mode>,
    /// Relaxed-mode stand-in for every `C_ℓ`.
    pub proxy: Option<Frac>,
    pub transcript: Option<usize>,
}

/// The scan target: a rational subspace given by `basis`, or the `[line]` construction
/// truncated at `level`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    pub basis: Option<String>,
    pub level: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub e: usize,
    #[serde(default = "one")]
    pub j: usize,
    pub height_sq_max: u64,
    pub strategy: Option<Strategy>,
    pub floor: Option<Frac>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateSection {
    pub e: usize,
    pub mode: Option<EstimateMode>,
    /// Range of `N` for the family `B_{N,e}` (familySlope).
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    /// Overrides the formula prediction.
    pub prediction: Option<Frac>,
    pub tolerance: Option<Frac>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub line: Option<LineSection>,
    pub blocks: Option<BlockSection>,
    pub recursive: Option<RecursiveSection>,
    pub target: Option<TargetSection>,
    pub scan: Option<ScanSection>,
    pub estimate: Option<EstimateSection>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
            CliError::Parse { line, column, msg: e.message().to_string() }
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn section<'a, T>(s: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
        s.as_ref().ok_or_else(|| CliError::Validation(format!("config has no [{name}] section")))
    }
}
