//! Scenario files: a JSON document describing `(Ω, μ)`, `K`, the frame and
//! the trial budget of a verification run.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "atoms": 3,
//!   "weights": "uniform",
//!   "k_spec": { "kind": "diagonal", "values": [1, 0] },
//!   "frame_spec": { "kind": "explicit", "samples": [[0.7071, 0], [0.7071, 0], [0, 0]] },
//!   "trials": 100,
//!   "seed": 7
//! }
//! ```
//!
//! Complex scalars are written `[re, im]`; a bare number is read as a real
//! scalar. Matrices are row-major, and `samples[i]` is `F(ω_i)`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use kframe_core::frame::{
    generate_parseval_k_frame, generate_random_bessel, random_k_operator, KOperator, SampledFrame,
};
use kframe_core::linalg::{HVector, LinOperator, Scalar};
use kframe_core::measure::MeasureSpace;
use kframe_core::rng;

use crate::error::{CliError, Result};
use crate::suite::PropertyId;

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl ScalarRepr {
    pub fn value(self) -> Scalar {
        match self {
            Self::Real(re) => Scalar::new(re, 0.0),
            Self::Complex([re, im]) => Scalar::new(re, im),
        }
    }

    fn is_finite(self) -> bool {
        let z = self.value();
        z.re.is_finite() && z.im.is_finite()
    }
}

/// Equality is by value: `1` and `[1, 0]` are the same scalar.
impl PartialEq for ScalarRepr {
    fn eq(&self, other: &Self) -> bool {
        self.value() == other.value()
    }
}

impl From<Scalar> for ScalarRepr {
    fn from(z: Scalar) -> Self {
        Self::Complex([z.re, z.im])
    }
}

impl Serialize for ScalarRepr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let z = self.value();
        [z.re, z.im].serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weights {
    Named(String),
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "SpecRepr")]
pub enum KSpec {
    Identity,
    Diagonal { values: Vec<ScalarRepr> },
    RandomRank { rank: usize, seed: u64 },
    Explicit { matrix: Vec<Vec<ScalarRepr>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "SpecRepr")]
pub enum FrameSpec {
    GenerateParsevalK { seed: u64 },
    Explicit { samples: Vec<Vec<ScalarRepr>> },
    RandomBessel { seed: u64 },
}

/// Flat form of the tagged specs. Internally tagged enums buffer their
/// content before dispatching, which hides field paths from diagnostics;
/// reading every field into one struct keeps them (`k_spec.rank`, ...).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecRepr {
    kind: String,
    values: Option<Vec<ScalarRepr>>,
    rank: Option<usize>,
    seed: Option<u64>,
    matrix: Option<Vec<Vec<ScalarRepr>>>,
    samples: Option<Vec<Vec<ScalarRepr>>>,
}

impl SpecRepr {
    fn take<T>(field: &mut Option<T>, name: &str, kind: &str) -> std::result::Result<T, String> {
        field.take().ok_or_else(|| format!("missing field `{name}` for kind `{kind}`"))
    }

    /// Fails if any field not consumed by the chosen kind was given.
    fn finish(self) -> std::result::Result<(), String> {
        let extra: Vec<&str> = [
            ("values", self.values.is_some()),
            ("rank", self.rank.is_some()),
            ("seed", self.seed.is_some()),
            ("matrix", self.matrix.is_some()),
            ("samples", self.samples.is_some()),
        ]
        .iter()
        .filter(|(_, present)| *present)
        .map(|(name, _)| *name)
        .collect();
        if extra.is_empty() {
            Ok(())
        } else {
            Err(format!("field(s) {} not used by kind `{}`", extra.join(", "), self.kind))
        }
    }
}

impl TryFrom<SpecRepr> for KSpec {
    type Error = String;

    fn try_from(mut r: SpecRepr) -> std::result::Result<Self, String> {
        let kind = r.kind.clone();
        let spec = match kind.as_str() {
            "identity" => KSpec::Identity,
            "diagonal" => KSpec::Diagonal {
                values: SpecRepr::take(&mut r.values, "values", &kind)?,
            },
            "random_rank" => KSpec::RandomRank {
                rank: SpecRepr::take(&mut r.rank, "rank", &kind)?,
                seed: SpecRepr::take(&mut r.seed, "seed", &kind)?,
            },
            "explicit" => KSpec::Explicit {
                matrix: SpecRepr::take(&mut r.matrix, "matrix", &kind)?,
            },
            other => {
                return Err(format!(
                    "unknown kind `{other}`; expected identity, diagonal, random_rank or explicit"
                ))
            }
        };
        r.finish()?;
        Ok(spec)
    }
}

impl TryFrom<SpecRepr> for FrameSpec {
    type Error = String;

    fn try_from(mut r: SpecRepr) -> std::result::Result<Self, String> {
        let kind = r.kind.clone();
        let spec = match kind.as_str() {
            "generate_parseval_k" => FrameSpec::GenerateParsevalK {
                seed: SpecRepr::take(&mut r.seed, "seed", &kind)?,
            },
            "random_bessel" => FrameSpec::RandomBessel {
                seed: SpecRepr::take(&mut r.seed, "seed", &kind)?,
            },
            "explicit" => FrameSpec::Explicit {
                samples: SpecRepr::take(&mut r.samples, "samples", &kind)?,
            },
            other => {
                return Err(format!(
                    "unknown kind `{other}`; expected generate_parseval_k, explicit or random_bessel"
                ))
            }
        };
        r.finish()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub dim: usize,
    pub atoms: usize,
    pub weights: Weights,
    pub k_spec: KSpec,
    pub frame_spec: FrameSpec,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub trials: usize,
    pub seed: u64,
    /// Index of the first trial; witnesses set it to replay a single trial.
    #[serde(default)]
    pub trial_offset: u64,
}

/// One concrete `(Ω, μ, K, F)` drawn for a trial.
#[derive(Debug, Clone)]
pub struct Instance {
    pub k: KOperator,
    pub frame: SampledFrame,
}

impl Scenario {
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let scenario: Scenario = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            CliError::Parse {
                path: origin.to_string(),
                field,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Checks every cross-field invariant, reporting the offending field path.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(CliError::semantic("dim", "dim must be ≥ 1"));
        }
        if self.atoms == 0 {
            return Err(CliError::semantic("atoms", "atoms must be ≥ 1"));
        }
        match &self.weights {
            Weights::Named(name) if name == "uniform" => {}
            Weights::Named(name) => {
                return Err(CliError::semantic(
                    "weights",
                    format!("expected \"uniform\" or an array of positive numbers, got \"{name}\""),
                ))
            }
            Weights::Explicit(w) => {
                if w.len() != self.atoms {
                    return Err(CliError::semantic(
                        "weights",
                        format!("expected {} weights, got {}", self.atoms, w.len()),
                    ));
                }
                if let Some(i) = w.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
                    return Err(CliError::semantic(format!("weights[{i}]"), "weights must be positive"));
                }
            }
        }

        let k_rank = match &self.k_spec {
            KSpec::Identity => self.dim,
            KSpec::Diagonal { values } => {
                if values.len() != self.dim {
                    return Err(CliError::semantic(
                        "k_spec.values",
                        format!("expected {} diagonal entries, got {}", self.dim, values.len()),
                    ));
                }
                check_finite(values, "k_spec.values")?;
                self.k_operator_fixed()?.rank()
            }
            KSpec::RandomRank { rank, .. } => {
                if *rank > self.dim {
                    return Err(CliError::semantic(
                        "k_spec.rank",
                        format!("rank {rank} exceeds dim {}", self.dim),
                    ));
                }
                *rank
            }
            KSpec::Explicit { matrix } => {
                check_shape(matrix, self.dim, self.dim, "k_spec.matrix")?;
                self.k_operator_fixed()?.rank()
            }
        };

        match &self.frame_spec {
            FrameSpec::Explicit { samples } => check_shape(samples, self.atoms, self.dim, "frame_spec.samples")?,
            FrameSpec::GenerateParsevalK { .. } if self.atoms < k_rank => {
                return Err(CliError::semantic(
                    "frame_spec",
                    format!("{} atoms cannot carry a Parseval K-frame for rank(K) = {k_rank}", self.atoms),
                ))
            }
            _ => {}
        }

        for (id, tol) in &self.tolerances {
            if id.parse::<PropertyId>().is_err() {
                return Err(CliError::semantic(
                    format!("tolerances.{id}"),
                    format!("unknown property id; valid ids: {}", PropertyId::all_ids().join(", ")),
                ));
            }
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(CliError::semantic(format!("tolerances.{id}"), "tolerance must be positive"));
            }
        }
        Ok(())
    }

    pub fn measure_space(&self) -> Result<MeasureSpace> {
        let weights = match &self.weights {
            Weights::Explicit(w) => w.clone(),
            Weights::Named(_) => vec![1.0; self.atoms],
        };
        Ok(MeasureSpace::new(weights)?)
    }

    fn k_operator_fixed(&self) -> Result<KOperator> {
        let op = match &self.k_spec {
            KSpec::Identity => LinOperator::identity(self.dim)?,
            KSpec::Diagonal { values } => {
                LinOperator::diagonal(&values.iter().map(|v| v.value()).collect::<Vec<_>>())?
            }
            KSpec::Explicit { matrix } => LinOperator::from_rows(&to_rows(matrix))?,
            KSpec::RandomRank { .. } => unreachable!("random K depends on the trial"),
        };
        Ok(KOperator::new(op)?)
    }

    /// Builds the instance of trial `trial` (absolute index). Random specs
    /// draw from a stream derived from their own seed and the trial index.
    pub fn instance(&self, trial: u64) -> Result<Instance> {
        let space = self.measure_space()?.shared();
        let k = match &self.k_spec {
            KSpec::RandomRank { rank, seed } => {
                let mut stream = rng::trial_stream(*seed, trial);
                random_k_operator(&mut stream, self.dim, *rank)?
            }
            _ => self.k_operator_fixed()?,
        };
        let frame = match &self.frame_spec {
            FrameSpec::GenerateParsevalK { seed } => {
                generate_parseval_k_frame(&k, self.atoms, space, rng::derive_seed(*seed, trial))?
            }
            FrameSpec::RandomBessel { seed } => {
                generate_random_bessel(self.dim, self.atoms, space, rng::derive_seed(*seed, trial))?
            }
            FrameSpec::Explicit { samples } => {
                let vectors = to_rows(samples)
                    .into_iter()
                    .map(HVector::new)
                    .collect::<kframe_core::Result<Vec<_>>>()?;
                SampledFrame::new(space, &vectors)?
            }
        };
        Ok(Instance { k, frame })
    }
}

fn to_rows(rows: &[Vec<ScalarRepr>]) -> Vec<Vec<Scalar>> {
    rows.iter().map(|row| row.iter().map(|v| v.value()).collect()).collect()
}

fn check_finite(values: &[ScalarRepr], field: &str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(CliError::semantic(format!("{field}[{i}]"), "entries must be finite")),
        None => Ok(()),
    }
}

fn check_shape(rows: &[Vec<ScalarRepr>], n_rows: usize, n_cols: usize, field: &str) -> Result<()> {
    if rows.len() != n_rows {
        return Err(CliError::semantic(field, format!("expected {n_rows} rows, got {}", rows.len())));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n_cols {
            return Err(CliError::semantic(
                format!("{field}[{i}]"),
                format!("expected {n_cols} entries, got {}", row.len()),
            ));
        }
        check_finite(row, &format!("{field}[{i}]"))?;
    }
    Ok(())
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Scenario::from_json(&text, &path.display().to_string())
}

/// Built-in fixture scenarios, `W1` and `W1p`.
pub fn fixture_scenario(name: &str) -> Option<Scenario> {
    let (x, k) = match name {
        "W1" => (std::f64::consts::FRAC_1_SQRT_2, 1.0),
        "W1p" => (std::f64::consts::SQRT_2, 2.0),
        _ => return None,
    };
    let real = |v: f64| ScalarRepr::from(Scalar::new(v, 0.0));
    Some(Scenario {
        dim: 2,
        atoms: 3,
        weights: Weights::Named("uniform".into()),
        k_spec: KSpec::Diagonal {
            values: vec![real(k), real(0.0)],
        },
        frame_spec: FrameSpec::Explicit {
            samples: vec![vec![real(x), real(0.0)], vec![real(x), real(0.0)], vec![real(0.0), real(0.0)]],
        },
        tolerances: BTreeMap::new(),
        trials: 100,
        seed: 7,
        trial_offset: 0,
    })
}
