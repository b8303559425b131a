//! Sweep configuration: JSON schema, parsing, and validation.
//!
//! The file format is a single JSON object:
//!
//! ```json
//! {
//!   "matrix": {
//!     "class": "glued",
//!     "m": 100, "p": 10, "s": 2,
//!     "knob_sweep": [[1.15, 1.15], [2.15, 2.15]],
//!     "seed": 11
//!   },
//!   "algorithms": ["BCGS_PIP", "BCGS_PIP+"],
//!   "ios": ["HouseQR", "CholQR"],
//!   "mp_pair": ["single", "double"],
//!   "output_dir": "out"
//! }
//! ```
//!
//! `knob_sweep` entries are per-class knob tuples: `[t]` for `default`,
//! `[t1, t2]` for `glued` and `piled`, `[r, t]` (integers) for `monomial`.
//! `mp_pair` is required exactly when a mixed-precision algorithm is listed.
//! Unknown keys anywhere in the document are rejected.

use std::path::PathBuf;

use serde::Deserialize;
use thiserror::Error;

use blockgs::precision::InvalidPair;
use blockgs::testmat::SpecError;
use blockgs::{AlgorithmId, IntraorthId, Knobs, MatrixClass, MatrixSpec, PrecisionId, PrecisionPair};

/// Validated sweep configuration.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub class: MatrixClass,
    pub m: usize,
    pub p: usize,
    pub s: usize,
    pub sweep: Vec<Knobs>,
    pub seed: u64,
    pub algorithms: Vec<AlgorithmId>,
    pub ios: Vec<IntraorthId>,
    pub mp_pair: Option<PrecisionPair>,
    pub output_dir: PathBuf,
}

impl SweepConfig {
    /// The matrix spec for one sweep point.
    pub fn spec_at(&self, idx: usize) -> MatrixSpec {
        MatrixSpec {
            m: self.m,
            p: self.p,
            s: self.s,
            knobs: self.sweep[idx],
            seed: self.seed,
        }
    }
}

/// Everything that can go wrong while reading a configuration.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed configuration: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("unknown matrix class {0:?}")]
    UnknownClass(String),
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error("unknown intraorthogonalization {0:?}")]
    UnknownIo(String),
    #[error("unknown precision {0:?}")]
    UnknownPrecision(String),
    #[error(transparent)]
    InvalidPair(#[from] InvalidPair),
    #[error("mp_pair must list exactly [low, high]")]
    PairArity,
    #[error("{0} must be non-empty")]
    Empty(&'static str),
    #[error("knob tuple {got:?} invalid for class {class}: expected {expected}")]
    KnobShape {
        class: MatrixClass,
        expected: &'static str,
        got: Vec<f64>,
    },
    #[error("invalid matrix spec: {0}")]
    InvalidSpec(#[from] SpecError),
    #[error("algorithm {0} is mixed-precision but no mp_pair is configured")]
    MissingPair(AlgorithmId),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    matrix: RawMatrix,
    algorithms: Vec<String>,
    ios: Vec<String>,
    #[serde(default)]
    mp_pair: Option<Vec<String>>,
    output_dir: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrix {
    class: String,
    m: usize,
    p: usize,
    s: usize,
    knob_sweep: Vec<Vec<f64>>,
    seed: u64,
}

fn knobs_from_tuple(class: MatrixClass, tuple: &[f64]) -> Result<Knobs, ConfigError> {
    let bad = |expected: &'static str| ConfigError::KnobShape {
        class,
        expected,
        got: tuple.to_vec(),
    };
    match class {
        MatrixClass::Default => match tuple {
            [t] => Ok(Knobs::Default { t: *t }),
            _ => Err(bad("[t]")),
        },
        MatrixClass::Glued => match tuple {
            [t1, t2] => Ok(Knobs::Glued { t1: *t1, t2: *t2 }),
            _ => Err(bad("[t1, t2]")),
        },
        MatrixClass::Piled => match tuple {
            [t1, t2] => Ok(Knobs::Piled { t1: *t1, t2: *t2 }),
            _ => Err(bad("[t1, t2]")),
        },
        MatrixClass::Monomial => match tuple {
            [r, t] if r.fract() == 0.0 && t.fract() == 0.0 && *r >= 1.0 && *t >= 1.0 => {
                Ok(Knobs::Monomial {
                    r: *r as usize,
                    t: *t as usize,
                })
            }
            _ => Err(bad("[r, t] with positive integers")),
        },
    }
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text)?;

    let class = MatrixClass::parse(&raw.matrix.class)
        .ok_or_else(|| ConfigError::UnknownClass(raw.matrix.class.clone()))?;

    if raw.matrix.knob_sweep.is_empty() {
        return Err(ConfigError::Empty("matrix.knob_sweep"));
    }
    if raw.algorithms.is_empty() {
        return Err(ConfigError::Empty("algorithms"));
    }
    if raw.ios.is_empty() {
        return Err(ConfigError::Empty("ios"));
    }

    let algorithms = raw
        .algorithms
        .iter()
        .map(|s| AlgorithmId::parse(s).ok_or_else(|| ConfigError::UnknownAlgorithm(s.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let ios = raw
        .ios
        .iter()
        .map(|s| IntraorthId::parse(s).ok_or_else(|| ConfigError::UnknownIo(s.clone())))
        .collect::<Result<Vec<_>, _>>()?;

    let mp_pair = match &raw.mp_pair {
        None => None,
        Some(names) => {
            let [low, high] = match names.as_slice() {
                [l, h] => [l, h],
                _ => return Err(ConfigError::PairArity),
            };
            let low = PrecisionId::parse(low)
                .ok_or_else(|| ConfigError::UnknownPrecision(low.clone()))?;
            let high = PrecisionId::parse(high)
                .ok_or_else(|| ConfigError::UnknownPrecision(high.clone()))?;
            Some(PrecisionPair::new(low, high)?)
        }
    };

    if let Some(alg) = algorithms
        .iter()
        .find(|a| a.is_mixed_precision() && mp_pair.is_none())
    {
        return Err(ConfigError::MissingPair(*alg));
    }

    let sweep = raw
        .matrix
        .knob_sweep
        .iter()
        .map(|tuple| knobs_from_tuple(class, tuple))
        .collect::<Result<Vec<_>, _>>()?;

    let config = SweepConfig {
        class,
        m: raw.matrix.m,
        p: raw.matrix.p,
        s: raw.matrix.s,
        sweep,
        seed: raw.matrix.seed,
        algorithms,
        ios,
        mp_pair,
        output_dir: PathBuf::from(raw.output_dir),
    };

    // Every sweep point must describe a generable matrix.
    for idx in 0..config.sweep.len() {
        config.spec_at(idx).validate()?;
    }

    Ok(config)
}
