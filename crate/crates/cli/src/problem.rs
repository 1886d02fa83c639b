//! JSON problem files.

use std::collections::BTreeMap;

use eqnv_core::{parse_rational, Fan, FixedPointRecord, PairData, Rational, RationalVector, TDivisor};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Toric,
    Fixedpoints,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: u32,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toric: Option<ToricBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixedpoints: Option<FixedPointsBlock>,
}

/// Rationals are strings `"p"` or `"p/q"`; boundary and aux are sparse maps
/// from ray index to coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricBlock {
    pub dimension: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default)]
    pub boundary: BTreeMap<usize, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux: Option<BTreeMap<usize, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub trusted_complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointsBlock {
    /// Torus rank; needed only when it cannot be read off the records.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub records: Vec<RecordBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordBlock {
    pub cotangent: Vec<Vec<String>>,
    pub boundary_mults: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux_coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux_mults: Vec<Vec<u64>>,
}

/// A validated problem ready for the pipeline.
#[derive(Clone, Debug)]
pub enum Problem {
    Toric { pair: PairData, twist: RationalVector },
    Records { records: Vec<FixedPointRecord>, twist: RationalVector },
}

impl Problem {
    pub fn mode(&self) -> Mode {
        match self {
            Problem::Toric { .. } => Mode::Toric,
            Problem::Records { .. } => Mode::Fixedpoints,
        }
    }

    pub fn twist(&self) -> &RationalVector {
        match self {
            Problem::Toric { twist, .. } | Problem::Records { twist, .. } => twist,
        }
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed problem file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }

    pub fn validate(&self) -> Result<Problem, CliError> {
        if self.schema != SCHEMA_VERSION {
            return Err(CliError::Input(format!(
                "unsupported schema {}, expected {SCHEMA_VERSION}",
                self.schema
            )));
        }
        match (self.mode, &self.toric, &self.fixedpoints) {
            (Mode::Toric, Some(t), None) => t.validate(),
            (Mode::Fixedpoints, None, Some(f)) => f.validate(),
            (mode, _, _) => Err(CliError::Input(format!(
                "mode {mode:?} requires exactly its own block to be present"
            ))),
        }
    }
}

fn rational(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(CliError::from)
}

fn vector(coords: &[String]) -> Result<RationalVector, CliError> {
    RationalVector::parse(coords).map_err(CliError::from)
}

fn twist_or_zero(twist: &Option<Vec<String>>, dim: usize) -> Result<RationalVector, CliError> {
    let t = match twist {
        Some(t) => vector(t)?,
        None => RationalVector::zeros(dim),
    };
    if t.dim() != dim {
        return Err(CliError::Input(format!("twist has {} coordinates, expected {dim}", t.dim())));
    }
    Ok(t)
}

fn sparse_divisor(num_rays: usize, coeffs: &BTreeMap<usize, String>) -> Result<TDivisor, CliError> {
    let parsed = coeffs
        .iter()
        .map(|(&k, v)| Ok((k, rational(v)?)))
        .collect::<Result<BTreeMap<usize, Rational>, CliError>>()?;
    TDivisor::from_map(num_rays, &parsed).map_err(CliError::from)
}

impl ToricBlock {
    fn validate(&self) -> Result<Problem, CliError> {
        let mut fan = Fan::new(self.dimension, self.rays.clone(), self.max_cones.clone())?;
        if self.trusted_complete {
            fan = fan.trusted_complete();
        }
        let k = fan.rays().len();
        let boundary = sparse_divisor(k, &self.boundary)?;
        let aux = self.aux.as_ref().map(|a| sparse_divisor(k, a)).transpose()?;
        let twist = twist_or_zero(&self.twist, self.dimension)?;
        let pair = PairData::new(fan, boundary, aux)?;
        Ok(Problem::Toric { pair, twist })
    }
}

impl FixedPointsBlock {
    fn validate(&self) -> Result<Problem, CliError> {
        let dim = self
            .dimension
            .or_else(|| self.records.iter().flat_map(|r| r.cotangent.first()).map(Vec::len).next())
            .or_else(|| self.twist.as_ref().map(Vec::len))
            .ok_or_else(|| CliError::Input("cannot determine the torus rank; set \"dimension\"".into()))?;
        if self.records.is_empty() {
            return Err(CliError::Input("no fixed-point records".into()));
        }
        let records = self
            .records
            .iter()
            .map(|r| {
                let cotangent = r.cotangent.iter().map(|c| vector(c)).collect::<Result<Vec<_>, _>>()?;
                let boundary = r.boundary_mults.iter().map(|s| rational(s)).collect::<Result<Vec<_>, _>>()?;
                let aux = r.aux_coeffs.iter().map(|s| rational(s)).collect::<Result<Vec<_>, _>>()?;
                Ok(FixedPointRecord::new(dim, cotangent, boundary)?.with_aux(aux, r.aux_mults.clone())?)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let twist = twist_or_zero(&self.twist, dim)?;
        Ok(Problem::Records { records, twist })
    }
}
