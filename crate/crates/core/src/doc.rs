//! On-disk document formats: arrangements (field + curve list or family
//! reference) and experiment sweeps. JSON schemas are versioned; writers
//! emit deterministic bytes for fixed inputs.

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_bivar, FieldDesc};
use crate::counting::Arrangement;
use crate::curves::PlaneCurve;
use crate::error::{Error, Result};
use crate::families::{FamilyParams, FamilyRegistry};

pub const ARRANGEMENT_SCHEMA: &str = "curvetan/arrangement/1";

/// One curve entry: explicit polynomial text, or a family reference that
/// expands on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveEntry {
    Poly { poly: String },
    Family { family: String, params: FamilyParamsDoc },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FamilyParamsDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
}

impl FamilyParamsDoc {
    pub fn to_params(&self, seed: u64) -> FamilyParams {
        FamilyParams { p: self.p, q: self.q, n: self.n, m: self.m, seed }
    }

    pub fn from_params(params: &FamilyParams) -> Self {
        FamilyParamsDoc { p: params.p, q: params.q, n: params.n, m: params.m }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrangementDoc {
    pub schema: String,
    pub id: String,
    pub field: FieldDesc,
    pub d_max: u32,
    pub seed: u64,
    pub curves: Vec<CurveEntry>,
}

impl ArrangementDoc {
    /// Snapshot of an in-memory arrangement with explicit polynomials.
    pub fn from_arrangement(arr: &Arrangement) -> ArrangementDoc {
        ArrangementDoc {
            schema: ARRANGEMENT_SCHEMA.into(),
            id: arr.id.clone(),
            field: FieldDesc::from_field(arr.field),
            d_max: arr.d_max(),
            seed: arr.seed,
            curves: arr
                .curves
                .iter()
                .map(|c| CurveEntry::Poly { poly: c.poly().to_string() })
                .collect(),
        }
    }

    /// Parse, expand family references, and validate.
    pub fn to_arrangement(&self) -> Result<Arrangement> {
        if self.schema != ARRANGEMENT_SCHEMA {
            return Err(Error::Parse(format!(
                "unsupported schema '{}', expected '{ARRANGEMENT_SCHEMA}'",
                self.schema
            )));
        }
        let field = self.field.to_field()?;
        let registry = FamilyRegistry::builtin();
        let mut curves: Vec<PlaneCurve> = vec![];
        for entry in &self.curves {
            match entry {
                CurveEntry::Poly { poly } => {
                    let p = parse_bivar(field, poly)?;
                    curves.push(PlaneCurve::new(p)?);
                }
                CurveEntry::Family { family, params } => {
                    let sub = registry.generate_by_name(family, &params.to_params(self.seed))?;
                    if sub.field != field {
                        return Err(Error::FieldMismatch(
                            field.to_string(),
                            sub.field.to_string(),
                        ));
                    }
                    curves.extend(sub.curves);
                }
            }
        }
        let arr = Arrangement::new(self.id.clone(), field, curves, self.seed)?;
        if arr.d_max() > self.d_max {
            return Err(Error::Validation(format!(
                "declared degree cap {} below actual degree {}",
                self.d_max,
                arr.d_max()
            )));
        }
        Ok(arr)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<ArrangementDoc> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A parameter sweep driving one counting kind over a family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentDoc {
    pub schema: String,
    pub family: String,
    /// Values of the swept parameter, interpreted per family (p for
    /// unit-circles, n otherwise).
    pub sweep: Vec<u64>,
    pub kind: String,
    #[serde(default = "default_s")]
    pub s: u32,
    #[serde(default)]
    pub seed: u64,
}

fn default_s() -> u32 {
    2
}

pub const EXPERIMENT_SCHEMA: &str = "curvetan/experiment/1";

impl ExperimentDoc {
    pub fn from_json(text: &str) -> Result<ExperimentDoc> {
        let doc: ExperimentDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.schema != EXPERIMENT_SCHEMA {
            return Err(Error::Parse(format!(
                "unsupported schema '{}', expected '{EXPERIMENT_SCHEMA}'",
                doc.schema
            )));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// Expand one sweep value into family parameters.
    pub fn params_for(&self, value: u64) -> FamilyParams {
        let mut params = FamilyParams { seed: self.seed, ..Default::default() };
        match self.family.as_str() {
            "unit-circles" => params.p = Some(value),
            "char2-parabolas" => {
                params.q = Some(16);
                params.n = Some(value);
            }
            "coaxial-pencils" => params.m = Some(value),
            _ => params.n = Some(value),
        }
        params
    }
}
