//! JSON schemas for the file formats and result records.
//!
//! Infinite exponents appear in JSON as the string `"inf"` (accepted in any
//! case, also `"INF"`); everything else is a plain number. Serialization of
//! floats goes through `serde_json`, which emits the shortest decimal that
//! round-trips, so rewriting a file is lossless.

use serde::{Deserialize, Serialize};

use rearrange_core::dilation::{LinearProfile, NoncompactnessCertificate, RadialProfile};
use rearrange_core::rearrangement::{SimpleFunction, StepProfile};
use rearrange_core::separation::{Counterexample, SeparationCertificate};
use rearrange_core::superadd::{Classification, SuperaddVerdict};
use rearrange_core::weights::{EvalOutcome, Weight};

/// A float that may be infinite, encoded as `"inf"` in JSON.
pub mod ext_real {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn parse(text: &str) -> Option<f64> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Some(f64::INFINITY);
        }
        t.parse().ok()
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) => parse(&t).ok_or_else(|| D::Error::custom(format!("not a number: {t:?}"))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SimpleFunctionJson {
    pub pieces: Vec<(f64, f64)>,
    pub total_mass: f64,
}

impl SimpleFunctionJson {
    pub fn to_core(&self) -> Result<SimpleFunction, String> {
        SimpleFunction::new(&self.pieces, self.total_mass).map_err(|e| e.to_string())
    }

    pub fn from_core(f: &SimpleFunction) -> Self {
        Self {
            pieces: f.pieces().to_vec(),
            total_mass: f.total_mass(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StepProfileJson {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    pub total_mass: f64,
}

impl StepProfileJson {
    pub fn to_core(&self) -> Result<StepProfile, String> {
        StepProfile::from_breakpoints(&self.breakpoints, &self.values, self.total_mass)
            .map_err(|e| e.to_string())
    }

    pub fn from_core(p: &StepProfile) -> Self {
        Self {
            breakpoints: p.breakpoints().to_vec(),
            values: p.values().to_vec(),
            total_mass: p.total_mass(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LinearProfileJson {
    pub nodes: Vec<(f64, f64)>,
    pub total_mass: f64,
    #[serde(default)]
    pub step_embedded: bool,
}

impl LinearProfileJson {
    pub fn to_core(&self) -> Result<RadialProfile, String> {
        let p = LinearProfile::new(&self.nodes, self.total_mass).map_err(|e| e.to_string())?;
        Ok(RadialProfile::with_step_flag(p, self.step_embedded))
    }

    pub fn from_core(p: &RadialProfile) -> Self {
        Self {
            nodes: p.profile().nodes().to_vec(),
            total_mass: p.total_mass(),
            step_embedded: p.step_embedded(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightJson {
    Powerlog {
        #[serde(with = "ext_real")]
        p: f64,
        q: f64,
        alpha: f64,
        #[serde(rename = "M")]
        m: f64,
    },
    Tabulated {
        grid: Vec<f64>,
        values: Vec<f64>,
        #[serde(rename = "M")]
        m: f64,
    },
}

impl WeightJson {
    pub fn to_core(&self) -> Result<Weight, String> {
        match self {
            Self::Powerlog { p, q, alpha, m } => {
                Weight::power_log(*p, *q, *alpha, *m).map_err(|e| e.to_string())
            }
            Self::Tabulated { grid, values, m } => {
                Weight::tabulated(grid, values, *m).map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OutcomeJson {
    pub value: f64,
    pub abs_err_estimate: f64,
    pub method: &'static str,
}

impl OutcomeJson {
    pub fn from_core(o: &EvalOutcome) -> Self {
        Self {
            value: o.value,
            abs_err_estimate: o.abs_err_estimate,
            method: o.method.as_str(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CertificateJson {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub lambda0: f64,
    pub epsilon: f64,
}

impl CertificateJson {
    pub fn from_core(c: &SeparationCertificate) -> Self {
        Self {
            r: c.r_small,
            big_r: c.r_large,
            lambda0: c.lambda0,
            epsilon: c.epsilon,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerdictJson {
    pub classification: &'static str,
    pub gamma: f64,
    pub witness: Option<String>,
    pub constants: Option<(f64, f64)>,
}

impl VerdictJson {
    pub fn from_core(v: &SuperaddVerdict) -> Self {
        Self {
            classification: match v.classification {
                Classification::Superadditive => "superadditive",
                Classification::NotSuperadditive => "not_superadditive",
                Classification::Inconclusive => "inconclusive",
            },
            gamma: v.gamma,
            witness: v.witness.clone(),
            constants: v.constants,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FalsifyJson {
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_sum: Option<f64>,
}

impl FalsifyJson {
    pub fn from_core(c: Option<&Counterexample>) -> Self {
        match c {
            None => Self {
                found: false,
                trial: None,
                f: None,
                g: None,
                norm_f: None,
                norm_g: None,
                norm_sum: None,
            },
            Some(c) => Self {
                found: true,
                trial: Some(c.trial),
                f: Some(c.f.clone()),
                g: Some(c.g.clone()),
                norm_f: Some(c.norm_f),
                norm_g: Some(c.norm_g),
                norm_sum: Some(c.norm_sum),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct NoncompactnessJson {
    pub lambda: f64,
    pub kappas: Vec<f64>,
    pub support_radii: Vec<f64>,
    pub ln_support_radii: Vec<f64>,
    pub quasinorms: Vec<f64>,
    pub conditions_met: bool,
}

impl NoncompactnessJson {
    pub fn from_core(c: &NoncompactnessCertificate) -> Self {
        Self {
            lambda: c.lambda,
            kappas: c.kappas.clone(),
            support_radii: c.support_radii.clone(),
            ln_support_radii: c.ln_support_radii.clone(),
            quasinorms: c.quasinorms.clone(),
            conditions_met: c.conditions_met,
        }
    }
}

/// Failure report for `certify` runs that do not reach the requested level.
#[derive(Debug, Serialize)]
pub struct CertifyFailureJson {
    pub error: String,
    pub failing_kappa: f64,
    pub quasinorm: f64,
    pub lambda: f64,
}

pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable record");
    s.push('\n');
    s
}
