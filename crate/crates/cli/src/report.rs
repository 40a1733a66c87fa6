//! The machine-readable run report emitted with `--json`.

use serde::Serialize;
use sha2::{Digest, Sha256};
use smallcover::cover::GenusReport;
use smallcover::pi1::{AbelianInvariants, Certificate};

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Default, Serialize)]
pub struct Digests {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polytope: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct BeltSummary {
    pub k: usize,
    pub count: usize,
    pub belts: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize)]
pub struct PresentationReport {
    pub method: String,
    pub generators: usize,
    pub relators: usize,
    pub total_length: usize,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capped: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct InvariantsReport {
    pub method: String,
    pub abelian: AbelianInvariants,
    pub rendered: String,
}

#[derive(Debug, Serialize)]
pub struct HomCount {
    pub method: String,
    pub target: String,
    /// `None` when the search exceeded the cap.
    pub count: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct Validation {
    pub polytope: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<bool>,
    pub messages: Vec<String>,
}

#[derive(Debug, Default, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Digests,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_vector: Option<[usize; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_vector: Option<[usize; 4]>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub belts: Vec<BeltSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pogorelov: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<Validation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<GenusReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub presentations: Vec<PresentationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub invariants: Vec<InvariantsReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hom_counts: Vec<HomCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    /// Generated data (polytope, bundle), for `gen` and `color`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<serde_json::Value>,
    /// Wall-clock milliseconds; only with `--timing`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}
