//! Report documents: exact results as `num/den` strings, decimals only in
//! fields marked `approx`. Field order is fixed by the struct definitions so
//! identical inputs produce byte-identical output (the `generated_unix`
//! timestamp is the one excluded field).

use ldcore::algebra::Poly;
use ldcore::cfrac::{CFrac, CfStatus};
use serde::{Deserialize, Serialize};
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub generated_unix: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
}

impl Metadata {
    pub fn new() -> Self {
        Metadata {
            tool: "ldcli".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            generated_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            p: None,
            alphabet: None,
            gamma: None,
            psi: None,
            f: None,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GammaRecord {
    pub alphabet_size: u64,
    pub base: u64,
    /// gamma = log(alphabet_size)/log(base); decimal annotation only.
    pub approx: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub n: i64,
    pub exponent: i64,
    pub cylinder_count: usize,
    /// Exact rational as `num/den`.
    pub measure: String,
    pub formula: String,
    pub matches: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PairwiseRecord {
    pub m: i64,
    pub n: i64,
    pub measure: String,
    pub regime: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BcRecord {
    pub n_max: i64,
    pub ratio: String,
    pub ratio_approx: f64,
    /// Set when the enumerated path also ran and agreed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumerated_agrees: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub n: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
    pub term_approx: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SeriesSection {
    pub terms: Vec<SeriesRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partial_sum: Option<String>,
    pub partial_sum_approx: f64,
    pub trend: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct KhintchineReport {
    pub metadata: Metadata,
    pub records: Vec<MeasureRecord>,
    pub pairwise: Vec<PairwiseRecord>,
    pub bc_ratio: Vec<BcRecord>,
    pub series: SeriesSection,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    pub u: i64,
    pub v: i64,
    pub digits: String,
    pub value_num: Vec<u64>,
    pub value_den: Vec<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StageErrorRecord {
    pub stage: usize,
    pub error_exponent: i64,
    pub below_psi: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TauRecord {
    pub stage: usize,
    pub denominator_degree: i64,
    pub tau: String,
    pub tau_approx: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WindowSection {
    pub c: String,
    pub all_pass: bool,
    pub stages_checked: usize,
    pub convergents_checked: usize,
    pub product_bound_attained: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConstructReport {
    pub metadata: Metadata,
    pub u: Vec<i64>,
    pub v: Vec<i64>,
    pub stages: Vec<StageRecord>,
    pub stage_errors: Vec<StageErrorRecord>,
    pub tau_estimates: Vec<TauRecord>,
    pub window: WindowSection,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConvergentRecord {
    pub j: usize,
    pub p: Vec<u64>,
    pub q: Vec<u64>,
    pub q_degree: i64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CfReport {
    pub metadata: Metadata,
    /// Coefficient lists in ascending power: entry 0 is a_0.
    pub cf: Vec<Vec<u64>>,
    pub status: String,
    pub convergents: Vec<ConvergentRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FoldReport {
    pub metadata: Metadata,
    pub input: Vec<Vec<u64>>,
    pub t: Vec<u64>,
    pub folded: Vec<Vec<u64>>,
    pub value_num: Vec<u64>,
    pub value_den: Vec<u64>,
    pub identity_checked: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TauEntry {
    pub j: usize,
    pub denominator_degree: i64,
    pub next_quotient_degree: i64,
    pub tau: String,
    pub tau_approx: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExponentReport {
    pub metadata: Metadata,
    pub cf_status: String,
    pub quotients_used: usize,
    pub per_j: Vec<TauEntry>,
    pub estimate: String,
    pub estimate_approx: f64,
    pub max_denominator_degree: i64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DimReport {
    pub metadata: Metadata,
    pub gamma: GammaRecord,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MeasureReport {
    pub metadata: Metadata,
    pub cylinder_count: usize,
    pub measure: String,
    pub measure_approx: f64,
}

pub fn cf_to_lists(cf: &CFrac) -> Vec<Vec<u64>> {
    let mut out = vec![cf.integer_part().coeff_vec()];
    for q in cf.quotients() {
        out.push(q.coeff_vec());
    }
    out
}

pub fn cf_from_lists(p: u64, lists: &[Vec<u64>]) -> Result<CFrac, String> {
    if lists.is_empty() {
        return Err("continued fraction needs at least the integer part".into());
    }
    let a0 = Poly::new(p, &lists[0]).map_err(|e| e.to_string())?;
    let quotients: Result<Vec<Poly>, String> = lists[1..]
        .iter()
        .map(|c| Poly::new(p, c).map_err(|e| e.to_string()))
        .collect();
    CFrac::new(a0, quotients?).map_err(|e| e.to_string())
}

pub fn status_str(status: CfStatus) -> &'static str {
    match status {
        CfStatus::Complete => "complete",
        CfStatus::PrecisionExhausted => "precision_exhausted",
        CfStatus::TermCapReached => "term_cap_reached",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn khintchine_report_round_trips_through_its_schema() {
        let doc = KhintchineReport {
            metadata: Metadata::new(),
            records: vec![MeasureRecord {
                n: 1,
                exponent: 1,
                cylinder_count: 1,
                measure: "1/2".into(),
                formula: "1/2".into(),
                matches: true,
            }],
            pairwise: vec![],
            bc_ratio: vec![BcRecord {
                n_max: 1,
                ratio: "1/2".into(),
                ratio_approx: 0.5,
                enumerated_agrees: Some(true),
            }],
            series: SeriesSection {
                terms: vec![],
                partial_sum: None,
                partial_sum_approx: 0.0,
                trend: "constant".into(),
            },
        };
        let text = serde_json::to_string(&doc).unwrap();
        let back: KhintchineReport = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn cf_lists_round_trip() {
        let lists = vec![vec![], vec![0, 2], vec![0, 1]];
        let cf = cf_from_lists(3, &lists).unwrap();
        assert_eq!(cf_to_lists(&cf), lists);
        assert!(cf_from_lists(3, &[vec![1], vec![2]]).is_err());
    }
}
