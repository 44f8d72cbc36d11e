//! Flat report objects shared by the text and JSON output paths. Both
//! renderings carry the same verdict fields so they can be diffed in
//! golden-file tests.

use serde::Serialize;

use crate::classifier::{Hypothesis, Outcome, Verdict};
use crate::probe::CoverageReport;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct CoverageSection {
    pub ratio_num: u64,
    pub ratio_den: u64,
    pub spectrum: Vec<i64>,
    pub spectrum_bounded_hint: bool,
    pub covered_count: u64,
    pub modulus: u64,
    pub precision: u32,
    pub terms_used: usize,
}

impl From<&CoverageReport> for CoverageSection {
    fn from(r: &CoverageReport) -> Self {
        CoverageSection {
            ratio_num: r.coverage_ratio.0,
            ratio_den: r.coverage_ratio.1,
            spectrum: r.valuation_spectrum.iter().copied().collect(),
            spectrum_bounded_hint: r.spectrum_bounded_hint,
            covered_count: r.covered.len() as u64,
            modulus: r.modulus,
            precision: r.precision,
            terms_used: r.terms_used,
        }
    }
}

/// One invocation, one flat report object.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hypotheses: Vec<Hypothesis>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<CoverageSection>,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
}

impl Report {
    pub fn new() -> Self {
        Report {
            outcome: None,
            rule: None,
            hypotheses: Vec::new(),
            notes: Vec::new(),
            coverage: None,
            version: VERSION.to_string(),
            input: None,
        }
    }

    pub fn with_verdict(mut self, verdict: &Verdict) -> Self {
        self.outcome = Some(verdict.outcome);
        self.rule = Some(verdict.rule.clone());
        self.hypotheses = verdict.hypotheses.clone();
        self.notes = verdict.notes.clone();
        self
    }

    pub fn with_coverage(mut self, coverage: &CoverageReport) -> Self {
        self.coverage = Some(coverage.into());
        self
    }

    pub fn with_input(mut self, input: impl Into<String>) -> Self {
        self.input = Some(input.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(outcome) = self.outcome {
            out.push_str(&format!("outcome: {outcome}\n"));
        }
        if let Some(rule) = &self.rule {
            out.push_str(&format!("rule: {rule}\n"));
        }
        for h in &self.hypotheses {
            out.push_str(&format!("hypothesis: {} [checked: {}]\n", h.condition, h.value));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        if let Some(c) = &self.coverage {
            out.push_str(&format!(
                "coverage: {}/{} of residues mod {} (p^{}), {} terms\n",
                c.ratio_num, c.ratio_den, c.modulus, c.precision, c.terms_used
            ));
            out.push_str(&format!(
                "spectrum: {:?} (bounded hint: {})\n",
                c.spectrum, c.spectrum_bounded_hint
            ));
        }
        if let Some(input) = &self.input {
            out.push_str(&format!("input: {input}\n"));
        }
        out.push_str(&format!("version: {}\n", self.version));
        out
    }
}

impl Default for Report {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::classify;
    use crate::recurrence::RecurrenceSpec;
    use num_bigint::BigInt;

    #[test]
    fn text_and_json_carry_the_same_verdict_fields() {
        let spec = RecurrenceSpec::general(
            vec![BigInt::from(1), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(1)],
        )
        .unwrap();
        let verdict = classify(&spec, 5).unwrap();
        let report = Report::new().with_verdict(&verdict);
        let text = report.to_text();
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["outcome"], "Dense");
        assert!(text.contains("outcome: Dense"));
        assert_eq!(json["rule"], verdict.rule.as_str());
        assert!(text.contains(&format!("rule: {}", verdict.rule)));
        for h in &verdict.hypotheses {
            assert!(text.contains(&h.condition));
        }
        assert_eq!(
            json["hypotheses"].as_array().unwrap().len(),
            verdict.hypotheses.len()
        );
    }
}
