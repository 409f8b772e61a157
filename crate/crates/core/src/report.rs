//! Machine-readable run reports.
//!
//! Every command emits one [`Report`]. Two runs with the same inputs and seed
//! serialize identically once `runtime_ms` is cleared, see
//! [`Report::canonical_json`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::rank::{confidence_note, OracleInfo, RankOracle};
use crate::verify::{Certificate, SearchReport, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub theorem_or_conjecture: String,
    pub graph: String,
    pub numbers: BTreeMap<String, i64>,
    /// `pass`, `fail`, `inapplicable`, `none-found` or `counterexample`.
    pub verdict: String,
    /// Seed in hex, as accepted by `--seed`.
    pub seed: String,
    pub oracle: OracleInfo,
    pub confidence: String,
    pub runtime_ms: u64,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

pub fn seed_hex(seed: u64) -> String {
    format!("{seed:#x}")
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inapplicable => "inapplicable",
    }
}

impl Report {
    pub fn new(subject: &str, graph: &str, oracle: &RankOracle) -> Self {
        Report {
            theorem_or_conjecture: subject.to_string(),
            graph: graph.to_string(),
            numbers: BTreeMap::new(),
            verdict: "pass".into(),
            seed: seed_hex(oracle.seed),
            oracle: oracle.info(),
            confidence: confidence_note(oracle),
            runtime_ms: 0,
            details: serde_json::Value::Null,
        }
    }

    pub fn from_certificate(cert: &Certificate, graph: &str, oracle: &RankOracle) -> Self {
        let mut r = Report::new(&cert.theorem, graph, oracle);
        r.numbers = cert.numbers.clone();
        r.verdict = verdict_name(cert.verdict).into();
        r.details = serde_json::to_value(cert).expect("certificates serialize");
        r
    }

    pub fn from_search(search: &SearchReport, oracle: &RankOracle) -> Self {
        let mut r = Report::new(&search.conjecture.to_string(), "search stream", oracle);
        r.seed = seed_hex(search.seed);
        r.numbers.insert("d".into(), search.d as i64);
        r.numbers
            .insert("graphs_examined".into(), search.graphs_examined as i64);
        r.numbers.insert("skipped".into(), search.skipped as i64);
        r.verdict = if search.counterexample.is_some() {
            "counterexample"
        } else {
            "none-found"
        }
        .into();
        r.runtime_ms = search.runtime_ms;
        r.details = serde_json::to_value(search).expect("search reports serialize");
        if let Some(obj) = r.details.as_object_mut() {
            obj.remove("runtime_ms");
        }
        r
    }

    pub fn num(mut self, key: &str, value: i64) -> Self {
        self.numbers.insert(key.to_string(), value);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// JSON with `runtime_ms` zeroed.
    pub fn canonical_json(&self) -> String {
        Report {
            runtime_ms: 0,
            ..self.clone()
        }
        .to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use crate::verify::{verify_rank_ie, Certificate};

    #[test]
    fn certificate_report_round_trips() {
        let o = RankOracle::new(3, 2, 0xC0FFEE).unwrap();
        let g = graph::two_k5_sharing_vertex();
        let cert = verify_rank_ie(&g, &o);
        let mut r = Report::from_certificate(&cert, "two-k5-vertex", &o);
        r.runtime_ms = 17;
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let c: Certificate = serde_json::from_value(back.details).unwrap();
        assert!(c.revalidate());
        assert_eq!(back.seed, "0xc0ffee");
        r.runtime_ms = 99;
        let again = Report::from_certificate(&cert, "two-k5-vertex", &o);
        assert_eq!(r.canonical_json(), again.canonical_json());
    }
}
