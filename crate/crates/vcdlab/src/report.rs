//! Experiment report envelopes and the CSV layout shared by the sweep
//! commands. Payloads are deterministic for a fixed config and seed; wall
//! clock time is recorded only when explicitly requested, so byte-identical
//! reruns stay byte-identical.

use std::collections::BTreeMap;

use serde::Serialize;

/// JSON envelope written once per experiment.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport<T: Serialize> {
    pub instance_id: String,
    pub p: usize,
    pub params: BTreeMap<String, String>,
    pub result: T,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u128>,
}

impl<T: Serialize> ExperimentReport<T> {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

/// One row of sweep output.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub family: String,
    pub p: usize,
    pub q: usize,
    pub n: usize,
    pub count: usize,
}

pub const SWEEP_CSV_HEADER: &str = "family,p,q,n,count,log_n,log_count";

/// Renders sweep rows as CSV with fixed-precision logs; rows are emitted in
/// the order given, which callers keep sorted by `n`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in rows {
        let log_n = (row.n as f64).ln();
        let log_count = (row.count as f64).ln();
        out.push_str(&format!(
            "{},{},{},{},{},{log_n:.12},{log_count:.12}\n",
            row.family, row.p, row.q, row.n, row.count
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout_is_stable() {
        let rows = vec![
            SweepRow {
                family: "grid".into(),
                p: 1,
                q: 1,
                n: 4,
                count: 10,
            },
            SweepRow {
                family: "grid".into(),
                p: 1,
                q: 1,
                n: 6,
                count: 26,
            },
        ];
        let csv = sweep_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("grid,1,1,4,10,"));
        assert_eq!(csv, sweep_csv(&rows));
    }

    #[test]
    fn report_omits_runtime_unless_present() {
        let report = ExperimentReport {
            instance_id: "grid-3".into(),
            p: 1,
            params: BTreeMap::new(),
            result: 4usize,
            seed: 0,
            runtime_ms: None,
        };
        assert!(!report.to_json().contains("runtime_ms"));
        let timed = ExperimentReport {
            runtime_ms: Some(12),
            ..report
        };
        assert!(timed.to_json().contains("runtime_ms"));
    }
}
