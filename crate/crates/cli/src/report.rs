//! Deterministic report envelopes.
//!
//! Every CLI run emits one envelope: schema tag, command echo, seed, items,
//! pass summary, and a `content_hash` over the envelope with the wall clock
//! zeroed. Two runs with the same configuration and seed produce
//! byte-identical JSON except for `wall_ms`, and the hash makes that
//! checkable at a glance.
//!
//! All floats are rounded to 12 significant digits on the way out, which
//! pins the byte representation without hiding real differences: the
//! quadrature tolerances sit far below that precision. Non-finite values
//! serialize as the strings `"inf"`, `"-inf"`, `"nan"` since JSON has no
//! encoding for them.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::oracle::OracleSummary;
use crate::verify::{ChainReport, SweepRow, VerificationReport};

pub const SCHEMA: &str = "dimsob.report.v1";

/// Rounds to 12 significant digits and wraps in a JSON value; non-finite
/// values become strings.
pub fn num(v: f64) -> Value {
    if !v.is_finite() {
        let s = if v.is_nan() {
            "nan"
        } else if v > 0.0 {
            "inf"
        } else {
            "-inf"
        };
        return Value::String(s.to_string());
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("round-trip of a finite float");
    serde_json::Number::from_f64(rounded)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String("nan".to_string()))
}

/// 12-significant-digit text form used in CSV output.
pub fn sig(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".to_string()
        } else if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    format!("{v:.11e}")
}

/// One emitted result row.
pub enum ReportItem {
    Verification(VerificationReport),
    Constant { kind: String, n: u32, value: f64 },
    Sweep(SweepRow),
    Oracle(OracleSummary),
    Norm { space: String, profile: String, value: f64 },
    Chain { space: String, report: ChainReport },
}

impl ReportItem {
    fn to_value(&self) -> Value {
        let mut m = Map::new();
        match self {
            ReportItem::Verification(r) => {
                m.insert("type".into(), "verification".into());
                m.insert("statement".into(), r.statement.clone().into());
                m.insert("family".into(), r.family.clone().into());
                m.insert("geometry".into(), r.geometry.clone().into());
                m.insert("space".into(), r.space.clone().into());
                m.insert("n".into(), r.n.into());
                m.insert("lhs".into(), num(r.lhs));
                m.insert("rhs".into(), num(r.rhs));
                m.insert("margin".into(), num(r.margin));
                m.insert("budget".into(), num(r.budget));
                m.insert("mc_halfwidth".into(), num(r.mc_halfwidth));
                m.insert("pass".into(), r.pass.into());
                m.insert("vacuous".into(), r.vacuous.into());
                let mut consts = Map::new();
                for (k, v) in &r.constants {
                    consts.insert(k.clone(), num(*v));
                }
                m.insert("constants".into(), Value::Object(consts));
                m.insert(
                    "notes".into(),
                    Value::Array(r.notes.iter().map(|s| s.clone().into()).collect()),
                );
            }
            ReportItem::Constant { kind, n, value } => {
                m.insert("type".into(), "constant".into());
                m.insert("kind".into(), kind.clone().into());
                m.insert("n".into(), (*n).into());
                m.insert("value".into(), num(*value));
            }
            ReportItem::Sweep(row) => {
                m.insert("type".into(), "sweep".into());
                m.insert("n".into(), row.n.into());
                m.insert("ratio".into(), num(row.ratio));
                m.insert("constant".into(), num(row.constant));
                m.insert("max_so_far".into(), num(row.max_so_far));
                m.insert("pass".into(), row.pass.into());
            }
            ReportItem::Oracle(o) => {
                m.insert("type".into(), "oracle".into());
                m.insert("name".into(), o.name.clone().into());
                m.insert("checks".into(), o.checks.into());
                m.insert("violations".into(), o.violations.into());
                m.insert("worst_margin".into(), num(o.worst_margin));
                m.insert("pass".into(), o.pass.into());
                m.insert(
                    "notes".into(),
                    Value::Array(o.notes.iter().map(|s| s.clone().into()).collect()),
                );
            }
            ReportItem::Norm { space, profile, value } => {
                m.insert("type".into(), "norm".into());
                m.insert("space".into(), space.clone().into());
                m.insert("profile".into(), profile.clone().into());
                m.insert("value".into(), num(*value));
            }
            ReportItem::Chain { space, report } => {
                m.insert("type".into(), "chain".into());
                m.insert("space".into(), space.clone().into());
                m.insert("lhs".into(), num(report.lhs));
                m.insert("rhs".into(), num(report.rhs));
                m.insert("ratio".into(), num(report.ratio));
                m.insert("pass".into(), report.pass.into());
            }
        }
        Value::Object(m)
    }

    fn passed(&self) -> Option<(bool, bool)> {
        match self {
            ReportItem::Verification(r) => Some((r.pass, r.vacuous)),
            ReportItem::Sweep(row) => Some((row.pass, false)),
            ReportItem::Oracle(o) => Some((o.pass, false)),
            ReportItem::Chain { report, .. } => Some((report.pass, false)),
            _ => None,
        }
    }
}

pub struct ReportEnvelope {
    pub command: Vec<String>,
    pub seed: u64,
    pub items: Vec<ReportItem>,
    pub wall_ms: u64,
}

impl ReportEnvelope {
    pub fn new(command: Vec<String>, seed: u64) -> Self {
        ReportEnvelope { command, seed, items: Vec::new(), wall_ms: 0 }
    }

    /// True when no checked item failed (vacuous passes count as passes).
    pub fn all_pass(&self) -> bool {
        self.items
            .iter()
            .filter_map(ReportItem::passed)
            .all(|(pass, _)| pass)
    }

    fn to_value(&self, wall_ms: u64, hash: &str) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), SCHEMA.into());
        m.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
        m.insert(
            "command".into(),
            Value::Array(self.command.iter().map(|s| s.clone().into()).collect()),
        );
        m.insert("seed".into(), self.seed.into());
        let mut passed = 0u64;
        let mut failed = 0u64;
        let mut vacuous = 0u64;
        for item in &self.items {
            if let Some((p, v)) = item.passed() {
                if p {
                    passed += 1;
                } else {
                    failed += 1;
                }
                if v {
                    vacuous += 1;
                }
            }
        }
        let mut summary = Map::new();
        summary.insert("passed".into(), passed.into());
        summary.insert("failed".into(), failed.into());
        summary.insert("vacuous".into(), vacuous.into());
        m.insert("summary".into(), Value::Object(summary));
        m.insert(
            "items".into(),
            Value::Array(self.items.iter().map(ReportItem::to_value).collect()),
        );
        m.insert("wall_ms".into(), wall_ms.into());
        m.insert("content_hash".into(), hash.into());
        Value::Object(m)
    }

    /// Serializes with the content hash computed over the wall-clock-free
    /// form, so reruns are comparable byte for byte.
    pub fn to_json(&self) -> String {
        let hashable = self.to_value(0, "");
        let bytes = serde_json::to_vec(&hashable).expect("report serialization");
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        let hash: String = hasher
            .finalize()
            .iter()
            .map(|byte| format!("{byte:02x}"))
            .collect();
        let full = self.to_value(self.wall_ms, &hash);
        let mut out = serde_json::to_string_pretty(&full).expect("report serialization");
        out.push('\n');
        out
    }
}

/// CSV for constant tables: `kind,n,value`.
pub fn constants_csv(rows: &[(String, u32, f64)]) -> String {
    let mut out = String::from("kind,n,value\n");
    for (kind, n, value) in rows {
        out.push_str(&format!("{kind},{n},{}\n", sig(*value)));
    }
    out
}

/// CSV for dimension sweeps: `n,ratio,constant,max_so_far`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,ratio,constant,max_so_far\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.n,
            sig(row.ratio),
            sig(row.constant),
            sig(row.max_so_far)
        ));
    }
    out
}
