//! Report shapes shared by the CLI. Every computed quantity becomes a flat
//! row with a fixed key order; multi-row commands wrap rows in a small
//! envelope. JSON key order follows struct field order, so two runs on the
//! same input serialize to identical bytes. Text output is derived from the
//! same values.

use crate::afinite::{Afinity, DistinguishReport, InvariantReport, Quantity, Verdict};
use crate::colength::ColengthValue;
use crate::counting::{CountMethod, CountReport, StableTypeDescriptor};
use crate::germ::GermSpec;
use crate::partition::Partition;
use serde::Serialize;
use std::fmt::Write as _;

pub const STATUS_OK: &str = "ok";
pub const STATUS_NOT_FINITE: &str = "not_finite_up_to_bound";

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub germ: String,
    pub partition: Vec<u32>,
    pub dimension: i64,
    pub method: String,
    pub colength: Option<u64>,
    pub stabilizer: u64,
    pub count: Option<u64>,
    #[serde(rename = "invariant_N")]
    pub invariant_n: Option<u64>,
    pub stabilized_at_jet: Option<u32>,
    pub status: String,
}

fn method_name(m: CountMethod) -> &'static str {
    match m {
        CountMethod::Colength => "colength",
        CountMethod::ClosedForm => "formula",
        CountMethod::Both => "both",
    }
}

impl Row {
    pub fn from_count(germ: &GermSpec, report: &CountReport) -> Row {
        Row {
            germ: germ.name.clone(),
            partition: report.partition.parts().to_vec(),
            dimension: report.partition.dimension(germ.n, germ.p),
            method: method_name(report.method).to_string(),
            colength: Some(report.colength),
            stabilizer: report.stabilizer,
            count: Some(report.count),
            invariant_n: None,
            stabilized_at_jet: report.stabilized_at,
            status: STATUS_OK.to_string(),
        }
    }

    /// Count row for a colength that never stabilized.
    pub fn count_not_finite(germ: &GermSpec, partition: &Partition, method: CountMethod) -> Row {
        Row {
            germ: germ.name.clone(),
            partition: partition.parts().to_vec(),
            dimension: partition.dimension(germ.n, germ.p),
            method: method_name(method).to_string(),
            colength: None,
            stabilizer: partition.stabilizer_order(),
            count: None,
            invariant_n: None,
            stabilized_at_jet: None,
            status: STATUS_NOT_FINITE.to_string(),
        }
    }

    pub fn from_types(label: &str, n: usize, p: usize, d: &StableTypeDescriptor) -> Row {
        let _ = (n, p);
        Row {
            germ: label.to_string(),
            partition: d.partition.parts().to_vec(),
            dimension: d.dimension,
            method: "enumeration".to_string(),
            colength: None,
            stabilizer: d.partition.stabilizer_order(),
            count: None,
            invariant_n: None,
            stabilized_at_jet: None,
            status: STATUS_OK.to_string(),
        }
    }

    pub fn from_invariant(germ: &GermSpec, report: &InvariantReport) -> Row {
        let (value, stabilized, status) = match report.n_value.value {
            ColengthValue::Finite(c) => (
                Some(c as u64),
                report.n_value.stabilized_at,
                STATUS_OK,
            ),
            ColengthValue::NotFiniteUpTo(_) => (None, None, STATUS_NOT_FINITE),
        };
        Row {
            germ: germ.name.clone(),
            partition: report.partition.parts().to_vec(),
            dimension: report.partition.dimension(germ.n, germ.p),
            method: "invariant".to_string(),
            colength: None,
            stabilizer: report.partition.stabilizer_order(),
            count: None,
            invariant_n: value,
            stabilized_at_jet: stabilized,
            status: status.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerdictEnvelope {
    pub germ: String,
    pub afinite: String,
    pub max_jet: u32,
    pub evidence: Vec<Row>,
}

pub fn verdict_envelope(germ: &GermSpec, verdict: &Verdict, max_jet: u32) -> VerdictEnvelope {
    let mut evidence = Vec::new();
    for inv in &verdict.invariants {
        evidence.push(Row::from_invariant(germ, inv));
    }
    for c in &verdict.counts {
        let row = match (c.value, c.count) {
            (ColengthValue::Finite(colength), Some(count)) => Row {
                colength: Some(colength as u64),
                count: Some(count),
                stabilized_at_jet: c.stabilized_at,
                status: STATUS_OK.to_string(),
                ..Row::count_not_finite(germ, &c.partition, CountMethod::Colength)
            },
            _ => Row::count_not_finite(germ, &c.partition, CountMethod::Colength),
        };
        evidence.push(row);
    }
    VerdictEnvelope {
        germ: germ.name.clone(),
        afinite: match verdict.afinite {
            Afinity::Yes => "yes".to_string(),
            Afinity::NotUpToBound(_) => "not_up_to_bound".to_string(),
        },
        max_jet,
        evidence,
    }
}

#[derive(Debug, Serialize)]
pub struct DistinguishCell {
    pub value: Option<u64>,
    pub bound: Option<u32>,
}

fn cell(v: ColengthValue) -> DistinguishCell {
    match v {
        ColengthValue::Finite(c) => DistinguishCell {
            value: Some(c as u64),
            bound: None,
        },
        ColengthValue::NotFiniteUpTo(b) => DistinguishCell {
            value: None,
            bound: Some(b),
        },
    }
}

#[derive(Debug, Serialize)]
pub struct DistinguishRowJson {
    pub quantity: String,
    pub partition: Vec<u32>,
    pub left: DistinguishCell,
    pub right: DistinguishCell,
    pub differs: bool,
}

#[derive(Debug, Serialize)]
pub struct DistinguishEnvelope {
    pub left: String,
    pub right: String,
    pub rows: Vec<DistinguishRowJson>,
    pub certified_distinct: bool,
}

pub fn distinguish_envelope(report: &DistinguishReport) -> DistinguishEnvelope {
    DistinguishEnvelope {
        left: report.left_name.clone(),
        right: report.right_name.clone(),
        rows: report
            .rows
            .iter()
            .map(|r| DistinguishRowJson {
                quantity: match r.quantity {
                    Quantity::InvariantN => "invariant_N".to_string(),
                    Quantity::Count => "count".to_string(),
                },
                partition: r.partition.parts().to_vec(),
                left: cell(r.left),
                right: cell(r.right),
                differs: r.differs,
            })
            .collect(),
        certified_distinct: report.certified_distinct,
    }
}

fn partition_text(parts: &[u32]) -> String {
    let inner: Vec<String> = parts.iter().map(|r| r.to_string()).collect();
    format!("({})", inner.join(","))
}

pub fn row_text(row: &Row) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "germ {}  partition {}  dimension {}",
        row.germ,
        partition_text(&row.partition),
        row.dimension
    );
    let _ = writeln!(s, "method {}  stabilizer {}", row.method, row.stabilizer);
    if let Some(c) = row.colength {
        let _ = writeln!(s, "colength {c}");
    }
    if let Some(c) = row.count {
        let _ = writeln!(s, "count {c}");
    }
    if let Some(v) = row.invariant_n {
        let _ = writeln!(s, "invariant N {v}");
    }
    if let Some(j) = row.stabilized_at_jet {
        let _ = writeln!(s, "stabilized at jet {j}");
    }
    let _ = write!(s, "status {}", row.status);
    s
}

pub fn types_text(rows: &[Row]) -> String {
    let mut s = String::new();
    for row in rows {
        let _ = writeln!(
            s,
            "{}  dimension {}  stabilizer {}",
            partition_text(&row.partition),
            row.dimension,
            row.stabilizer
        );
    }
    s.pop();
    s
}

pub fn verdict_text(env: &VerdictEnvelope) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "germ {}  a-finite: {}  (jet bound {})",
        env.germ, env.afinite, env.max_jet
    );
    for row in &env.evidence {
        let label = if row.method == "invariant" { "N" } else { "count" };
        let shown = match (row.invariant_n, row.count) {
            (Some(v), _) => v.to_string(),
            (_, Some(c)) => c.to_string(),
            _ => format!("not finite up to jet {}", env.max_jet),
        };
        let _ = writeln!(s, "{} {} = {}", label, partition_text(&row.partition), shown);
    }
    s.pop();
    s
}

pub fn distinguish_text(env: &DistinguishEnvelope) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "left {}  right {}", env.left, env.right);
    let show = |c: &DistinguishCell| match (c.value, c.bound) {
        (Some(v), _) => v.to_string(),
        (_, Some(b)) => format!("not finite up to jet {b}"),
        _ => "?".to_string(),
    };
    for row in &env.rows {
        let label = if row.quantity == "invariant_N" { "N" } else { "#Q" };
        let _ = writeln!(
            s,
            "{} {}: {} | {}{}",
            label,
            partition_text(&row.partition),
            show(&row.left),
            show(&row.right),
            if row.differs { "   DIFFERS" } else { "" }
        );
    }
    let _ = write!(
        s,
        "certified distinct: {}",
        if env.certified_distinct { "yes" } else { "no" }
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_both;
    use crate::germ::germ_from_strs;

    fn pinch() -> GermSpec {
        germ_from_strs("pinch", &["x", "z"], &["z^2", "x*z"], None)
    }

    #[test]
    fn row_keys_appear_in_the_documented_order() {
        let g = pinch();
        let p = Partition::new(vec![2]).unwrap();
        let report = count_both(&g, &p, 12).unwrap();
        let row = Row::from_count(&g, &report);
        let json = serde_json::to_string(&row).unwrap();
        let expected = [
            "germ",
            "partition",
            "dimension",
            "method",
            "colength",
            "stabilizer",
            "count",
            "invariant_N",
            "stabilized_at_jet",
            "status",
        ];
        let positions: Vec<usize> = expected
            .iter()
            .map(|k| {
                json.find(&format!("\"{k}\""))
                    .unwrap_or_else(|| panic!("missing key {k} in {json}"))
            })
            .collect();
        let mut sorted = positions.clone();
        sorted.sort_unstable();
        assert_eq!(positions, sorted, "keys out of order in {json}");
    }

    #[test]
    fn count_row_values_round_trip() {
        let g = pinch();
        let p = Partition::new(vec![2]).unwrap();
        let report = count_both(&g, &p, 12).unwrap();
        let row = Row::from_count(&g, &report);
        let json = serde_json::to_string(&row).unwrap();
        assert!(json.contains("\"colength\":1"));
        assert!(json.contains("\"count\":1"));
        assert!(json.contains("\"invariant_N\":null"));
        assert!(json.contains("\"status\":\"ok\""));
    }

    #[test]
    fn text_mirrors_row_values() {
        let g = pinch();
        let p = Partition::new(vec![2]).unwrap();
        let report = count_both(&g, &p, 12).unwrap();
        let row = Row::from_count(&g, &report);
        let text = row_text(&row);
        assert!(text.contains("partition (2)"));
        assert!(text.contains("count 1"));
        assert!(text.ends_with("status ok"));
    }
}
