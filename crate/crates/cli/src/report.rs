use qpe_core::io::MatrixDocument;
use qpe_core::{CMatrix, CVector, OrderVerdict, Relation};
use serde_json::{json, Value};

/// How a finished command maps onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Fails,
    Inconclusive,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Fails => 1,
            Status::Inconclusive => 3,
        }
    }

    pub fn from_relation(r: Relation) -> Self {
        match r {
            Relation::Holds => Status::Success,
            Relation::Fails => Status::Fails,
            Relation::Marginal => Status::Inconclusive,
        }
    }
}

pub struct Report {
    pub json: Value,
    pub text: String,
    pub status: Status,
}

impl Report {
    pub fn new(json: Value, text: impl Into<String>, status: Status) -> Self {
        Report {
            json,
            text: text.into(),
            status,
        }
    }

    pub fn document(doc: &MatrixDocument) -> Self {
        let json = serde_json::to_value(doc).expect("documents serialize");
        let m = doc.to_hermitian().expect("emitted documents are valid");
        Report::new(json, render_matrix(m.as_matrix()), Status::Success)
    }
}

/// JSON has no infinities, so non-finite values become strings.
pub fn number(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn relation_name(r: Relation) -> &'static str {
    match r {
        Relation::Holds => "holds",
        Relation::Fails => "fails",
        Relation::Marginal => "marginal",
    }
}

fn vector_entries(v: &CVector) -> Value {
    json!(v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

pub fn verdict_json(relation: &str, v: &OrderVerdict) -> Value {
    json!({
        "relation": relation,
        "verdict": relation_name(v.relation),
        "slack": number(v.slack),
        "witness": v.witness.as_ref().map(vector_entries),
    })
}

pub fn verdict_report(relation: &str, v: &OrderVerdict) -> Report {
    Report::new(
        verdict_json(relation, v),
        format!("{relation}: {} (slack {:e})", relation_name(v.relation), v.slack),
        Status::from_relation(v.relation),
    )
}

pub fn render_matrix(m: &CMatrix) -> String {
    let real = m.iter().all(|z| z.im == 0.0);
    let mut out = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|c| {
                let z = m[(r, c)];
                if real {
                    format!("{:>12.6}", z.re)
                } else {
                    format!("{:>11.6}{:+.6}i", z.re, z.im)
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.pop();
    out
}
