//! Report assembly and deterministic serialization.

use std::io::Write;

use anyhow::Result;
use mubkit::linalg::{Basis, C64};
use serde::Serialize;
use serde_json::{json, Value};

/// Rounds to 12 significant digits so output is stable across platforms.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(round12(x))
    } else {
        json!(x.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub id: String,
    pub anchor: String,
    pub expected: Value,
    pub measured: Value,
    pub max_deviation: f64,
    pub pass: bool,
}

impl Claim {
    /// Numeric claim passing when `|measured - expected| <= tol`.
    pub fn close(id: &str, anchor: &str, expected: f64, measured: f64, tol: f64) -> Claim {
        let dev = (measured - expected).abs();
        Claim {
            id: id.into(),
            anchor: anchor.into(),
            expected: num(expected),
            measured: num(measured),
            max_deviation: round12(dev),
            pass: dev <= tol,
        }
    }

    /// Claim on a deviation that must not exceed `tol`.
    pub fn bounded(id: &str, anchor: &str, deviation: f64, tol: f64) -> Claim {
        Claim {
            id: id.into(),
            anchor: anchor.into(),
            expected: json!(format!("<= {tol:e}")),
            measured: num(deviation),
            max_deviation: round12(deviation),
            pass: deviation <= tol,
        }
    }

    pub fn exact<T: Serialize + PartialEq>(id: &str, anchor: &str, expected: T, measured: T) -> Claim {
        let pass = expected == measured;
        Claim {
            id: id.into(),
            anchor: anchor.into(),
            expected: json!(expected),
            measured: json!(measured),
            max_deviation: if pass { 0.0 } else { 1.0 },
            pass,
        }
    }

    pub fn prefixed(mut self, prefix: &str) -> Claim {
        self.id = format!("{prefix}.{}", self.id);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisOut {
    pub label: String,
    /// Vectors as lists of `[re, im]` pairs.
    pub vectors: Vec<Vec<[f64; 2]>>,
}

impl BasisOut {
    pub fn from_basis(b: &Basis) -> Self {
        let pair = |z: &C64| [round12(z.re) + 0.0, round12(z.im) + 0.0];
        BasisOut {
            label: b.label.clone(),
            vectors: b
                .vectors
                .iter()
                .map(|v| v.entries().iter().map(pair).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterOut {
    pub value: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub claims: Vec<Claim>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub bases: Vec<BasisOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub clusters: Vec<ClusterOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
}

impl Report {
    pub fn new(command: impl Into<String>, dimension: Option<usize>) -> Self {
        Report {
            command: command.into(),
            dimension,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        Ok(())
    }

    /// Claims table; builds also list basis components, distance runs list
    /// the clusters.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "section",
            "id",
            "anchor",
            "expected",
            "measured",
            "max_deviation",
            "pass",
        ])?;
        for c in &self.claims {
            out.write_record([
                "claim",
                &c.id,
                &c.anchor,
                &value_cell(&c.expected),
                &value_cell(&c.measured),
                &c.max_deviation.to_string(),
                &c.pass.to_string(),
            ])?;
        }
        for cl in &self.clusters {
            out.write_record(["cluster", "", "", "", &cl.value.to_string(), "", &cl.count.to_string()])?;
        }
        for b in &self.bases {
            for (j, v) in b.vectors.iter().enumerate() {
                for (a, z) in v.iter().enumerate() {
                    let id = format!("{}/{j}/{a}", b.label);
                    out.write_record(["component", &id, "", "", &format!("{} {}", z[0], z[1]), "", ""])?;
                }
            }
        }
        out.flush()?;
        Ok(())
    }
}

fn value_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
