//! One line of the machine-readable report.

use std::str::FromStr;

use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Assert,
    Derivation,
    Numeric,
}

impl Kind {
    fn as_str(self) -> &'static str {
        match self {
            Kind::Assert => "assert",
            Kind::Derivation => "derivation",
            Kind::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub kind: Kind,
    pub id: String,
    pub status: &'static str,
    pub n: Option<usize>,
    pub h: Option<f64>,
    pub residual: Option<f64>,
    pub order: Option<f64>,
    pub seed: Option<u64>,
    pub index_pair: Option<Vec<u8>>,
    pub detail: Option<String>,
}

impl Record {
    pub fn new(kind: Kind, id: impl Into<String>, status: &'static str) -> Record {
        Record {
            kind,
            id: id.into(),
            status,
            n: None,
            h: None,
            residual: None,
            order: None,
            seed: None,
            index_pair: None,
            detail: None,
        }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Record {
        self.detail = Some(d.into());
        self
    }

    /// Fields in a fixed order; absent ones omitted.
    pub fn to_json(&self) -> String {
        let mut m = Map::new();
        m.insert("kind".into(), self.kind.as_str().into());
        m.insert("id".into(), self.id.clone().into());
        m.insert("status".into(), self.status.into());
        if let Some(n) = self.n {
            m.insert("n".into(), n.into());
        }
        for (key, v) in [("h", self.h), ("residual", self.residual), ("order", self.order)] {
            if let Some(v) = v {
                m.insert(key.into(), float(v));
            }
        }
        if let Some(s) = self.seed {
            m.insert("seed".into(), s.into());
        }
        if let Some(ix) = &self.index_pair {
            m.insert("index_pair".into(), ix.clone().into());
        }
        if let Some(d) = &self.detail {
            m.insert("detail".into(), d.clone().into());
        }
        Value::Object(m).to_string()
    }
}

/// Twelve significant digits; non-finite values become `null`.
fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Number::from_str(&sig12(x)).map(Value::Number).unwrap_or(Value::Null)
}

pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}
