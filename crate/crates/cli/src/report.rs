//! Machine-readable run reports.
//!
//! Keys are declared in sorted order so that a report survives a round trip
//! through any JSON tool that sorts object keys.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::Method;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub detail: String,
    pub name: String,
    pub pass: bool,
}

impl Check {
    pub fn line(&self) -> String {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        format!("[{tag}] {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentEntry {
    /// Exact residue as `"num/den"`.
    pub contribution: String,
    pub pattern: [String; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub d: u32,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub per_component: Option<Vec<ComponentEntry>>,
    #[serde(with = "bigint_number")]
    pub total_degree: BigInt,
    pub weights: [i64; 4],
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let [w0, w1, w2, w3] = self.weights;
        let method = match self.method {
            Method::Bott => "bott",
            Method::Vafa => "vafa",
            Method::Both => "both",
        };
        let mut s = format!(
            "d = {}, weights = {w0},{w1},{w2},{w3}, method = {method}\n",
            self.d
        );
        if let Some(entries) = &self.per_component {
            for e in entries {
                let _ = writeln!(s, "  ({})  {}", e.pattern.join(","), e.contribution);
            }
        }
        for c in &self.checks {
            let _ = writeln!(s, "{}", c.line());
        }
        let _ = writeln!(s, "total degree: {}", self.total_degree);
        s
    }
}

/// Arbitrary-size integers as plain JSON numbers.
pub(crate) mod bigint_number {
    use std::str::FromStr;

    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Number;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        let n = Number::from_str(&x.to_string()).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let n = Number::deserialize(d)?;
        BigInt::from_str(&n.to_string())
            .map_err(|_| D::Error::custom(format!("{n} is not an integer")))
    }
}
