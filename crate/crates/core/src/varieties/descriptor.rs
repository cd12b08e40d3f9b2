//! Canonical JSON descriptors for backends, and the shipped fixture set.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Elliptic,
    Genus2,
    Model,
}

/// Fields are declared in sorted order so the derived serialization is canonical.
/// `coeffs` are `[a, b]` for `y^2 = x^3 + a x + b`, the coefficients of `f` (low first)
/// for `y^2 = f(x)` in genus 2, and empty for the model, which names its `fixture`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    pub coeffs: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    pub generators: Vec<String>,
    pub kind: Kind,
    pub p: u64,
}

impl Descriptor {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    fn curve(kind: Kind, p: u64, coeffs: &[i64], gens: &[&str]) -> Self {
        Descriptor {
            coeffs: coeffs.to_vec(),
            fixture: None,
            generators: gens.iter().map(|s| s.to_string()).collect(),
            kind,
            p,
        }
    }

    fn model(fixture: &str, rank: usize) -> Self {
        Descriptor {
            coeffs: Vec::new(),
            fixture: Some(fixture.into()),
            generators: (1..=rank).map(|i| format!("B{i}")).collect(),
            kind: Kind::Model,
            p: 0,
        }
    }

    /// Built-in backends: `model`, `model-g1`, `ec-ss-7`, `ec-ss-11`, `ec-ord-7`, `g2-19`.
    pub fn named(name: &str) -> Result<Self> {
        Ok(match name {
            "model" => Self::model("model_g2", 8),
            "model-g1" => Self::model("model_g1", 4),
            "ec-ss-7" => Self::curve(Kind::Elliptic, 7, &[1, 0], &["frobenius", "distortion"]),
            "ec-ss-11" => Self::curve(Kind::Elliptic, 11, &[1, 0], &["frobenius", "distortion"]),
            "ec-ord-7" => Self::curve(Kind::Elliptic, 7, &[0, 2], &["frobenius"]),
            "g2-19" => Self::curve(Kind::Genus2, 19, &[1, 0, 0, 0, 0, 1], &["frobenius", "zeta5"]),
            _ => return Err(Error::InvalidData(format!("unknown backend {name}"))),
        })
    }

    pub const NAMES: [&'static str; 6] = ["model", "model-g1", "ec-ss-7", "ec-ss-11", "ec-ord-7", "g2-19"];
}

/// Fixture text by name: from `$AVTRI_FIXTURES/<name>.json` when the variable is set,
/// otherwise the copy compiled into the binary.
pub fn load_fixture(name: &str) -> Result<String> {
    if let Ok(dir) = std::env::var("AVTRI_FIXTURES") {
        let path = std::path::Path::new(&dir).join(format!("{name}.json"));
        return Ok(std::fs::read_to_string(path)?);
    }
    embedded_fixture(name).map(str::to_owned).ok_or_else(|| Error::InvalidData(format!("no fixture {name}")))
}

pub fn embedded_fixture(name: &str) -> Option<&'static str> {
    Some(match name {
        "model_g2" => include_str!("../../fixtures/model_g2.json"),
        "model_g1" => include_str!("../../fixtures/model_g1.json"),
        "planted_direct_sum" => include_str!("../../fixtures/planted_direct_sum.json"),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_serialization() {
        let d = Descriptor::named("ec-ss-11").unwrap();
        assert_eq!(
            d.to_json(),
            r#"{"coeffs":[1,0],"generators":["frobenius","distortion"],"kind":"elliptic","p":11}"#
        );
        for n in Descriptor::NAMES {
            let d = Descriptor::named(n).unwrap();
            let s = d.to_json();
            assert_eq!(Descriptor::from_json(&s).unwrap().to_json(), s);
        }
        assert!(Descriptor::from_json(r#"{"coeffs":[],"generators":[],"kind":"model","p":0,"x":1}"#).is_err());
    }
}
