//! JSON file schema for presentations.
//!
//! Emission is canonical: object keys sorted, arrays kept in declaration
//! order.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::equiv::cert::RationalCert;
use crate::error::{FcatError, Result};
use crate::ids::{ArrowId, ObjectId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDecl {
    pub id: ArrowId,
    pub dom: ObjectId,
    pub cod: ObjectId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinaryEntry {
    pub left: ArrowId,
    pub right: ArrowId,
    pub out: ArrowId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideEntry {
    pub base: ObjectId,
    pub arrows: Vec<ArrowId>,
    pub out: ArrowId,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaKeyData {
    pub base: ObjectId,
    pub arrows: Vec<ArrowId>,
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaEntry {
    pub base: ObjectId,
    pub arrows: Vec<ArrowId>,
    pub a: usize,
    pub b: usize,
    pub cert: RationalCert,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaRule {
    /// Coherence equivalences are identity towers whenever both endpoints
    /// coincide.
    Reflexivity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaDefaultData {
    pub rule: ThetaRule,
    #[serde(default)]
    pub except: Vec<ThetaKeyData>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakData {
    #[serde(default)]
    pub hcomp: Vec<BinaryEntry>,
    #[serde(default, deserialize_with = "unique_map")]
    pub hunit: BTreeMap<ObjectId, ArrowId>,
    #[serde(default)]
    pub theta: Vec<ThetaEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_default: Option<ThetaDefaultData>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationData {
    pub objects: Vec<ObjectId>,
    pub arrows: Vec<ArrowDecl>,
    #[serde(default, deserialize_with = "unique_map")]
    pub identity: BTreeMap<ObjectId, ArrowId>,
    #[serde(default)]
    pub bcomp: Vec<BinaryEntry>,
    #[serde(default)]
    pub overrides: Vec<OverrideEntry>,
    #[serde(rename = "J", default, deserialize_with = "unique_map")]
    pub switchback: BTreeMap<ArrowId, ObjectId>,
    #[serde(default)]
    pub frontier: Vec<ObjectId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weak: Option<WeakData>,
}

impl PresentationData {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(FcatError::from_json)
    }

    pub fn to_canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("presentation serializes");
        serde_json::to_string_pretty(&v).expect("value serializes") + "\n"
    }
}

/// Deserializes a JSON object into a map, rejecting repeated keys (serde_json
/// would otherwise keep the last one silently).
pub(crate) fn unique_map<'de, D, K, V>(d: D) -> std::result::Result<BTreeMap<K, V>, D::Error>
where
    D: Deserializer<'de>,
    K: Deserialize<'de> + Ord + fmt::Display,
    V: Deserialize<'de>,
{
    struct UniqueMap<K, V>(PhantomData<(K, V)>);

    impl<'de, K, V> Visitor<'de> for UniqueMap<K, V>
    where
        K: Deserialize<'de> + Ord + fmt::Display,
        V: Deserialize<'de>,
    {
        type Value = BTreeMap<K, V>;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("a JSON object with unique keys")
        }

        fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<Self::Value, A::Error> {
            let mut out = BTreeMap::new();
            while let Some((k, v)) = access.next_entry::<K, V>()? {
                let shown = k.to_string();
                if out.insert(k, v).is_some() {
                    return Err(serde::de::Error::custom(format!("duplicate key `{shown}`")));
                }
            }
            Ok(out)
        }
    }

    d.deserialize_map(UniqueMap(PhantomData))
}
