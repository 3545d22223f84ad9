//! On-disk shapes of the two model documents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const MODEL_SCHEMA: &str = "bocl-model/1";
pub const OBJECTS_SCHEMA: &str = "bocl-objects/1";

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub(super) struct ModelDocument {
    pub schema_version: String,
    pub name: String,
    #[serde(default)]
    pub classes: Vec<ClassDoc>,
    #[serde(default)]
    pub associations: Vec<AssociationDoc>,
    #[serde(default)]
    pub constraints: Vec<ConstraintDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct ClassDoc {
    pub name: String,
    #[serde(default)]
    pub attributes: Vec<AttributeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct AttributeDoc {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct AssociationDoc {
    pub name: String,
    pub ends: [EndDoc; 2],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct EndDoc {
    pub role: String,
    pub class: String,
    pub multiplicity: MultiplicityDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct MultiplicityDoc {
    pub lower: u32,
    pub upper: UpperDoc,
}

/// A numeric upper bound or `"*"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum UpperDoc {
    Bound(u32),
    Unbounded,
}

impl Serialize for UpperDoc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            UpperDoc::Bound(n) => s.serialize_u32(*n),
            UpperDoc::Unbounded => s.serialize_str("*"),
        }
    }
}

impl<'de> Deserialize<'de> for UpperDoc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Visitor;
        impl serde::de::Visitor<'_> for Visitor {
            type Value = UpperDoc;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a non-negative integer or \"*\"")
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<UpperDoc, E> {
                u32::try_from(v)
                    .map(UpperDoc::Bound)
                    .map_err(|_| E::invalid_value(serde::de::Unexpected::Unsigned(v), &self))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<UpperDoc, E> {
                u64::try_from(v)
                    .map_err(|_| E::invalid_value(serde::de::Unexpected::Signed(v), &self))
                    .and_then(|v| self.visit_u64(v))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<UpperDoc, E> {
                if v == "*" {
                    Ok(UpperDoc::Unbounded)
                } else {
                    Err(E::invalid_value(serde::de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(Visitor)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct ConstraintDoc {
    pub name: String,
    pub context: String,
    pub expression: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub(super) struct ObjectsDocument {
    pub schema_version: String,
    pub name: String,
    #[serde(default)]
    pub objects: Vec<ObjectDoc>,
    #[serde(default)]
    pub links: Vec<LinkDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct ObjectDoc {
    pub name: String,
    pub class: String,
    #[serde(default)]
    pub slots: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct LinkDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub association: String,
    pub ends: [LinkEndDoc; 2],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct LinkEndDoc {
    pub role: String,
    pub object: String,
}
