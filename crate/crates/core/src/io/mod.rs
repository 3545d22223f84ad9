//! JSON loading and saving of models, and report rendering.
//!
//! Two document kinds exist, each tagged with a `schemaVersion`:
//! `bocl-model/1` for a structural model with its constraints and
//! `bocl-objects/1` for an object model. Loading always validates; warnings
//! ride along in [`Loaded`].

mod document;
mod report;

use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use serde_json::{Number, Value as Json};

use crate::model::{
    validate_conformance, validate_structural, AssociationEnd, Attribute, BinaryAssociation, ClassDef, ConstraintDef,
    LinkInstance, LiteralValue, ModelDiagnostic, Multiplicity, ObjectInstance, ObjectModel, PrimitiveType,
    StructuralModel,
};
use document::*;

pub use document::{MODEL_SCHEMA, OBJECTS_SCHEMA};
pub use report::{write_report, ReportFormat};

const DATE_FORMAT: &str = "%Y-%m-%d";

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: no such file")]
    NotFound { path: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON at {line}:{col}: {message}")]
    Malformed { line: usize, col: usize, message: String },
    #[error("unsupported schemaVersion {}, expected \"{expected}\"", found.as_deref().map_or("(missing)".to_string(), |f| format!("\"{f}\"")))]
    SchemaVersion { expected: &'static str, found: Option<String> },
    #[error("invalid structural model: {}", join(.0))]
    Validation(Vec<ModelDiagnostic>),
    #[error("object model does not conform: {}", join(.0))]
    Conformance(Vec<ModelDiagnostic>),
}

impl IoError {
    /// Diagnostics carried by `Validation` and `Conformance`; empty otherwise.
    pub fn diagnostics(&self) -> &[ModelDiagnostic] {
        match self {
            IoError::Validation(d) | IoError::Conformance(d) => d,
            _ => &[],
        }
    }
}

fn join(diags: &[ModelDiagnostic]) -> String {
    diags.iter().filter(|d| d.is_error()).map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A successfully loaded value plus any warning-level diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<ModelDiagnostic>,
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| {
        let path = path.display().to_string();
        if source.kind() == std::io::ErrorKind::NotFound {
            IoError::NotFound { path }
        } else {
            IoError::Io { path, source }
        }
    })
}

fn malformed(err: serde_json::Error) -> IoError {
    IoError::Malformed { line: err.line(), col: err.column(), message: err.to_string() }
}

/// Syntax first, then the version gate, then the typed shape, so a wrong
/// version is reported as such rather than as an unknown field.
fn parse_document<T: serde::de::DeserializeOwned>(text: &str, expected: &'static str) -> Result<T, IoError> {
    let raw: Json = serde_json::from_str(text).map_err(malformed)?;
    let found = raw.get("schemaVersion").map(|v| v.as_str().map_or_else(|| v.to_string(), str::to_string));
    if found.as_deref() != Some(expected) {
        return Err(IoError::SchemaVersion { expected, found });
    }
    serde_json::from_str(text).map_err(malformed)
}

fn split(
    diags: Vec<ModelDiagnostic>,
    wrap: fn(Vec<ModelDiagnostic>) -> IoError,
) -> Result<Vec<ModelDiagnostic>, IoError> {
    if diags.iter().any(ModelDiagnostic::is_error) {
        Err(wrap(diags))
    } else {
        Ok(diags)
    }
}

pub fn load_structural(path: impl AsRef<Path>) -> Result<Loaded<StructuralModel>, IoError> {
    load_structural_str(&read(path.as_ref())?)
}

pub fn load_structural_str(text: &str) -> Result<Loaded<StructuralModel>, IoError> {
    let doc: ModelDocument = parse_document(text, MODEL_SCHEMA)?;
    let (model, mut diags) = structural_from_doc(doc);
    diags.extend(validate_structural(&model));
    let warnings = split(diags, IoError::Validation)?;
    Ok(Loaded { value: model, warnings })
}

pub fn load_objects(path: impl AsRef<Path>, model: &StructuralModel) -> Result<Loaded<ObjectModel>, IoError> {
    load_objects_str(&read(path.as_ref())?, model)
}

pub fn load_objects_str(text: &str, model: &StructuralModel) -> Result<Loaded<ObjectModel>, IoError> {
    let doc: ObjectsDocument = parse_document(text, OBJECTS_SCHEMA)?;
    let (objects, mut diags) = objects_from_doc(doc, model);
    diags.extend(validate_conformance(&objects, model));
    let warnings = split(diags, IoError::Conformance)?;
    Ok(Loaded { value: objects, warnings })
}

fn structural_from_doc(doc: ModelDocument) -> (StructuralModel, Vec<ModelDiagnostic>) {
    let mut diags = Vec::new();
    let classes = doc
        .classes
        .into_iter()
        .enumerate()
        .map(|(i, class)| {
            let attributes = class
                .attributes
                .into_iter()
                .enumerate()
                .filter_map(|(j, attr)| match PrimitiveType::from_name(&attr.ty) {
                    Some(ty) => Some(Attribute::new(attr.name, ty)),
                    None => {
                        diags.push(ModelDiagnostic::error(
                            format!("classes[{i}].attributes[{j}]"),
                            format!("unknown attribute type '{}'", attr.ty),
                        ));
                        None
                    }
                })
                .collect();
            ClassDef::new(class.name, attributes)
        })
        .collect();
    let end = |e: EndDoc| {
        let upper = match e.multiplicity.upper {
            UpperDoc::Bound(n) => Some(n),
            UpperDoc::Unbounded => None,
        };
        AssociationEnd::new(e.role, e.class, Multiplicity::new(e.multiplicity.lower, upper))
    };
    let associations = doc
        .associations
        .into_iter()
        .map(|a| {
            let [e1, e2] = a.ends;
            BinaryAssociation::new(a.name, end(e1), end(e2))
        })
        .collect();
    let constraints = doc
        .constraints
        .into_iter()
        .map(|c| {
            let mut def = ConstraintDef::new(c.name, c.context, c.expression);
            if let Some(language) = c.language {
                def.language = language;
            }
            def
        })
        .collect();
    (StructuralModel { name: doc.name, classes, associations, constraints }, diags)
}

/// Converts a JSON slot value, reading number and string shapes in the light
/// of the declared attribute type when there is one.
fn slot_value(json: &Json, declared: Option<PrimitiveType>) -> Option<LiteralValue> {
    match (json, declared) {
        (Json::Number(n), Some(PrimitiveType::Real)) => n.as_f64().map(LiteralValue::Real),
        (Json::String(s), Some(PrimitiveType::Date)) => Some(
            NaiveDate::parse_from_str(s, DATE_FORMAT).map_or_else(|_| LiteralValue::Str(s.clone()), LiteralValue::Date),
        ),
        (Json::Number(n), _) => Some(match n.as_i64() {
            Some(i) => LiteralValue::Int(i),
            None => LiteralValue::Real(n.as_f64()?),
        }),
        (Json::String(s), _) => Some(LiteralValue::Str(s.clone())),
        (Json::Bool(b), _) => Some(LiteralValue::Bool(*b)),
        _ => None,
    }
}

fn objects_from_doc(doc: ObjectsDocument, model: &StructuralModel) -> (ObjectModel, Vec<ModelDiagnostic>) {
    let mut diags = Vec::new();
    let mut objects = Vec::with_capacity(doc.objects.len());
    for (i, obj) in doc.objects.into_iter().enumerate() {
        let class = model.class(&obj.class);
        let mut instance = ObjectInstance::new(obj.name, obj.class.clone());
        for (attr, json) in obj.slots {
            let declared = class.and_then(|c| c.attribute(&attr)).map(|a| a.ty);
            match slot_value(&json, declared) {
                Some(value) => {
                    instance.slots.insert(attr, value);
                }
                None => diags.push(ModelDiagnostic::error(
                    format!("objects[{i}].slots.{attr}"),
                    format!("unsupported slot value {json}"),
                )),
            }
        }
        objects.push(instance);
    }

    let mut links = Vec::with_capacity(doc.links.len());
    for (i, link) in doc.links.into_iter().enumerate() {
        let name = link.name.unwrap_or_else(|| format!("{}#{i}", link.association));
        let [a, b] = link.ends;
        let (first, second) = match model.association(&link.association) {
            // unknown associations are reported by conformance validation
            None => (a.object, b.object),
            Some(assoc) if a.role == assoc.end1.name && b.role == assoc.end2.name => (a.object, b.object),
            Some(assoc) if a.role == assoc.end2.name && b.role == assoc.end1.name => (b.object, a.object),
            Some(assoc) => {
                diags.push(ModelDiagnostic::error(
                    format!("links[{i}].ends"),
                    format!(
                        "link ends must name the roles '{}' and '{}' of {}",
                        assoc.end1.name, assoc.end2.name, assoc.name
                    ),
                ));
                continue;
            }
        };
        links.push(LinkInstance::new(name, link.association, first, second));
    }
    (ObjectModel { name: doc.name, objects, links }, diags)
}

fn to_pretty(value: &impl serde::Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("document types always serialize");
    text.push('\n');
    text
}

pub fn save_structural(model: &StructuralModel) -> String {
    let end = |e: &AssociationEnd| EndDoc {
        role: e.name.clone(),
        class: e.target.clone(),
        multiplicity: MultiplicityDoc {
            lower: e.multiplicity.lower,
            upper: e.multiplicity.upper.map_or(UpperDoc::Unbounded, UpperDoc::Bound),
        },
    };
    to_pretty(&ModelDocument {
        schema_version: MODEL_SCHEMA.to_string(),
        name: model.name.clone(),
        classes: model
            .classes
            .iter()
            .map(|c| ClassDoc {
                name: c.name.clone(),
                attributes: c
                    .attributes
                    .iter()
                    .map(|a| AttributeDoc { name: a.name.clone(), ty: a.ty.as_str().to_string() })
                    .collect(),
            })
            .collect(),
        associations: model
            .associations
            .iter()
            .map(|a| AssociationDoc { name: a.name.clone(), ends: [end(&a.end1), end(&a.end2)] })
            .collect(),
        constraints: model
            .constraints
            .iter()
            .map(|c| ConstraintDoc {
                name: c.name.clone(),
                context: c.context.clone(),
                expression: c.expression.clone(),
                language: Some(c.language.clone()),
            })
            .collect(),
    })
}

/// Non-finite reals have no JSON form and are written as `null`, which will
/// not load back.
pub fn save_objects(objects: &ObjectModel, model: &StructuralModel) -> String {
    let slot = |v: &LiteralValue| match v {
        LiteralValue::Int(i) => Json::from(*i),
        LiteralValue::Real(r) => Number::from_f64(*r).map_or(Json::Null, Json::Number),
        LiteralValue::Str(s) => Json::from(s.as_str()),
        LiteralValue::Bool(b) => Json::from(*b),
        LiteralValue::Date(d) => Json::from(d.format(DATE_FORMAT).to_string()),
    };
    let links = objects
        .links
        .iter()
        .map(|l| {
            let (role1, role2) = match model.association(&l.association) {
                Some(a) => (a.end1.name.clone(), a.end2.name.clone()),
                None => (String::new(), String::new()),
            };
            LinkDoc {
                name: Some(l.name.clone()),
                association: l.association.clone(),
                ends: [
                    LinkEndDoc { role: role1, object: l.end1_object.clone() },
                    LinkEndDoc { role: role2, object: l.end2_object.clone() },
                ],
            }
        })
        .collect();
    to_pretty(&ObjectsDocument {
        schema_version: OBJECTS_SCHEMA.to_string(),
        name: objects.name.clone(),
        objects: objects
            .objects
            .iter()
            .map(|o| ObjectDoc {
                name: o.name.clone(),
                class: o.classifier.clone(),
                slots: o.slots.iter().map(|(k, v)| (k.clone(), slot(v))).collect(),
            })
            .collect(),
        links,
    })
}

pub fn save_structural_file(model: &StructuralModel, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_file(path.as_ref(), &save_structural(model))
}

pub fn save_objects_file(
    objects: &ObjectModel,
    model: &StructuralModel,
    path: impl AsRef<Path>,
) -> Result<(), IoError> {
    write_file(path.as_ref(), &save_objects(objects, model))
}

fn write_file(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io { path: path.display().to_string(), source })
}
