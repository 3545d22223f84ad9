use std::collections::{HashMap, HashSet};
use std::fmt;

use super::query::follow_end;
use super::{is_identifier, EndIndex, ObjectModel, StructuralModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// A problem found while validating a model. `path` addresses the offending
/// element by position, e.g. `associations[0].end2` or `objects[1].slots.pages`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDiagnostic {
    pub severity: Severity,
    pub path: String,
    pub message: String,
}

impl ModelDiagnostic {
    pub(crate) fn error(path: impl Into<String>, message: impl Into<String>) -> Self {
        ModelDiagnostic { severity: Severity::Error, path: path.into(), message: message.into() }
    }

    pub(crate) fn warning(path: impl Into<String>, message: impl Into<String>) -> Self {
        ModelDiagnostic { severity: Severity::Warning, path: path.into(), message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ModelDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.severity, self.path, self.message)
    }
}

fn end_path(assoc: usize, which: EndIndex) -> String {
    match which {
        EndIndex::First => format!("associations[{assoc}].end1"),
        EndIndex::Second => format!("associations[{assoc}].end2"),
    }
}

/// Checks the internal consistency of a structural model. An empty result
/// means every invariant holds.
pub fn validate_structural(model: &StructuralModel) -> Vec<ModelDiagnostic> {
    let mut out = Vec::new();

    let mut class_names = HashSet::new();
    for (i, class) in model.classes.iter().enumerate() {
        let path = format!("classes[{i}]");
        if !is_identifier(&class.name) {
            out.push(ModelDiagnostic::error(&path, format!("invalid class name '{}'", class.name)));
        }
        if !class_names.insert(class.name.as_str()) {
            out.push(ModelDiagnostic::error(&path, format!("duplicate class name '{}'", class.name)));
        }
        let mut attr_names = HashSet::new();
        for (j, attr) in class.attributes.iter().enumerate() {
            let path = format!("{path}.attributes[{j}]");
            if !is_identifier(&attr.name) {
                out.push(ModelDiagnostic::error(&path, format!("invalid attribute name '{}'", attr.name)));
            }
            if !attr_names.insert(attr.name.as_str()) {
                out.push(ModelDiagnostic::error(
                    &path,
                    format!("duplicate attribute name '{}' in class {}", attr.name, class.name),
                ));
            }
        }
    }

    let mut assoc_names = HashSet::new();
    for (i, assoc) in model.associations.iter().enumerate() {
        let path = format!("associations[{i}]");
        if !is_identifier(&assoc.name) {
            out.push(ModelDiagnostic::error(&path, format!("invalid association name '{}'", assoc.name)));
        }
        if !assoc_names.insert(assoc.name.as_str()) {
            out.push(ModelDiagnostic::error(&path, format!("duplicate association name '{}'", assoc.name)));
        }
        for which in [EndIndex::First, EndIndex::Second] {
            let end = assoc.end(which);
            let path = end_path(i, which);
            if !is_identifier(&end.name) {
                out.push(ModelDiagnostic::error(&path, format!("invalid role name '{}'", end.name)));
            }
            if model.class(&end.target).is_none() {
                out.push(ModelDiagnostic::error(&path, format!("unknown target class '{}'", end.target)));
            }
            let m = end.multiplicity;
            match m.upper {
                Some(0) => out.push(ModelDiagnostic::error(&path, format!("upper bound must be positive in {m}"))),
                Some(u) if m.lower > u => {
                    out.push(ModelDiagnostic::error(&path, format!("lower > upper in multiplicity {m}")))
                }
                _ => {}
            }
        }
    }

    // Role names must be unambiguous from every class they are navigated from,
    // including against that class's own attributes.
    let mut roles_by_class: HashMap<&str, HashSet<&str>> = HashMap::new();
    for (i, assoc) in model.associations.iter().enumerate() {
        for which in [EndIndex::First, EndIndex::Second] {
            let end = assoc.end(which);
            let from = assoc.end(which.opposite()).target.as_str();
            if !roles_by_class.entry(from).or_default().insert(end.name.as_str()) {
                out.push(ModelDiagnostic::error(
                    end_path(i, which),
                    format!("role '{}' is not unique among ends navigable from {from}", end.name),
                ));
            }
            if model.class(from).is_some_and(|c| c.attribute(&end.name).is_some()) {
                out.push(ModelDiagnostic::error(
                    end_path(i, which),
                    format!("role '{}' clashes with an attribute of {from}", end.name),
                ));
            }
        }
    }

    let mut constraint_names = HashSet::new();
    for (i, constraint) in model.constraints.iter().enumerate() {
        let path = format!("constraints[{i}]");
        if !constraint_names.insert(constraint.name.as_str()) {
            out.push(ModelDiagnostic::error(&path, format!("duplicate constraint name '{}'", constraint.name)));
        }
        if model.class(&constraint.context).is_none() {
            out.push(ModelDiagnostic::error(&path, format!("unknown context class '{}'", constraint.context)));
        }
        if constraint.language != "OCL" {
            out.push(ModelDiagnostic::error(
                &path,
                format!("unsupported constraint language '{}'", constraint.language),
            ));
        }
    }

    out
}

/// Checks that `objects` is an instance of `model`. Multiplicity-count
/// violations are reported as warnings; everything else is an error.
pub fn validate_conformance(objects: &ObjectModel, model: &StructuralModel) -> Vec<ModelDiagnostic> {
    let mut out = Vec::new();

    let mut object_names = HashSet::new();
    for (i, object) in objects.objects.iter().enumerate() {
        let path = format!("objects[{i}]");
        if !is_identifier(&object.name) {
            out.push(ModelDiagnostic::error(&path, format!("invalid object name '{}'", object.name)));
        }
        if !object_names.insert(object.name.as_str()) {
            out.push(ModelDiagnostic::error(&path, format!("duplicate object name '{}'", object.name)));
        }
        let Some(class) = model.class(&object.classifier) else {
            out.push(ModelDiagnostic::error(&path, format!("unknown class '{}'", object.classifier)));
            continue;
        };
        for (attr_name, value) in &object.slots {
            let path = format!("{path}.slots.{attr_name}");
            match class.attribute(attr_name) {
                None => out.push(ModelDiagnostic::error(
                    &path,
                    format!("class {} has no attribute '{attr_name}'", class.name),
                )),
                Some(attr) if attr.ty != value.kind() => out.push(ModelDiagnostic::error(
                    &path,
                    format!("slot type mismatch: expected {}, found {}", attr.ty, value.kind()),
                )),
                Some(_) => {}
            }
        }
    }

    let mut link_names = HashSet::new();
    for (i, link) in objects.links.iter().enumerate() {
        let path = format!("links[{i}]");
        if !link_names.insert(link.name.as_str()) {
            out.push(ModelDiagnostic::error(&path, format!("duplicate link name '{}'", link.name)));
        }
        let Some(assoc) = model.association(&link.association) else {
            out.push(ModelDiagnostic::error(&path, format!("unknown association '{}'", link.association)));
            continue;
        };
        for which in [EndIndex::First, EndIndex::Second] {
            let name = link.object_at(which);
            let end = assoc.end(which);
            match objects.object(name) {
                None => out.push(ModelDiagnostic::error(&path, format!("unknown object '{name}'"))),
                Some(obj) if obj.classifier != end.target => out.push(ModelDiagnostic::error(
                    &path,
                    format!(
                        "object '{name}' of class {} cannot fill role '{}' of class {}",
                        obj.classifier, end.name, end.target
                    ),
                )),
                Some(_) => {}
            }
        }
    }

    for (i, object) in objects.objects.iter().enumerate() {
        for (end_ref, end) in model.navigable_ends(&object.classifier) {
            let count = follow_end(objects, &end_ref, &object.name).len();
            if !end.multiplicity.admits(count) {
                out.push(ModelDiagnostic::warning(
                    format!("objects[{i}]"),
                    format!(
                        "object '{}' has {count} link(s) via '{}', expected {}",
                        object.name, end.name, end.multiplicity
                    ),
                ));
            }
        }
    }

    out
}
