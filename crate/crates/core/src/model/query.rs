use thiserror::Error;

use super::{EndRef, ObjectInstance, ObjectModel, StructuralModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NavigationError {
    #[error("unknown role '{role}' for class {class}")]
    UnknownRole { class: String, role: String },
}

/// All objects classified by `class`, ascending by object name.
pub fn instances_of<'a>(objects: &'a ObjectModel, class: &str) -> Vec<&'a ObjectInstance> {
    let mut found: Vec<_> = objects.objects.iter().filter(|o| o.classifier == class).collect();
    found.sort_by(|a, b| a.name.cmp(&b.name));
    found
}

/// Objects reached from `source` by following `role`, ascending by name.
pub fn navigate<'a>(
    model: &StructuralModel,
    objects: &'a ObjectModel,
    source: &ObjectInstance,
    role: &str,
) -> Result<Vec<&'a ObjectInstance>, NavigationError> {
    let (end, _) = model
        .navigable_end(&source.classifier, role)
        .ok_or_else(|| NavigationError::UnknownRole { class: source.classifier.clone(), role: role.to_string() })?;
    Ok(follow_end(objects, &end, &source.name))
}

/// Objects at `end` of every link whose opposite end holds `source`.
pub(crate) fn follow_end<'a>(objects: &'a ObjectModel, end: &EndRef, source: &str) -> Vec<&'a ObjectInstance> {
    let from = end.end.opposite();
    let mut found: Vec<&ObjectInstance> = objects
        .links
        .iter()
        .filter(|l| l.association == end.association && l.object_at(from) == source)
        .filter_map(|l| objects.object(l.object_at(end.end)))
        .collect();
    found.sort_by(|a, b| a.name.cmp(&b.name));
    found.dedup_by(|a, b| a.name == b.name);
    found
}
