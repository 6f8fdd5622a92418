//! Canonical `.scene.json` documents.
//!
//! Keys appear in a fixed order and floats use the shortest decimal that
//! parses back to the same `f64`, so `save(load(save(s)))` is byte-identical
//! to `save(s)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use super::{EngineConfig, Group, Scene, View, Violation};
use crate::elements::{
    CircleEl, CommentEl, ControlEl, Element, ElementId, ElementKind, LabyrinthEl, PathEl, PieEl,
    PlotAreaEl, PolygonEl, ScaleEl, SpotEl,
};
use crate::scene::GroupId;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoadError {
    #[error("unsupported document version {found} (expected {FORMAT_VERSION})")]
    Version { found: u64 },
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("invariant violation: {}", describe(.element, .group, .message))]
    Invariant { element: Option<ElementId>, group: Option<GroupId>, message: String },
}

fn describe(element: &Option<ElementId>, group: &Option<GroupId>, message: &str) -> String {
    Violation { element: *element, group: *group, message: message.to_string() }.to_string()
}

impl From<Violation> for LoadError {
    fn from(v: Violation) -> Self {
        LoadError::Invariant { element: v.element, group: v.group, message: v.message }
    }
}

struct KindRef<'a>(&'a ElementKind);

impl Serialize for KindRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            ElementKind::Polygon(x) => x.serialize(s),
            ElementKind::Circle(x) => x.serialize(s),
            ElementKind::Pie(x) => x.serialize(s),
            ElementKind::Control(x) => x.serialize(s),
            ElementKind::Comment(x) => x.serialize(s),
            ElementKind::PlotArea(x) => x.serialize(s),
            ElementKind::Scale(x) => x.serialize(s),
            ElementKind::Spot(x) => x.serialize(s),
            ElementKind::Labyrinth(x) => x.serialize(s),
            ElementKind::Path(x) => x.serialize(s),
        }
    }
}

#[derive(Serialize)]
struct ElementOut<'a> {
    id: ElementId,
    kind: &'static str,
    z: usize,
    rotatable: bool,
    geometry: KindRef<'a>,
    style: &'a Value,
}

#[derive(Serialize)]
struct DocOut<'a> {
    version: u64,
    config: &'a EngineConfig,
    elements: Vec<ElementOut<'a>>,
    groups: &'a [Group],
    views: &'a BTreeMap<String, View>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementIn {
    id: ElementId,
    kind: String,
    z: usize,
    rotatable: bool,
    geometry: Value,
    #[serde(default)]
    style: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DocIn {
    #[allow(dead_code)]
    version: u64,
    config: EngineConfig,
    elements: Vec<ElementIn>,
    groups: Vec<Group>,
    views: BTreeMap<String, View>,
}

/// Serialises a scene to its canonical document (UTF-8, LF line endings,
/// trailing newline).
pub fn save_scene(scene: &Scene) -> String {
    let doc = DocOut {
        version: FORMAT_VERSION,
        config: &scene.config,
        elements: scene
            .elements()
            .iter()
            .enumerate()
            .map(|(z, e)| ElementOut {
                id: e.id,
                kind: e.kind.name(),
                z,
                rotatable: e.rotatable,
                geometry: KindRef(&e.kind),
                style: &e.style,
            })
            .collect(),
        groups: scene.groups(),
        views: scene.views(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("scene documents always serialise");
    out.push('\n');
    out
}

fn parse_kind(kind: &str, geometry: Value) -> Result<ElementKind, String> {
    fn de<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, String> {
        serde_json::from_value(v).map_err(|e| e.to_string())
    }
    Ok(match kind {
        "polygon" => ElementKind::Polygon(de::<PolygonEl>(geometry)?),
        "circle" => ElementKind::Circle(de::<CircleEl>(geometry)?),
        "pie" => ElementKind::Pie(de::<PieEl>(geometry)?),
        "control" => ElementKind::Control(de::<ControlEl>(geometry)?),
        "comment" => ElementKind::Comment(de::<CommentEl>(geometry)?),
        "plot_area" => ElementKind::PlotArea(de::<PlotAreaEl>(geometry)?),
        "scale" => ElementKind::Scale(de::<ScaleEl>(geometry)?),
        "spot" => ElementKind::Spot(de::<SpotEl>(geometry)?),
        "labyrinth" => ElementKind::Labyrinth(de::<LabyrinthEl>(geometry)?),
        "path" => ElementKind::Path(de::<PathEl>(geometry)?),
        other => return Err(format!("unknown element kind {other:?}")),
    })
}

/// Parses and validates a scene document. Version, syntax/shape and
/// invariant problems are reported as distinct [`LoadError`] variants.
pub fn load_scene(text: &str) -> Result<Scene, LoadError> {
    let value: Value = serde_json::from_str(text).map_err(|e| LoadError::Malformed(e.to_string()))?;
    let version = value
        .get("version")
        .ok_or_else(|| LoadError::Malformed("missing version".into()))?
        .as_u64()
        .ok_or_else(|| LoadError::Malformed("version must be an unsigned integer".into()))?;
    if version != FORMAT_VERSION {
        return Err(LoadError::Version { found: version });
    }
    let doc: DocIn = serde_json::from_value(value).map_err(|e| LoadError::Malformed(e.to_string()))?;

    let n = doc.elements.len();
    let mut slots: Vec<Option<Element>> = vec![None; n];
    for raw in doc.elements {
        let kind = parse_kind(&raw.kind, raw.geometry)
            .map_err(|m| LoadError::Malformed(format!("element {}: {m}", raw.id)))?;
        let invariant = |message: String| LoadError::Invariant { element: Some(raw.id), group: None, message };
        if raw.z >= n {
            return Err(invariant(format!("z {} out of range 0..{n}", raw.z)));
        }
        if slots[raw.z].is_some() {
            return Err(invariant(format!("z {} used twice", raw.z)));
        }
        slots[raw.z] = Some(Element { id: raw.id, kind, rotatable: raw.rotatable, style: raw.style });
    }

    let mut scene = Scene::new(doc.config);
    for el in slots.into_iter().flatten() {
        scene.insert_loaded(el);
    }
    for g in doc.groups {
        scene.insert_group_loaded(g);
    }
    for (name, v) in doc.views {
        scene.insert_view_loaded(name, v);
    }
    if let Some(v) = scene.violations().into_iter().next() {
        return Err(v.into());
    }
    scene.take_touched();
    Ok(scene)
}
