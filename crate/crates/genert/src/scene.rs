//! Propagation environment: semantic-tagged triangle surfaces plus material
//! tables under three humidity levels.
//!
//! Scenes are stored as TOML documents with top-level `classes`, `materials`,
//! `surfaces` and `bounds` keys (all lengths in meters). The loader validates
//! every structural invariant and re-normalizes stored normals; humidity
//! variants either come from explicit table entries (the ground classes) or
//! are derived by scaling the dry entry.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::math::Vec3;

/// Minimum triangle area treated as non-degenerate, m^2.
pub const MIN_TRIANGLE_AREA: f64 = 1e-12;

/// Scaling applied to dry material parameters when no explicit table entry
/// exists for the requested humidity.
pub const MEDIUM_DRY_SCALE: f64 = 1.30;
pub const WET_SCALE: f64 = 1.60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Humidity {
    Dry,
    MediumDry,
    Wet,
}

impl Humidity {
    pub fn as_str(self) -> &'static str {
        match self {
            Humidity::Dry => "dry",
            Humidity::MediumDry => "medium_dry",
            Humidity::Wet => "wet",
        }
    }

    pub fn parse(s: &str) -> Option<Humidity> {
        match s {
            "dry" => Some(Humidity::Dry),
            "medium_dry" => Some(Humidity::MediumDry),
            "wet" => Some(Humidity::Wet),
            _ => None,
        }
    }
}

impl fmt::Display for Humidity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Categorical scatterer tag fed to the interaction model as an embedded
/// one-hot index.
#[derive(Clone, Debug, PartialEq)]
pub struct SemanticClass {
    pub id: u32,
    pub name: String,
    pub one_hot_index: usize,
}

/// Half-space electrical parameters of one scatterer class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Material {
    pub relative_permittivity: f64,
    pub conductivity: f64,
}

impl Material {
    pub fn is_valid(&self) -> bool {
        self.relative_permittivity.is_finite()
            && self.conductivity.is_finite()
            && self.relative_permittivity >= 1.0
            && self.conductivity >= 0.0
    }

    fn scaled(&self, factor: f64) -> Material {
        Material {
            relative_permittivity: self.relative_permittivity * factor,
            conductivity: self.conductivity * factor,
        }
    }
}

/// One triangle with a unit normal and a semantic class tag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Surface {
    pub id: u32,
    pub class_id: u32,
    pub vertices: [Vec3; 3],
    pub normal: Vec3,
}

impl Surface {
    pub fn edge1(&self) -> Vec3 {
        self.vertices[1] - self.vertices[0]
    }

    pub fn edge2(&self) -> Vec3 {
        self.vertices[2] - self.vertices[0]
    }

    pub fn area(&self) -> f64 {
        self.edge1().cross(self.edge2()).norm() * 0.5
    }

    pub fn centroid(&self) -> Vec3 {
        (self.vertices[0] + self.vertices[1] + self.vertices[2]) / 3.0
    }
}

/// Axis-aligned box, meters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn contains(&self, p: Vec3) -> bool {
        p.x >= self.min.x
            && p.y >= self.min.y
            && p.z >= self.min.z
            && p.x <= self.max.x
            && p.y <= self.max.y
            && p.z <= self.max.z
    }
}

/// Immutable propagation environment. Safe to share across threads.
#[derive(Clone, Debug)]
pub struct Environment {
    surfaces: Vec<Surface>,
    classes: Vec<SemanticClass>,
    materials: HashMap<(u32, Humidity), Material>,
    bounds: Aabb,
}

#[derive(Debug)]
pub enum SceneError {
    Io(std::io::Error),
    Parse(String),
    DegenerateSurface { surface_id: u32, area: f64 },
    UnknownSemanticClass { surface_id: u32, class_id: u32 },
    MissingMaterial { class_id: u32, humidity: Humidity },
    InvalidNormal { surface_id: u32 },
    InvalidMaterial { class_id: u32, humidity: Humidity },
    OutOfBounds { surface_id: u32 },
    DuplicateId { kind: &'static str, id: u32 },
    NonDenseClassIds,
    EmptyScene,
    InvalidBounds,
}

impl fmt::Display for SceneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SceneError::Io(e) => write!(f, "scene io error: {e}"),
            SceneError::Parse(m) => write!(f, "scene parse error: {m}"),
            SceneError::DegenerateSurface { surface_id, area } => {
                write!(f, "surface {surface_id} is degenerate (area {area:.3e} m^2)")
            }
            SceneError::UnknownSemanticClass { surface_id, class_id } => {
                write!(f, "surface {surface_id} references undefined class {class_id}")
            }
            SceneError::MissingMaterial { class_id, humidity } => {
                write!(f, "class {class_id} has no material entry for humidity {humidity}")
            }
            SceneError::InvalidNormal { surface_id } => {
                write!(f, "surface {surface_id} has a stored normal inconsistent with its vertices")
            }
            SceneError::InvalidMaterial { class_id, humidity } => {
                write!(f, "material for class {class_id} ({humidity}) violates permittivity/conductivity bounds")
            }
            SceneError::OutOfBounds { surface_id } => {
                write!(f, "surface {surface_id} has a vertex outside the declared bounds")
            }
            SceneError::DuplicateId { kind, id } => write!(f, "duplicate {kind} id {id}"),
            SceneError::NonDenseClassIds => {
                write!(f, "class ids must be dense (0..n-1)")
            }
            SceneError::EmptyScene => write!(f, "scene declares no surfaces"),
            SceneError::InvalidBounds => write!(f, "bounds min must not exceed max"),
        }
    }
}

impl std::error::Error for SceneError {}

impl From<std::io::Error> for SceneError {
    fn from(e: std::io::Error) -> Self {
        SceneError::Io(e)
    }
}

// ---------------------------------------------------------------------------
// Raw document (pre-validation file contents)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Deserialize)]
pub struct SceneDoc {
    #[serde(default)]
    pub classes: Vec<ClassEntry>,
    #[serde(default)]
    pub materials: Vec<MaterialEntry>,
    #[serde(default)]
    pub surfaces: Vec<SurfaceEntry>,
    pub bounds: BoundsEntry,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ClassEntry {
    pub id: u32,
    pub name: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct MaterialEntry {
    pub class_id: u32,
    pub humidity: Humidity,
    pub permittivity: f64,
    pub conductivity: f64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SurfaceEntry {
    pub id: u32,
    pub class_id: u32,
    /// Nine reals: three vertices in winding order.
    pub vertices: [f64; 9],
    /// Optional three reals; re-normalized by the loader.
    pub normal: Option<[f64; 3]>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct BoundsEntry {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl SurfaceEntry {
    pub fn vertex(&self, i: usize) -> Vec3 {
        Vec3::new(self.vertices[3 * i], self.vertices[3 * i + 1], self.vertices[3 * i + 2])
    }

    fn geometric_normal(&self) -> Option<Vec3> {
        let e1 = self.vertex(1) - self.vertex(0);
        let e2 = self.vertex(2) - self.vertex(0);
        e1.cross(e2).try_normalized()
    }
}

impl SceneDoc {
    pub fn parse(text: &str) -> Result<SceneDoc, SceneError> {
        toml::from_str(text).map_err(|e| SceneError::Parse(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<SceneDoc, SceneError> {
        let text = std::fs::read_to_string(path)?;
        SceneDoc::parse(&text)
    }
}

// ---------------------------------------------------------------------------
// Validation report
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    NonUnitNormal,
    InconsistentNormal,
    DegenerateSurface,
    UnknownSemanticClass,
    MissingMaterial,
    InvalidMaterial,
    OutOfBounds,
    DuplicateId,
    NonDenseClassIds,
    InvalidBounds,
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.message)
    }
}

/// Checks a raw scene document against every structural invariant and
/// returns the violations found. Violations are data, not errors: an empty
/// report means the document loads cleanly.
pub fn validate_scene_doc(doc: &SceneDoc) -> Vec<Violation> {
    let mut report = Vec::new();
    let mut push = |kind, message: String| report.push(Violation { kind, message });

    let bounds_ok = doc.bounds.min.iter().zip(&doc.bounds.max).all(|(a, b)| a <= b);
    if !bounds_ok {
        push(ViolationKind::InvalidBounds, "bounds min exceeds max".into());
    }
    let bmin = Vec3::new(doc.bounds.min[0], doc.bounds.min[1], doc.bounds.min[2]);
    let bmax = Vec3::new(doc.bounds.max[0], doc.bounds.max[1], doc.bounds.max[2]);
    let bounds = Aabb { min: bmin, max: bmax };

    let mut class_ids: Vec<u32> = doc.classes.iter().map(|c| c.id).collect();
    class_ids.sort_unstable();
    for w in class_ids.windows(2) {
        if w[0] == w[1] {
            push(ViolationKind::DuplicateId, format!("class id {} declared twice", w[0]));
        }
    }
    if !class_ids.iter().enumerate().all(|(i, id)| *id == i as u32) {
        push(ViolationKind::NonDenseClassIds, format!("class ids {class_ids:?} are not 0..n-1"));
    }

    for class in &doc.classes {
        let dry = doc
            .materials
            .iter()
            .find(|m| m.class_id == class.id && m.humidity == Humidity::Dry);
        if dry.is_none() {
            push(
                ViolationKind::MissingMaterial,
                format!("class {} ({}) lacks a dry material entry", class.id, class.name),
            );
        }
    }
    for mat in &doc.materials {
        let m = Material { relative_permittivity: mat.permittivity, conductivity: mat.conductivity };
        if !m.is_valid() {
            push(
                ViolationKind::InvalidMaterial,
                format!(
                    "material class {} {}: permittivity {} conductivity {}",
                    mat.class_id, mat.humidity, mat.permittivity, mat.conductivity
                ),
            );
        }
        if !doc.classes.iter().any(|c| c.id == mat.class_id) {
            push(
                ViolationKind::UnknownSemanticClass,
                format!("material references undefined class {}", mat.class_id),
            );
        }
    }

    let mut seen_surface_ids = std::collections::HashSet::new();
    for s in &doc.surfaces {
        if !seen_surface_ids.insert(s.id) {
            push(ViolationKind::DuplicateId, format!("surface id {} declared twice", s.id));
        }
        if !doc.classes.iter().any(|c| c.id == s.class_id) {
            push(
                ViolationKind::UnknownSemanticClass,
                format!("surface {} references undefined class {}", s.id, s.class_id),
            );
        }
        let e1 = s.vertex(1) - s.vertex(0);
        let e2 = s.vertex(2) - s.vertex(0);
        let area = e1.cross(e2).norm() * 0.5;
        if area <= MIN_TRIANGLE_AREA {
            push(
                ViolationKind::DegenerateSurface,
                format!("surface {} area {:.3e} m^2", s.id, area),
            );
            continue;
        }
        if let Some(n) = s.normal {
            let stored = Vec3::new(n[0], n[1], n[2]);
            let norm = stored.norm();
            if (norm - 1.0).abs() > crate::math::UNIT_TOL {
                match stored.try_normalized() {
                    Some(renorm) => push(
                        ViolationKind::NonUnitNormal,
                        format!(
                            "surface {} normal ({}, {}, {}) has norm {}; re-normalized to ({}, {}, {})",
                            s.id, n[0], n[1], n[2], norm, renorm.x, renorm.y, renorm.z
                        ),
                    ),
                    None => push(
                        ViolationKind::InconsistentNormal,
                        format!("surface {} normal is the zero vector", s.id),
                    ),
                }
            }
            if let Some(unit) = stored.try_normalized() {
                if unit.dot(e1).abs() > 1e-9 * e1.norm() || unit.dot(e2).abs() > 1e-9 * e2.norm() {
                    push(
                        ViolationKind::InconsistentNormal,
                        format!("surface {} stored normal is not orthogonal to its edges", s.id),
                    );
                }
            }
        }
        for i in 0..3 {
            if !bounds.contains(s.vertex(i)) {
                push(
                    ViolationKind::OutOfBounds,
                    format!("surface {} vertex {} lies outside the declared bounds", s.id, i),
                );
            }
        }
    }
    report
}

/// Loads, validates and normalizes a scene file.
pub fn load_environment(path: &Path) -> Result<Environment, SceneError> {
    let doc = SceneDoc::from_path(path)?;
    environment_from_doc(&doc)
}

pub fn environment_from_doc(doc: &SceneDoc) -> Result<Environment, SceneError> {
    if doc.surfaces.is_empty() {
        return Err(SceneError::EmptyScene);
    }
    if !doc.bounds.min.iter().zip(&doc.bounds.max).all(|(a, b)| a <= b) {
        return Err(SceneError::InvalidBounds);
    }
    let bounds = Aabb {
        min: Vec3::new(doc.bounds.min[0], doc.bounds.min[1], doc.bounds.min[2]),
        max: Vec3::new(doc.bounds.max[0], doc.bounds.max[1], doc.bounds.max[2]),
    };

    let mut class_ids: Vec<u32> = doc.classes.iter().map(|c| c.id).collect();
    class_ids.sort_unstable();
    for w in class_ids.windows(2) {
        if w[0] == w[1] {
            return Err(SceneError::DuplicateId { kind: "class", id: w[0] });
        }
    }
    if !class_ids.iter().enumerate().all(|(i, id)| *id == i as u32) {
        return Err(SceneError::NonDenseClassIds);
    }
    let mut classes: Vec<SemanticClass> = doc
        .classes
        .iter()
        .map(|c| SemanticClass { id: c.id, name: c.name.clone(), one_hot_index: c.id as usize })
        .collect();
    classes.sort_by_key(|c| c.id);

    let mut materials = HashMap::new();
    for mat in &doc.materials {
        if !classes.iter().any(|c| c.id == mat.class_id) {
            return Err(SceneError::UnknownSemanticClass { surface_id: u32::MAX, class_id: mat.class_id });
        }
        let m = Material { relative_permittivity: mat.permittivity, conductivity: mat.conductivity };
        if !m.is_valid() {
            return Err(SceneError::InvalidMaterial { class_id: mat.class_id, humidity: mat.humidity });
        }
        materials.insert((mat.class_id, mat.humidity), m);
    }
    for class in &classes {
        if !materials.contains_key(&(class.id, Humidity::Dry)) {
            return Err(SceneError::MissingMaterial { class_id: class.id, humidity: Humidity::Dry });
        }
    }

    let mut surfaces = Vec::with_capacity(doc.surfaces.len());
    let mut seen = std::collections::HashSet::new();
    for s in &doc.surfaces {
        if !seen.insert(s.id) {
            return Err(SceneError::DuplicateId { kind: "surface", id: s.id });
        }
        if !classes.iter().any(|c| c.id == s.class_id) {
            return Err(SceneError::UnknownSemanticClass { surface_id: s.id, class_id: s.class_id });
        }
        let vertices = [s.vertex(0), s.vertex(1), s.vertex(2)];
        let e1 = vertices[1] - vertices[0];
        let e2 = vertices[2] - vertices[0];
        let area = e1.cross(e2).norm() * 0.5;
        if area <= MIN_TRIANGLE_AREA {
            return Err(SceneError::DegenerateSurface { surface_id: s.id, area });
        }
        // Stored normals win if present and consistent; otherwise the normal
        // is recomputed from vertex winding.
        let normal = match s.normal {
            Some(n) => {
                let stored = Vec3::new(n[0], n[1], n[2]);
                let unit = stored.try_normalized().ok_or(SceneError::InvalidNormal { surface_id: s.id })?;
                if unit.dot(e1).abs() > 1e-9 * e1.norm() || unit.dot(e2).abs() > 1e-9 * e2.norm() {
                    return Err(SceneError::InvalidNormal { surface_id: s.id });
                }
                unit
            }
            None => s.geometric_normal().ok_or(SceneError::DegenerateSurface { surface_id: s.id, area })?,
        };
        for v in &vertices {
            if !bounds.contains(*v) {
                return Err(SceneError::OutOfBounds { surface_id: s.id });
            }
        }
        surfaces.push(Surface { id: s.id, class_id: s.class_id, vertices, normal });
    }

    Ok(Environment { surfaces, classes, materials, bounds })
}

impl Environment {
    pub fn surfaces(&self) -> &[Surface] {
        &self.surfaces
    }

    pub fn classes(&self) -> &[SemanticClass] {
        &self.classes
    }

    pub fn bounds(&self) -> Aabb {
        self.bounds
    }

    /// Number of distinct semantic classes (the one-hot vocabulary size).
    pub fn vocab_size(&self) -> usize {
        self.classes.len()
    }

    pub fn surface_by_id(&self, id: u32) -> Option<&Surface> {
        self.surfaces.iter().find(|s| s.id == id)
    }

    pub fn class_by_id(&self, id: u32) -> Option<&SemanticClass> {
        self.classes.iter().find(|c| c.id == id)
    }

    /// Material parameters for a class under the requested humidity level.
    ///
    /// Explicit table entries win (this is how the ground classes carry their
    /// own humidity variants); for classes without an entry the dry values are
    /// scaled by 1.30 (medium dry) or 1.60 (wet).
    pub fn material_for(&self, class_id: u32, humidity: Humidity) -> Result<Material, SceneError> {
        if let Some(m) = self.materials.get(&(class_id, humidity)) {
            return Ok(*m);
        }
        let dry = self
            .materials
            .get(&(class_id, Humidity::Dry))
            .ok_or(SceneError::MissingMaterial { class_id, humidity })?;
        Ok(match humidity {
            Humidity::Dry => *dry,
            Humidity::MediumDry => dry.scaled(MEDIUM_DRY_SCALE),
            Humidity::Wet => dry.scaled(WET_SCALE),
        })
    }

    /// Raw material table iterator (used by the scene writer).
    pub fn material_entries(&self) -> impl Iterator<Item = (&(u32, Humidity), &Material)> {
        self.materials.iter()
    }

    /// Constructs an environment directly from parts; used by tests and
    /// synthetic dataset builders. Invariants are the caller's problem.
    pub fn from_parts(
        surfaces: Vec<Surface>,
        classes: Vec<SemanticClass>,
        materials: HashMap<(u32, Humidity), Material>,
        bounds: Aabb,
    ) -> Environment {
        Environment { surfaces, classes, materials, bounds }
    }
}

/// Re-checks environment invariants (loader output should always produce an
/// empty report).
pub fn validate_environment(env: &Environment) -> Vec<Violation> {
    let mut report = Vec::new();
    for s in env.surfaces() {
        if (s.normal.norm() - 1.0).abs() > crate::math::UNIT_TOL {
            report.push(Violation {
                kind: ViolationKind::NonUnitNormal,
                message: format!("surface {} normal norm {}", s.id, s.normal.norm()),
            });
        }
        if s.area() <= MIN_TRIANGLE_AREA {
            report.push(Violation {
                kind: ViolationKind::DegenerateSurface,
                message: format!("surface {} area {:.3e}", s.id, s.area()),
            });
        }
        if env.class_by_id(s.class_id).is_none() {
            report.push(Violation {
                kind: ViolationKind::UnknownSemanticClass,
                message: format!("surface {} class {}", s.id, s.class_id),
            });
        }
        for v in &s.vertices {
            if !env.bounds().contains(*v) {
                report.push(Violation {
                    kind: ViolationKind::OutOfBounds,
                    message: format!("surface {} vertex outside bounds", s.id),
                });
            }
        }
    }
    for class in env.classes() {
        if env.material_for(class.id, Humidity::Dry).is_err() {
            report.push(Violation {
                kind: ViolationKind::MissingMaterial,
                message: format!("class {} has no dry material", class.id),
            });
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

use crate::textio::format_f64;

/// Serializes an environment back to the scene TOML schema.
pub fn save_environment(env: &Environment, path: &Path) -> Result<(), SceneError> {
    let mut out = String::new();
    out.push_str("# Scene description: semantic-tagged triangle surfaces with material tables.\n");
    out.push_str("schema_version = 1\n");
    for c in env.classes() {
        out.push_str(&format!("\n[[classes]]\nid = {}\nname = \"{}\"\n", c.id, c.name));
    }
    let mut entries: Vec<(&(u32, Humidity), &Material)> = env.material_entries().collect();
    entries.sort_by_key(|((id, h), _)| (*id, h.as_str()));
    for ((class_id, humidity), m) in entries {
        out.push_str(&format!(
            "\n[[materials]]\nclass_id = {}\nhumidity = \"{}\"\npermittivity = {}\nconductivity = {}\n",
            class_id,
            humidity,
            format_f64(m.relative_permittivity),
            format_f64(m.conductivity)
        ));
    }
    for s in env.surfaces() {
        let v: Vec<String> = s
            .vertices
            .iter()
            .flat_map(|p| [format_f64(p.x), format_f64(p.y), format_f64(p.z)])
            .collect();
        out.push_str(&format!(
            "\n[[surfaces]]\nid = {}\nclass_id = {}\nvertices = [{}]\nnormal = [{}, {}, {}]\n",
            s.id,
            s.class_id,
            v.join(", "),
            format_f64(s.normal.x),
            format_f64(s.normal.y),
            format_f64(s.normal.z)
        ));
    }
    let b = env.bounds();
    out.push_str(&format!(
        "\n[bounds]\nmin = [{}, {}, {}]\nmax = [{}, {}, {}]\n",
        format_f64(b.min.x),
        format_f64(b.min.y),
        format_f64(b.min.z),
        format_f64(b.max.x),
        format_f64(b.max.y),
        format_f64(b.max.z)
    ));
    std::fs::write(path, out)?;
    Ok(())
}
