use serde::{Deserialize, Serialize};

use super::{Decomposition, Metadata, Piece, PieceId, Role, Surface, SurfaceId};
use crate::compressionbody::{OneHandle, ZeroHandle};
use crate::orbifold::Weight;

pub const FORMAT_VERSION: u32 = 1;

/// On-disk shape of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub format_version: u32,
    pub surfaces: Vec<SurfaceEntry>,
    pub pieces: Vec<PieceEntry>,
    #[serde(default)]
    pub orientations: Vec<Orientation>,
    #[serde(default)]
    pub metadata: Metadata,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceEntry {
    pub id: SurfaceId,
    pub role: Role,
    pub genus: u32,
    #[serde(default)]
    pub punctures: Vec<Weight>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceEntry {
    pub id: PieceId,
    pub plus: SurfaceId,
    #[serde(default)]
    pub minus: Vec<SurfaceId>,
    pub zero_handles: Vec<ZeroHandle>,
    #[serde(default)]
    pub one_handles: Vec<OneHandle>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Orientation {
    pub surface: SurfaceId,
    pub toward: PieceId,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("unsupported format_version {0}")]
    Version(u32),
    #[error("duplicate {kind} id {id}")]
    Duplicate { kind: &'static str, id: String },
    #[error("orientation names unknown surface {0}")]
    UnknownSurface(String),
    #[error("surface {0} is oriented twice")]
    DoubleOrientation(String),
}

impl From<Decomposition> for DecompositionFile {
    fn from(d: Decomposition) -> Self {
        let mut surfaces = Vec::new();
        let mut orientations = Vec::new();
        for (id, s) in d.surfaces {
            if let Some(t) = s.toward {
                orientations.push(Orientation { surface: id.clone(), toward: t });
            }
            surfaces.push(SurfaceEntry {
                id,
                role: s.role,
                genus: s.component.genus(),
                punctures: s.component.punctures().to_vec(),
            });
        }
        let pieces = d
            .pieces
            .into_iter()
            .map(|(id, p)| PieceEntry {
                id,
                plus: p.plus,
                minus: p.minus,
                zero_handles: p.zero_handles,
                one_handles: p.one_handles,
            })
            .collect();
        DecompositionFile { format_version: FORMAT_VERSION, surfaces, pieces, orientations, metadata: d.metadata }
    }
}

impl TryFrom<DecompositionFile> for Decomposition {
    type Error = FormatError;

    fn try_from(f: DecompositionFile) -> Result<Self, FormatError> {
        if f.format_version != FORMAT_VERSION {
            return Err(FormatError::Version(f.format_version));
        }
        let mut d = Decomposition { metadata: f.metadata, ..Default::default() };
        for s in f.surfaces {
            let component = crate::orbifold::SurfaceComponent::new(s.genus, s.punctures);
            let entry = Surface { role: s.role, component, toward: None };
            if d.surfaces.insert(s.id.clone(), entry).is_some() {
                return Err(FormatError::Duplicate { kind: "surface", id: s.id });
            }
        }
        for p in f.pieces {
            let piece = Piece { zero_handles: p.zero_handles, one_handles: p.one_handles, plus: p.plus, minus: p.minus };
            if d.pieces.insert(p.id.clone(), piece).is_some() {
                return Err(FormatError::Duplicate { kind: "piece", id: p.id });
            }
        }
        for o in f.orientations {
            let s = d.surfaces.get_mut(&o.surface).ok_or_else(|| FormatError::UnknownSurface(o.surface.clone()))?;
            if s.toward.replace(o.toward).is_some() {
                return Err(FormatError::DoubleOrientation(o.surface));
            }
        }
        Ok(d)
    }
}
