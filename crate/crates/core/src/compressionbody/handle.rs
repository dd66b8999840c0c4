use serde::{Deserialize, Serialize};

use crate::orbifold::{SurfaceComponent, Weight};

/// A 0-handle: a ball containing the cone on at most three points, or a
/// product `F × I` whose vertical arcs sit over the punctures of `F`.
///
/// Slots are the punctures of the handle's outer boundary: `cone[i]` for a
/// ball, `base.punctures()[i]` for a product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ZeroHandle {
    Ball {
        #[serde(default)]
        cone: Vec<Weight>,
    },
    Product {
        base: SurfaceComponent,
    },
}

impl ZeroHandle {
    pub fn ball(cone: Vec<Weight>) -> Self {
        ZeroHandle::Ball { cone }
    }

    pub fn empty_ball() -> Self {
        ZeroHandle::Ball { cone: Vec::new() }
    }

    pub fn product(base: SurfaceComponent) -> Self {
        ZeroHandle::Product { base }
    }

    pub fn slots(&self) -> &[Weight] {
        match self {
            ZeroHandle::Ball { cone } => cone,
            ZeroHandle::Product { base } => base.punctures(),
        }
    }

    pub fn is_ball(&self) -> bool {
        matches!(self, ZeroHandle::Ball { .. })
    }

    pub fn is_product(&self) -> bool {
        matches!(self, ZeroHandle::Product { .. })
    }

    /// Euler characteristic of the outer boundary (before 1-handles).
    pub fn euler(&self) -> i64 {
        match self {
            ZeroHandle::Ball { .. } => 2,
            ZeroHandle::Product { base } => base.euler(),
        }
    }

    /// Whether the cone point is an interior vertex of the graph.
    pub fn has_vertex(&self) -> bool {
        matches!(self, ZeroHandle::Ball { cone } if cone.len() == 1 || cone.len() == 3)
    }
}

/// Where a 1-handle end is glued: a 0-handle and, for weighted handles, the
/// slot carrying the matching puncture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Site {
    pub handle: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot: Option<usize>,
}

impl Site {
    pub fn disc(handle: usize) -> Self {
        Site { handle, slot: None }
    }

    pub fn at(handle: usize, slot: usize) -> Self {
        Site { handle, slot: Some(slot) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneHandle {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Weight>,
    pub ends: [Site; 2],
}

impl OneHandle {
    pub fn unweighted(a: usize, b: usize) -> Self {
        OneHandle { weight: None, ends: [Site::disc(a), Site::disc(b)] }
    }

    pub fn weighted(w: Weight, a: (usize, usize), b: (usize, usize)) -> Self {
        OneHandle { weight: Some(w), ends: [Site::at(a.0, a.1), Site::at(b.0, b.1)] }
    }

    pub fn is_self(&self) -> bool {
        self.ends[0].handle == self.ends[1].handle
    }
}
