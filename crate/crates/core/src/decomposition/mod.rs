//! Multiple bridge surfaces: thick and thin surfaces cutting an orbifold into
//! compressionbody pieces.

mod format;
mod split;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::compressionbody::{assemble, AssemblyError, OneHandle, VpCompressionbody, ZeroHandle};
use crate::orbifold::{OrbSurface, Rational, SurfaceComponent, Weight};

pub use format::{DecompositionFile, FormatError, Orientation, PieceEntry, SurfaceEntry, FORMAT_VERSION};
pub use split::{split_along_thin, SplitError, SplitResult};
pub use validate::{validate, NiceReport, ValidationReport, Violation};

pub type SurfaceId = String;
pub type PieceId = String;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Thick,
    Thin,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surface {
    pub role: Role,
    pub component: SurfaceComponent,
    /// Piece the transverse orientation points into; `None` on boundary surfaces.
    pub toward: Option<PieceId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub zero_handles: Vec<ZeroHandle>,
    pub one_handles: Vec<OneHandle>,
    pub plus: SurfaceId,
    /// `∂₋` surfaces, one per product 0-handle in handle order.
    pub minus: Vec<SurfaceId>,
}

impl Piece {
    pub fn assemble(&self) -> Result<VpCompressionbody, AssemblyError> {
        assemble(self.zero_handles.clone(), self.one_handles.clone())
    }

    /// Index of the product 0-handle glued to `surface`.
    pub fn product_handle_for(&self, surface: &str) -> Option<usize> {
        let k = self.minus.iter().position(|s| s == surface)?;
        (0..self.zero_handles.len()).filter(|&h| self.zero_handles[h].is_product()).nth(k)
    }
}

/// Input assertions that cannot be checked from the combinatorial data.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    /// No nonseparating spheres of negative characteristic.
    #[serde(default)]
    pub no_negative_nonseparating_spheres: bool,
    /// Thin surfaces are c-essential.
    #[serde(default)]
    pub thin_c_essential: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Serializes through [`DecompositionFile`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "DecompositionFile", try_from = "DecompositionFile")]
pub struct Decomposition {
    pub surfaces: BTreeMap<SurfaceId, Surface>,
    pub pieces: BTreeMap<PieceId, Piece>,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecompositionError {
    #[error("invalid decomposition: {0}")]
    Invalid(String),
    #[error("weight {weight} does not divide {scale}")]
    BadScale { weight: Weight, scale: u64 },
}

impl Decomposition {
    pub fn surfaces_with(&self, role: Role) -> impl Iterator<Item = (&SurfaceId, &Surface)> {
        self.surfaces.iter().filter(move |(_, s)| s.role == role)
    }

    pub fn surface_of(&self, role: Role) -> OrbSurface {
        OrbSurface::new(self.surfaces_with(role).map(|(_, s)| s.component.clone()).collect())
    }

    pub fn thick(&self) -> OrbSurface {
        self.surface_of(Role::Thick)
    }

    pub fn thin(&self) -> OrbSurface {
        self.surface_of(Role::Thin)
    }

    pub fn boundary(&self) -> OrbSurface {
        self.surface_of(Role::Boundary)
    }

    /// Pieces whose `∂₊` is `surface`.
    pub fn pieces_on_thick(&self, surface: &str) -> Vec<&PieceId> {
        self.pieces.iter().filter(|(_, p)| p.plus == surface).map(|(id, _)| id).collect()
    }

    /// Pieces having `surface` in their `∂₋`, with multiplicity.
    pub fn pieces_on_minus(&self, surface: &str) -> Vec<&PieceId> {
        self.pieces
            .iter()
            .flat_map(|(id, p)| p.minus.iter().filter(move |s| *s == surface).map(move |_| id))
            .collect()
    }

    pub fn ensure_valid(&self) -> Result<(), DecompositionError> {
        let report = validate(self);
        if report.passed() {
            Ok(())
        } else {
            Err(DecompositionError::Invalid(report.summary()))
        }
    }

    /// `x(𝓗⁺) − x(𝓗⁻)` without validating first.
    pub fn net_x_unchecked(&self) -> Rational {
        self.thick().orb_char() - self.thin().orb_char()
    }

    pub fn net_iota_unchecked(&self) -> i64 {
        self.thick().puncture_count() as i64 - self.thin().puncture_count() as i64
    }

    /// Every finite weight appearing on a surface or a handle.
    pub fn finite_weights(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .surfaces
            .values()
            .flat_map(|s| s.component.punctures().iter().filter_map(|w| w.value()))
            .chain(self.pieces.values().flat_map(|p| {
                p.zero_handles
                    .iter()
                    .flat_map(|h| h.slots().iter().filter_map(|w| w.value()))
                    .chain(p.one_handles.iter().filter_map(|h| h.weight.and_then(|w| w.value())))
            }))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

pub fn net_x(d: &Decomposition) -> Result<Rational, DecompositionError> {
    d.ensure_valid()?;
    Ok(d.net_x_unchecked())
}

pub fn net_iota(d: &Decomposition) -> Result<i64, DecompositionError> {
    d.ensure_valid()?;
    Ok(d.net_iota_unchecked())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

/// `2·netX − x(∂M)` against the sum of `N` over the pieces.
pub fn fundamental_identity(d: &Decomposition) -> Result<IdentityCheck, DecompositionError> {
    d.ensure_valid()?;
    Ok(identity_unchecked(d))
}

pub(crate) fn identity_unchecked(d: &Decomposition) -> IdentityCheck {
    let lhs = d.net_x_unchecked() * 2 - d.boundary().orb_char();
    let rhs = d
        .pieces
        .values()
        .map(|p| p.assemble().expect("validated piece assembles").n_value())
        .sum::<Rational>();
    let holds = lhs == rhs;
    IdentityCheck { lhs, rhs, holds }
}

/// Whether `2·L·netX` is an integer; every finite weight must divide `L`.
pub fn integrality_scale(d: &Decomposition, scale: u64) -> Result<bool, DecompositionError> {
    assert!(scale >= 1, "scale must be positive");
    for k in d.finite_weights() {
        if !scale.is_multiple_of(k) {
            return Err(DecompositionError::BadScale { weight: Weight::finite(k), scale });
        }
    }
    let x = net_x(d)? * Rational::from_int(2 * scale as i64);
    Ok(x.is_integer())
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn heegaard_invariants() {
        for g in 0..5u32 {
            let d = heegaard(g);
            assert!(validate(&d).passed(), "{}", validate(&d).summary());
            assert_eq!(net_x(&d).unwrap(), Rational::from_int(2 * g as i64 - 2));
            assert_eq!(net_iota(&d).unwrap(), 0);
            let id = fundamental_identity(&d).unwrap();
            assert_eq!(id.lhs, Rational::from_int(4 * g as i64 - 4));
            assert!(id.holds);
            assert!(integrality_scale(&d, 1).unwrap());
        }
    }

    #[test]
    fn bad_scale() {
        let mut d = heegaard(1);
        let w = Weight::finite(3);
        d.surfaces.get_mut("H").unwrap().component = SurfaceComponent::new(1, vec![w, w]);
        for id in ["A", "B"] {
            let p = d.pieces.get_mut(id).unwrap();
            p.zero_handles = vec![ZeroHandle::ball(vec![w, w])];
            p.one_handles = vec![OneHandle::unweighted(0, 0)];
        }
        assert_eq!(net_iota(&d).unwrap(), 2);
        assert!(matches!(integrality_scale(&d, 2), Err(DecompositionError::BadScale { .. })));
        assert!(integrality_scale(&d, 3).unwrap());
    }
}
