use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::{Decomposition, DecompositionError, PieceId, Role, SurfaceId};
use crate::compressionbody::ZeroHandle;
use crate::orbifold::{Rational, VertexTriple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error(transparent)]
    Invalid(#[from] DecompositionError),
    #[error("{0} is not a thin surface")]
    NotThin(SurfaceId),
    #[error("{0} is not a sphere")]
    NotASphere(SurfaceId),
    #[error("{surface} has {count} punctures (at most 3 can be capped)")]
    TooManyPunctures { surface: SurfaceId, count: usize },
    #[error("capping {surface} would create the non-orbifold vertex {triple}")]
    InvalidCap { surface: SurfaceId, triple: String },
    #[error("a capped factor failed validation: {0}")]
    FactorInvalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitResult {
    #[serde(skip)]
    pub factors: Vec<Decomposition>,
    /// Sum of the characteristics of the spheres cut along.
    pub delta: Rational,
}

/// Cuts along thin spheres and caps each scar with a ball containing the cone
/// on its punctures; `netX(D) = Σ netX(factors) − delta`.
pub fn split_along_thin(d: &Decomposition, selected: &[SurfaceId]) -> Result<SplitResult, SplitError> {
    d.ensure_valid()?;
    let selected: BTreeSet<&SurfaceId> = selected.iter().collect();
    let mut delta = Rational::zero();
    for sid in &selected {
        let s = d.surfaces.get(*sid).ok_or_else(|| SplitError::NotThin((*sid).clone()))?;
        if s.role != Role::Thin {
            return Err(SplitError::NotThin((*sid).clone()));
        }
        let c = &s.component;
        if !c.is_sphere() {
            return Err(SplitError::NotASphere((*sid).clone()));
        }
        match c.punctures() {
            p if p.len() > 3 => {
                return Err(SplitError::TooManyPunctures { surface: (*sid).clone(), count: p.len() })
            }
            &[a, b, c3] if !VertexTriple::new(a, b, c3).is_valid() => {
                return Err(SplitError::InvalidCap {
                    surface: (*sid).clone(),
                    triple: format!("({a},{b},{c3})"),
                })
            }
            _ => {}
        }
        delta += c.orb_char();
    }

    let mut capped = d.clone();
    for sid in &selected {
        capped.surfaces.remove(*sid);
    }
    for piece in capped.pieces.values_mut() {
        let products: Vec<usize> =
            (0..piece.zero_handles.len()).filter(|&h| piece.zero_handles[h].is_product()).collect();
        let mut kept = Vec::new();
        for (k, sid) in piece.minus.iter().enumerate() {
            if selected.contains(sid) {
                let h = products[k];
                let cone = piece.zero_handles[h].slots().to_vec();
                piece.zero_handles[h] = ZeroHandle::ball(cone);
            } else {
                kept.push(sid.clone());
            }
        }
        piece.minus = kept;
    }

    // Pieces sharing a surviving surface lie in the same factor.
    let ids: Vec<&PieceId> = capped.pieces.keys().collect();
    let index: BTreeMap<&PieceId, usize> = ids.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut uf = UnionFind::<usize>::new(ids.len());
    let mut owner: BTreeMap<&SurfaceId, usize> = BTreeMap::new();
    for (pid, piece) in &capped.pieces {
        for sid in std::iter::once(&piece.plus).chain(&piece.minus) {
            if let Some(&other) = owner.get(sid) {
                uf.union(other, index[pid]);
            } else {
                owner.insert(sid, index[pid]);
            }
        }
    }
    let mut groups: BTreeMap<usize, Decomposition> = BTreeMap::new();
    for (pid, piece) in &capped.pieces {
        let root = uf.find(index[pid]);
        let f = groups.entry(root).or_insert_with(|| Decomposition {
            metadata: capped.metadata.clone(),
            ..Default::default()
        });
        f.pieces.insert(pid.clone(), piece.clone());
        for sid in std::iter::once(&piece.plus).chain(&piece.minus) {
            f.surfaces.insert(sid.clone(), capped.surfaces[sid].clone());
        }
    }
    let mut factors: Vec<Decomposition> = groups.into_values().collect();
    factors.sort_by(|a, b| a.pieces.keys().next().cmp(&b.pieces.keys().next()));
    for f in &factors {
        f.ensure_valid().map_err(|e| SplitError::FactorInvalid(e.to_string()))?;
    }
    debug_assert_eq!(
        d.net_x_unchecked(),
        factors.iter().map(Decomposition::net_x_unchecked).sum::<Rational>() - &delta
    );
    Ok(SplitResult { factors, delta })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::heegaard;
    use super::super::Surface;
    use super::*;
    use crate::compressionbody::OneHandle;
    use crate::orbifold::SurfaceComponent;

    /// Two genus-1 splittings separated by an unpunctured thin sphere.
    fn connect_sum() -> Decomposition {
        let mut d = Decomposition::default();
        let torus = SurfaceComponent::closed(1);
        // Flow: A2 -> B2 -> B1 -> A1.
        for (h, outer, toward) in [("H1", "A1", "A1"), ("H2", "A2", "B2")] {
            d.surfaces.insert(
                h.into(),
                Surface { role: Role::Thick, component: torus.clone(), toward: Some(toward.into()) },
            );
            let mut outer_piece = heegaard(1).pieces["A"].clone();
            outer_piece.plus = h.into();
            d.pieces.insert(outer.into(), outer_piece);
        }
        d.surfaces.insert(
            "S".into(),
            Surface { role: Role::Thin, component: SurfaceComponent::sphere(vec![]), toward: Some("B1".into()) },
        );
        for (pid, h) in [("B1", "H1"), ("B2", "H2")] {
            d.pieces.insert(
                pid.into(),
                super::super::Piece {
                    zero_handles: vec![
                        ZeroHandle::product(SurfaceComponent::sphere(vec![])),
                        ZeroHandle::empty_ball(),
                    ],
                    one_handles: vec![OneHandle::unweighted(0, 1), OneHandle::unweighted(1, 1)],
                    plus: h.into(),
                    minus: vec!["S".into()],
                },
            );
        }
        d
    }

    #[test]
    fn unpunctured_sphere_contributes_minus_two() {
        let d = connect_sum();
        let r = super::super::validate(&d);
        assert!(r.passed(), "{}", r.summary());
        let out = split_along_thin(&d, &["S".to_string()]).unwrap();
        assert_eq!(out.delta, Rational::from_int(-2));
        assert_eq!(out.factors.len(), 2);
        let sum: Rational = out.factors.iter().map(|f| f.net_x_unchecked()).sum();
        assert_eq!(d.net_x_unchecked(), sum - out.delta);
    }

    #[test]
    fn rejects_non_thin() {
        let d = heegaard(2);
        assert!(matches!(split_along_thin(&d, &["H".to_string()]), Err(SplitError::NotThin(_))));
    }
}
