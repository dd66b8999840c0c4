use std::collections::BTreeSet;

use super::util::{add_bridge_ball, assembled, edge_from_minus, rank_match, weighted_free_sites};
use super::{finish, require_valid, MoveDescriptor, MoveError, MoveRecord};
use crate::compressionbody::{EdgeClass, OneHandle, Site, VpCompressionbody};
use crate::decomposition::{Decomposition, Piece, PieceId, Surface};
use crate::orbifold::{Rational, Weight};

/// Turns the ghost arc `edge` of `piece` into a pair of bridge arcs: its first
/// weighted 1-handle loses its weight and the piece across the thick surface
/// gains a matching bridge ball.
pub fn create_removable_arc(
    d: &Decomposition,
    piece: &str,
    edge: usize,
) -> Result<(Decomposition, MoveRecord), MoveError> {
    let p = d.pieces.get(piece).ok_or_else(|| MoveError::UnknownPiece(piece.to_string()))?;
    require_valid(d)?;
    let c = assembled(p)?;
    let not_ghost = || MoveError::NotAGhostArc { piece: piece.to_string(), index: edge };
    let e = c.edges().get(edge).ok_or_else(not_ghost)?;
    if e.class != EdgeClass::Ghost {
        return Err(not_ghost());
    }
    let w = e.weight;
    let u = *e.one_handles.first().ok_or_else(not_ghost)?;

    let mut out = d.clone();
    let thick = p.plus.clone();
    let other = d
        .pieces_on_thick(&thick)
        .into_iter()
        .find(|id| id.as_str() != piece)
        .ok_or_else(|| MoveError::Invalid(format!("{thick} does not bound two pieces")))?
        .clone();
    let target = out.pieces.get_mut(piece).unwrap();
    let ends = target.one_handles[u].ends;
    target.one_handles[u] = OneHandle::unweighted(ends[0].handle, ends[1].handle);
    let plus = assembled(target)?.boundary_plus().clone();
    add_bridge_ball(out.pieces.get_mut(&other).unwrap(), w);
    out.surfaces.get_mut(&thick).unwrap().component = plus;

    let expected = (Rational::one() - w.reciprocal()) * 2;
    let descriptor = MoveDescriptor::CreateRemovable { piece: piece.to_string(), ghost_arc: edge };
    finish(d, out, descriptor, Some(expected), Some(2))
}

/// Sites lying on ghost arcs, as `(handle, slot)` pairs, and the 1-handles
/// those arcs run through.
fn ghost_trace(c: &VpCompressionbody) -> (BTreeSet<(usize, Option<usize>)>, BTreeSet<usize>) {
    let arcs = c.ghost_arcs();
    let sites = arcs.iter().flat_map(|e| e.sites.iter().map(|s| (s.handle, s.slot))).collect();
    let handles = arcs.iter().flat_map(|e| e.one_handles.iter().copied()).collect();
    (sites, handles)
}

/// One side of an amalgamation: `outer` with the handles of `inner` other
/// than its product handle on the thin surface re-attached to it.
struct Merge<'a> {
    outer: &'a Piece,
    inner: &'a Piece,
    /// Product handle of `inner` on the thin surface.
    inner_product: usize,
    /// Free sites of the piece across the thin surface, and of the piece
    /// across its thick surface.
    across: Vec<(Weight, Site)>,
    beyond: Vec<(Weight, Site)>,
    /// Product handle on the thin surface in the piece across it.
    across_product: usize,
}

impl Merge<'_> {
    /// The merged piece, plus for each 0-handle whether it came from `outer`
    /// and its former index.
    fn build(&self, plus: &str, thin: &str) -> Result<(Piece, Vec<(bool, usize)>), MoveError> {
        let offset = self.outer.zero_handles.len();
        let hp = self.inner_product;
        let remap = |h: usize| offset + if h < hp { h } else { h - 1 };
        let mut zero_handles = self.outer.zero_handles.clone();
        let mut origin: Vec<(bool, usize)> = (0..offset).map(|h| (true, h)).collect();
        for (h, z) in self.inner.zero_handles.iter().enumerate() {
            if h != hp {
                zero_handles.push(z.clone());
                origin.push((false, h));
            }
        }
        let mut one_handles = self.outer.one_handles.clone();
        for oh in &self.inner.one_handles {
            let mut oh = oh.clone();
            for e in &mut oh.ends {
                *e = if e.handle != hp {
                    Site { handle: remap(e.handle), slot: e.slot }
                } else if let Some(j) = e.slot {
                    rank_match(&self.across, &self.beyond, Site::at(self.across_product, j))
                        .ok_or_else(|| MoveError::Internal(format!("thin puncture {j} has no partner")))?
                } else {
                    Site::disc(0)
                };
            }
            one_handles.push(oh);
        }
        let mut minus = self.outer.minus.clone();
        minus.extend(self.inner.minus.iter().filter(|m| *m != thin).cloned());
        Ok((Piece { zero_handles, one_handles, plus: plus.to_string(), minus }, origin))
    }
}

/// Replaces thick surfaces `thick1`, `thick2` and the thin surface between
/// them by a single thick surface.
pub fn amalgamate(
    d: &Decomposition,
    thick1: &str,
    thick2: &str,
    thin: &str,
) -> Result<(Decomposition, MoveRecord), MoveError> {
    for s in [thick1, thick2, thin] {
        if !d.surfaces.contains_key(s) {
            return Err(MoveError::UnknownSurface(s.to_string()));
        }
    }
    require_valid(d)?;
    let not_adjacent = || MoveError::NotAdjacent {
        thick1: thick1.to_string(),
        thick2: thick2.to_string(),
        thin: thin.to_string(),
    };
    let find = |thick: &str| {
        d.pieces
            .iter()
            .find(|(_, p)| p.plus == thick && p.minus.iter().any(|m| m == thin))
            .map(|(id, _)| id.clone())
    };
    let c_id = find(thick1).ok_or_else(not_adjacent)?;
    let d_id = find(thick2).ok_or_else(not_adjacent)?;
    if c_id == d_id || thick1 == thick2 {
        return Err(not_adjacent());
    }
    let other = |thick: &str, id: &PieceId| -> Result<PieceId, MoveError> {
        d.pieces_on_thick(thick)
            .into_iter()
            .find(|p| *p != id)
            .cloned()
            .ok_or_else(|| MoveError::Invalid(format!("{thick} does not bound two pieces")))
    };
    let cp_id = other(thick1, &c_id)?;
    let dp_id = other(thick2, &d_id)?;
    if cp_id == dp_id {
        return Err(MoveError::BoundaryMismatch(format!("{thick1} and {thick2} both meet piece {cp_id}")));
    }
    let (pc, pd, pcp, pdp) = (&d.pieces[&c_id], &d.pieces[&d_id], &d.pieces[&cp_id], &d.pieces[&dp_id]);
    let (cc, cd, ccp, cdp) = (assembled(pc)?, assembled(pd)?, assembled(pcp)?, assembled(pdp)?);
    let hc = pc.product_handle_for(thin).unwrap();
    let hd = pd.product_handle_for(thin).unwrap();

    let f = &d.surfaces[thin].component;
    for (j, w) in f.punctures().iter().enumerate() {
        let ec = edge_from_minus(&cc, hc, j).map(|e| e.class);
        let ed = edge_from_minus(&cd, hd, j).map(|e| e.class);
        if ec == Some(EdgeClass::Ghost) && ed == Some(EdgeClass::Ghost) {
            return Err(MoveError::NotAmalgable { point: j, weight: *w });
        }
        let used = |c: &VpCompressionbody, h: usize| !c.free_sites().contains(&Site::at(h, j));
        if used(&cc, hc) && used(&cd, hd) {
            return Err(MoveError::DoublyGlued { point: j });
        }
    }

    let new_thick = format!("{thick1}+{thick2}");
    if d.surfaces.contains_key(&new_thick) {
        return Err(MoveError::Internal(format!("surface name {new_thick} is already taken")));
    }
    let u_merge = Merge {
        outer: pdp,
        inner: pc,
        inner_product: hc,
        across: weighted_free_sites(&cd),
        beyond: weighted_free_sites(&cdp),
        across_product: hd,
    };
    let v_merge = Merge {
        outer: pcp,
        inner: pd,
        inner_product: hd,
        across: weighted_free_sites(&cc),
        beyond: weighted_free_sites(&ccp),
        across_product: hc,
    };
    let (u, u_origin) = u_merge.build(&new_thick, thin)?;
    let (v, v_origin) = v_merge.build(&new_thick, thin)?;
    let (cu, cv) = (assembled(&u)?, assembled(&v)?);
    if cu.boundary_plus() != cv.boundary_plus() {
        return Err(MoveError::Internal(format!(
            "amalgamated sides disagree: {} vs {}",
            cu.boundary_plus(),
            cv.boundary_plus()
        )));
    }
    let h = cu.boundary_plus().clone();
    let x = |s: &str| d.surfaces[s].component.orb_char();
    if h.orb_char() != x(thick1) + x(thick2) - x(thin) {
        return Err(MoveError::Internal(format!("amalgamated surface {h} has the wrong characteristic")));
    }

    // Ghost arcs after the move must pass through sites that were on ghost arcs before.
    for (merged, origin, outer, inner, n_outer) in [
        (&cu, &u_origin, &cdp, &cc, pdp.one_handles.len()),
        (&cv, &v_origin, &ccp, &cd, pcp.one_handles.len()),
    ] {
        let (g_outer, g_inner) = (ghost_trace(outer), ghost_trace(inner));
        for e in merged.ghost_arcs() {
            let by_site = e.sites.iter().any(|s| {
                let (from_outer, old) = origin[s.handle];
                let set = if from_outer { &g_outer.0 } else { &g_inner.0 };
                set.contains(&(old, s.slot))
            });
            let by_handle = e.one_handles.iter().any(|&k| {
                if k < n_outer {
                    g_outer.1.contains(&k)
                } else {
                    g_inner.1.contains(&(k - n_outer))
                }
            });
            let inherited = by_site || by_handle;
            if !inherited {
                return Err(MoveError::Internal("amalgamation created a new ghost arc".into()));
            }
        }
    }

    let toward = if d.surfaces[thick2].toward.as_deref() == Some(dp_id.as_str()) {
        dp_id.clone()
    } else {
        cp_id.clone()
    };
    let mut out = d.clone();
    for s in [thick1, thick2, thin] {
        out.surfaces.remove(s);
    }
    out.pieces.remove(&c_id);
    out.pieces.remove(&d_id);
    out.pieces.insert(dp_id.clone(), u);
    out.pieces.insert(cp_id.clone(), v);
    for s in out.surfaces.values_mut() {
        if s.toward.as_deref() == Some(c_id.as_str()) {
            s.toward = Some(dp_id.clone());
        } else if s.toward.as_deref() == Some(d_id.as_str()) {
            s.toward = Some(cp_id.clone());
        }
    }
    out.surfaces.insert(
        new_thick,
        Surface { role: crate::decomposition::Role::Thick, component: h, toward: Some(toward) },
    );
    let descriptor = MoveDescriptor::Amalgamate {
        thick1: thick1.to_string(),
        thick2: thick2.to_string(),
        thin: thin.to_string(),
    };
    finish(d, out, descriptor, Some(Rational::zero()), Some(0))
}
