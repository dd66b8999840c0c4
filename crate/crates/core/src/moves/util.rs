use petgraph::unionfind::UnionFind;

use super::MoveError;
use crate::compressionbody::{EdgeEnd, OneHandle, Site, VpCompressionbody, ZeroHandle};
use crate::decomposition::{Decomposition, Piece, PieceId};
use crate::orbifold::Weight;

pub(crate) fn connected_without(zero_count: usize, oh: &[OneHandle], skip: usize) -> bool {
    let mut uf = UnionFind::<usize>::new(zero_count);
    for (i, h) in oh.iter().enumerate() {
        if i != skip {
            uf.union(h.ends[0].handle, h.ends[1].handle);
        }
    }
    let root = uf.find(0);
    (1..zero_count).all(|h| uf.find(h) == root)
}

/// Highest-index 1-handle of the given weight whose removal keeps the piece connected.
pub(crate) fn non_cut_handle(piece: &Piece, weight: Option<Weight>) -> Option<usize> {
    (0..piece.one_handles.len()).rev().find(|&i| {
        piece.one_handles[i].weight == weight
            && connected_without(piece.zero_handles.len(), &piece.one_handles, i)
    })
}

/// The two pieces whose `∂₊` is `thick`, with the one the orientation points
/// out of first.
pub(crate) fn thick_sides(d: &Decomposition, thick: &str) -> Result<(PieceId, PieceId), MoveError> {
    let s = d.surfaces.get(thick).ok_or_else(|| MoveError::UnknownSurface(thick.to_string()))?;
    if s.role != crate::decomposition::Role::Thick {
        return Err(MoveError::UnknownSurface(thick.to_string()));
    }
    let sides = d.pieces_on_thick(thick);
    let [a, b] = sides.as_slice() else {
        return Err(MoveError::Invalid(format!("{thick} does not bound two pieces")));
    };
    let toward = s.toward.as_deref();
    if toward == Some(a.as_str()) {
        Ok(((*b).clone(), (*a).clone()))
    } else {
        Ok(((*a).clone(), (*b).clone()))
    }
}

pub(crate) fn assembled(piece: &Piece) -> Result<VpCompressionbody, MoveError> {
    piece.assemble().map_err(|e| MoveError::Invalid(e.to_string()))
}

/// Appends a ball carrying a `w`-arc, joined to 0-handle 0 by an unweighted 1-handle.
pub(crate) fn add_bridge_ball(piece: &mut Piece, w: Weight) {
    let b = piece.zero_handles.len();
    piece.zero_handles.push(ZeroHandle::ball(vec![w, w]));
    piece.one_handles.push(OneHandle::unweighted(0, b));
}

/// Free sites of `c` in slot order, tagged with their weights.
pub(crate) fn weighted_free_sites(c: &VpCompressionbody) -> Vec<(Weight, Site)> {
    c.free_sites().iter().map(|s| (c.slot_weight(*s).unwrap(), *s)).collect()
}

/// Pairs `site` (a free site of `from`) with the free site of `to` of equal
/// weight and equal rank among sites of that weight.
pub(crate) fn rank_match(
    from: &[(Weight, Site)],
    to: &[(Weight, Site)],
    site: Site,
) -> Option<Site> {
    let (w, _) = *from.iter().find(|(_, s)| *s == site)?;
    let rank = from.iter().filter(|(x, _)| *x == w).position(|(_, s)| *s == site)?;
    to.iter().filter(|(x, _)| *x == w).nth(rank).map(|(_, s)| *s)
}

/// The edge of `c` leaving the `∂₋` puncture at `(handle, slot)`.
pub(crate) fn edge_from_minus(
    c: &VpCompressionbody,
    handle: usize,
    slot: usize,
) -> Option<&crate::compressionbody::Edge> {
    let target = EdgeEnd::Minus { handle, slot };
    c.edges().iter().find(|e| e.ends.is_some_and(|ends| ends.contains(&target)))
}

/// Restricts a handle structure to the 0-handles in `keep`, re-indexing them
/// and dropping 1-handles with an end outside.
pub(crate) fn restrict(
    zh: &[ZeroHandle],
    oh: &[OneHandle],
    keep: &[bool],
) -> (Vec<ZeroHandle>, Vec<OneHandle>) {
    let mut map = vec![usize::MAX; zh.len()];
    let mut out_zh = Vec::new();
    for (i, h) in zh.iter().enumerate() {
        if keep[i] {
            map[i] = out_zh.len();
            out_zh.push(h.clone());
        }
    }
    let out_oh = oh
        .iter()
        .filter(|h| keep[h.ends[0].handle] && keep[h.ends[1].handle])
        .map(|h| {
            let mut h = h.clone();
            for e in &mut h.ends {
                e.handle = map[e.handle];
            }
            h
        })
        .collect();
    (out_zh, out_oh)
}
