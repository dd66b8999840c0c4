use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::util::{
    add_bridge_ball, assembled, connected_without, non_cut_handle, rank_match, restrict,
    thick_sides, weighted_free_sites,
};
use super::{finish, require_valid, MoveDescriptor, MoveError, MoveRecord};
use crate::compressionbody::{is_trivial, OneHandle, Site, Triviality, ZeroHandle};
use crate::decomposition::{Decomposition, Piece, Role, Surface};
use crate::orbifold::{DiscWeight, Rational, SurfaceComponent, Weight};

/// Witness data for an untelescoping: the disc weights on each side and,
/// optionally, the resulting surfaces to be checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UntelescopeData {
    pub w1: DiscWeight,
    pub w2: DiscWeight,
    pub h1: Option<SurfaceComponent>,
    pub h2: Option<SurfaceComponent>,
    pub f: Option<SurfaceComponent>,
}

fn set_thick(d: &mut Decomposition, thick: &str, piece: &Piece) -> Result<(), MoveError> {
    let c = assembled(piece)?;
    d.surfaces.get_mut(thick).expect("thick surface exists").component = c.boundary_plus().clone();
    Ok(())
}

/// Compresses one side along a nonseparating disc of weight `w`.
/// Returns whether the disc met the graph on this side.
fn compress_nonsep(piece: &mut Piece, w: Option<Weight>) -> Option<bool> {
    if let Some(i) = non_cut_handle(piece, w) {
        piece.one_handles.remove(i);
        return Some(true);
    }
    let k = w?;
    let i = non_cut_handle(piece, None)?;
    piece.one_handles.remove(i);
    add_bridge_ball(piece, k);
    Some(false)
}

/// Removes a cut 1-handle of weight `w` together with the part it separates
/// off, provided that part has no product handles and its outer boundary is
/// `discarded`.
fn compress_sep(piece: &Piece, w: Option<Weight>, discarded: &SurfaceComponent) -> Option<Piece> {
    let n = piece.zero_handles.len();
    for i in (0..piece.one_handles.len()).rev() {
        if piece.one_handles[i].weight != w || connected_without(n, &piece.one_handles, i) {
            continue;
        }
        let mut rest = piece.one_handles.clone();
        rest.remove(i);
        let mut uf = UnionFind::<usize>::new(n);
        for h in &rest {
            uf.union(h.ends[0].handle, h.ends[1].handle);
        }
        for end in piece.one_handles[i].ends {
            let root = uf.find(end.handle);
            let part: Vec<bool> = (0..n).map(|h| uf.find(h) == root).collect();
            if part.iter().zip(&piece.zero_handles).any(|(k, z)| *k && z.is_product()) || part.iter().all(|k| *k) {
                continue;
            }
            let (kz, ko) = restrict(&piece.zero_handles, &rest, &part);
            let Ok(k) = crate::compressionbody::assemble(kz, ko) else { continue };
            if k.boundary_plus() != discarded {
                continue;
            }
            let keep: Vec<bool> = part.iter().map(|k| !k).collect();
            let (zero_handles, one_handles) = restrict(&piece.zero_handles, &rest, &keep);
            return Some(Piece {
                zero_handles,
                one_handles,
                plus: piece.plus.clone(),
                minus: piece.minus.clone(),
            });
        }
    }
    None
}

/// Outer boundaries of the parts a single cut 1-handle separates from the
/// product handles of `piece`, with the handle's disc weight: the discarded
/// components a separating move on this side could name.
pub fn separating_candidates(piece: &Piece) -> Vec<(DiscWeight, SurfaceComponent)> {
    let n = piece.zero_handles.len();
    let mut out = Vec::new();
    for i in 0..piece.one_handles.len() {
        if connected_without(n, &piece.one_handles, i) {
            continue;
        }
        let mut rest = piece.one_handles.clone();
        rest.remove(i);
        let mut uf = UnionFind::<usize>::new(n);
        for h in &rest {
            uf.union(h.ends[0].handle, h.ends[1].handle);
        }
        for end in piece.one_handles[i].ends {
            let root = uf.find(end.handle);
            let part: Vec<bool> = (0..n).map(|h| uf.find(h) == root).collect();
            if part.iter().zip(&piece.zero_handles).any(|(k, z)| *k && z.is_product()) || part.iter().all(|k| *k) {
                continue;
            }
            let (kz, ko) = restrict(&piece.zero_handles, &rest, &part);
            if let Ok(k) = crate::compressionbody::assemble(kz, ko) {
                let c = (DiscWeight::from(piece.one_handles[i].weight), k.boundary_plus().clone());
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Destabilization along a disc of weight `disc_weight`: nonseparating when
/// `discarded` is `None`, otherwise separating off a component with outer
/// boundary `discarded`.
pub fn apply_type1(
    d: &Decomposition,
    thick: &str,
    disc_weight: DiscWeight,
    discarded: Option<&SurfaceComponent>,
) -> Result<(Decomposition, MoveRecord), MoveError> {
    let w = disc_weight.weight();
    let two_over_w = disc_weight.reciprocal() * 2;
    if let Some(k) = discarded {
        let delta = -two_over_w.clone() - k.orb_char();
        if delta.is_positive() {
            return Err(MoveError::WouldIncreaseNetX { delta });
        }
    }
    require_valid(d)?;
    let (a, b) = thick_sides(d, thick)?;
    let mut out = d.clone();

    let (descriptor, expected_x, expected_iota) = match discarded {
        None => {
            let mut met = false;
            for id in [&a, &b] {
                let p = out.pieces.get_mut(id).unwrap();
                met |= compress_nonsep(p, w).ok_or_else(|| {
                    MoveError::NoWitness(format!("piece {id} has no non-separating 1-handle of weight {disc_weight}"))
                })?;
            }
            if w.is_some() && !met {
                return Err(MoveError::NoWitness(format!(
                    "no side of {thick} has a weight-{disc_weight} 1-handle to cut"
                )));
            }
            let iota = if w.is_some() { 2 } else { 0 };
            (
                MoveDescriptor::TypeINonsep { thick: thick.to_string(), disc_weight },
                -two_over_w,
                iota,
            )
        }
        Some(k) => {
            for id in [&a, &b] {
                let p = compress_sep(&out.pieces[id], w, k).ok_or_else(|| {
                    MoveError::NoWitness(format!("piece {id} has no separating 1-handle cutting off {k}"))
                })?;
                out.pieces.insert(id.clone(), p);
            }
            let iota = if w.is_some() { 2 } else { 0 } - k.punctures().len() as i64;
            (
                MoveDescriptor::TypeISep {
                    thick: thick.to_string(),
                    disc_weight,
                    discarded: k.clone(),
                },
                -two_over_w - k.orb_char(),
                iota,
            )
        }
    };
    let pa = out.pieces[&a].clone();
    set_thick(&mut out, thick, &pa)?;
    finish(d, out, descriptor, Some(expected_x), Some(expected_iota))
}

/// Unperturbing: removes a pair of weight-`w` punctures from a thick surface.
pub fn apply_type2(d: &Decomposition, thick: &str, w: Weight) -> Result<(Decomposition, MoveRecord), MoveError> {
    let surface = d.surfaces.get(thick).ok_or_else(|| MoveError::UnknownSurface(thick.to_string()))?;
    if surface.component.punctures().iter().filter(|p| **p == w).count() < 2 {
        return Err(MoveError::MissingPunctures { surface: thick.to_string(), weight: w });
    }
    require_valid(d)?;
    let (a, b) = thick_sides(d, thick)?;
    let mut out = d.clone();
    let mut direct = false;
    for id in [&a, &b] {
        let p = out.pieces.get_mut(id).unwrap();
        if let Some(ball) = removable_arc(p, w) {
            p.zero_handles[ball] = ZeroHandle::empty_ball();
            direct = true;
        } else if !join_arcs(p, w)? {
            return Err(MoveError::NoWitness(format!("piece {id} cannot absorb a weight-{w} pair")));
        }
    }
    if !direct {
        return Err(MoveError::NoWitness(format!("no bridge arc of weight {w} on either side of {thick}")));
    }
    let pa = out.pieces[&a].clone();
    set_thick(&mut out, thick, &pa)?;
    let expected = -(Rational::one() - w.reciprocal()) * 2;
    let descriptor = MoveDescriptor::TypeII { thick: thick.to_string(), weight: w };
    finish(d, out, descriptor, Some(expected), Some(-2))
}

/// A ball whose cone is a single free `w`-arc.
fn removable_arc(p: &Piece, w: Weight) -> Option<usize> {
    p.zero_handles.iter().enumerate().rev().find_map(|(h, z)| {
        let ZeroHandle::Ball { cone } = z else { return None };
        let glued = p.one_handles.iter().any(|o| o.weight.is_some() && o.ends.iter().any(|e| e.handle == h));
        (cone.as_slice() == [w, w] && !glued).then_some(h)
    })
}

/// Trades an unweighted 1-handle for a weight-`w` 1-handle joining two free
/// `w`-punctures, keeping the piece connected.
fn join_arcs(p: &mut Piece, w: Weight) -> Result<bool, MoveError> {
    let c = assembled(p)?;
    let free: Vec<Site> = weighted_free_sites(&c).into_iter().filter(|(x, _)| *x == w).map(|(_, s)| s).collect();
    for i in (0..p.one_handles.len()).rev() {
        if p.one_handles[i].weight.is_some() {
            continue;
        }
        for (x, s1) in free.iter().enumerate() {
            for s2 in &free[x + 1..] {
                let mut oh = p.one_handles.clone();
                oh[i] = OneHandle { weight: Some(w), ends: [*s1, *s2] };
                if connected_without(p.zero_handles.len(), &oh, usize::MAX) {
                    p.one_handles = oh;
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Removes a thick and a thin surface cobounding a product piece, merging the
/// pieces on either side.
pub fn consolidate(d: &Decomposition, thick: &str, thin: &str) -> Result<(Decomposition, MoveRecord), MoveError> {
    for (id, role) in [(thick, Role::Thick), (thin, Role::Thin)] {
        if d.surfaces.get(id).map(|s| s.role) != Some(role) {
            return Err(MoveError::UnknownSurface(id.to_string()));
        }
    }
    require_valid(d)?;
    let p_id = d
        .pieces
        .iter()
        .find(|(_, p)| p.plus == thick && p.minus.iter().any(|m| m == thin))
        .map(|(id, _)| id.clone())
        .ok_or_else(|| MoveError::BoundaryMismatch(format!("no piece lies between {thick} and {thin}")))?;
    let p = &d.pieces[&p_id];
    if p.minus.len() != 1 {
        return Err(MoveError::BoundaryMismatch(format!(
            "piece {p_id} has lower boundary beyond {thin}"
        )));
    }
    if is_trivial(&assembled(p)?) != Triviality::TrivialProduct {
        return Err(MoveError::NotAProduct(p_id));
    }
    let a_id = d.pieces_on_thick(thick).into_iter().find(|id| **id != p_id).unwrap().clone();
    let b_id = d.pieces_on_minus(thin).into_iter().find(|id| **id != p_id).unwrap().clone();
    if a_id == b_id {
        return Err(MoveError::BoundaryMismatch(format!("{thick} and {thin} both meet piece {a_id}")));
    }
    let a = &d.pieces[&a_id];
    let b = &d.pieces[&b_id];
    let hp = b.product_handle_for(thin).unwrap();
    let a_free = weighted_free_sites(&assembled(a)?);
    let thin_points: Vec<(Weight, Site)> =
        b.zero_handles[hp].slots().iter().enumerate().map(|(s, w)| (*w, Site::at(hp, s))).collect();

    let offset = b.zero_handles.len() - 1;
    let remap_b = |h: usize| if h < hp { h } else { h - 1 };
    let mut zero_handles: Vec<ZeroHandle> =
        b.zero_handles.iter().enumerate().filter(|(h, _)| *h != hp).map(|(_, z)| z.clone()).collect();
    zero_handles.extend(a.zero_handles.iter().cloned());
    let mut one_handles = Vec::new();
    for oh in &b.one_handles {
        let mut oh = oh.clone();
        for e in &mut oh.ends {
            *e = if e.handle == hp {
                match e.slot {
                    None => Site::disc(offset),
                    Some(_) => {
                        let t = rank_match(&thin_points, &a_free, *e)
                            .ok_or_else(|| MoveError::Internal("thin puncture without a partner".into()))?;
                        Site { handle: offset + t.handle, slot: t.slot }
                    }
                }
            } else {
                Site { handle: remap_b(e.handle), slot: e.slot }
            };
        }
        one_handles.push(oh);
    }
    for oh in &a.one_handles {
        let mut oh = oh.clone();
        for e in &mut oh.ends {
            e.handle += offset;
        }
        one_handles.push(oh);
    }
    let mut minus: Vec<String> = b.minus.iter().filter(|m| *m != thin).cloned().collect();
    minus.extend(a.minus.iter().cloned());
    let merged = Piece { zero_handles, one_handles, plus: b.plus.clone(), minus };

    let mut out = d.clone();
    out.pieces.remove(&p_id);
    out.pieces.remove(&a_id);
    out.pieces.insert(b_id.clone(), merged);
    out.surfaces.remove(thick);
    out.surfaces.remove(thin);
    for s in out.surfaces.values_mut() {
        if s.toward.as_deref() == Some(a_id.as_str()) {
            s.toward = Some(b_id.clone());
        }
    }
    let descriptor = MoveDescriptor::Consolidation { thick: thick.to_string(), thin: thin.to_string() };
    finish(d, out, descriptor, Some(Rational::zero()), Some(0))
}

fn compressed(j: &SurfaceComponent, w1: DiscWeight, w2: DiscWeight) -> Option<SurfaceComponent> {
    let genus = j.genus().checked_sub(2)?;
    let mut p = j.punctures().to_vec();
    for w in [w1, w2].into_iter().filter_map(DiscWeight::weight) {
        p.extend([w, w]);
    }
    Some(SurfaceComponent::new(genus, p))
}

fn self_handle(base: &SurfaceComponent, w: DiscWeight) -> OneHandle {
    match w.weight() {
        None => OneHandle::unweighted(0, 0),
        Some(k) => {
            let slots: Vec<usize> = (0..base.punctures().len()).filter(|&s| base.punctures()[s] == k).collect();
            OneHandle::weighted(k, (0, slots[0]), (0, slots[1]))
        }
    }
}

/// Weak reduction: replaces thick `J` by `H₁`, `F`, `H₂`, where `H₁` and `H₂`
/// compress `J` on either side and `F` compresses it on both.
pub fn untelescope(
    d: &Decomposition,
    thick: &str,
    data: &UntelescopeData,
) -> Result<(Decomposition, MoveRecord), MoveError> {
    let j = d.surfaces.get(thick).ok_or_else(|| MoveError::UnknownSurface(thick.to_string()))?;
    if j.role != Role::Thick {
        return Err(MoveError::UnknownSurface(thick.to_string()));
    }
    let x_j = j.component.orb_char();
    if let (Some(h1), Some(h2), Some(f)) = (&data.h1, &data.h2, &data.f) {
        let rhs = h1.orb_char() + h2.orb_char() - f.orb_char();
        if x_j != rhs {
            return Err(MoveError::IdentityViolated { lhs: x_j, rhs });
        }
    }
    require_valid(d)?;
    let f = compressed(&j.component, data.w1, data.w2)
        .ok_or_else(|| MoveError::NoWitness(format!("{thick} has genus below 2")))?;
    let (a_id, b_id) = thick_sides(d, thick)?;
    let mut a = d.pieces[&a_id].clone();
    let mut b = d.pieces[&b_id].clone();
    for (p, w, id) in [(&mut a, data.w1, &a_id), (&mut b, data.w2, &b_id)] {
        let i = non_cut_handle(p, w.weight()).ok_or_else(|| {
            MoveError::NoWitness(format!("piece {id} has no non-separating 1-handle of weight {w}"))
        })?;
        p.one_handles.remove(i);
    }
    let h1 = assembled(&a)?.boundary_plus().clone();
    let h2 = assembled(&b)?.boundary_plus().clone();
    for (name, declared, computed) in [("H1", &data.h1, &h1), ("H2", &data.h2, &h2), ("F", &data.f, &f)] {
        if let Some(x) = declared {
            if x != computed {
                return Err(MoveError::DescriptorMismatch {
                    name: name.into(),
                    declared: x.to_string(),
                    computed: computed.to_string(),
                });
            }
        }
    }

    let (s1, s2, sf) = (format!("{thick}.1"), format!("{thick}.2"), format!("{thick}.f"));
    let (pa, pb) = (format!("{thick}.a"), format!("{thick}.b"));
    if [&s1, &s2, &sf].iter().any(|s| d.surfaces.contains_key(*s))
        || [&pa, &pb].iter().any(|p| d.pieces.contains_key(*p))
    {
        return Err(MoveError::Internal(format!("names derived from {thick} are already taken")));
    }
    a.plus = s1.clone();
    b.plus = s2.clone();
    let mid = |plus: &String, w: DiscWeight| Piece {
        zero_handles: vec![ZeroHandle::product(f.clone())],
        one_handles: vec![self_handle(&f, w)],
        plus: plus.clone(),
        minus: vec![sf.clone()],
    };

    let mut out = d.clone();
    out.surfaces.remove(thick);
    let thick_surface = |c: SurfaceComponent, toward: &String| Surface {
        role: Role::Thick,
        component: c,
        toward: Some(toward.clone()),
    };
    out.surfaces.insert(s1.clone(), thick_surface(h1, &pa));
    out.surfaces.insert(s2.clone(), thick_surface(h2, &b_id));
    out.surfaces.insert(sf.clone(), Surface { role: Role::Thin, component: f.clone(), toward: Some(pb.clone()) });
    out.pieces.insert(pa.clone(), mid(&s1, data.w2));
    out.pieces.insert(pb.clone(), mid(&s2, data.w1));
    out.pieces.insert(a_id, a);
    out.pieces.insert(b_id, b);
    let descriptor = MoveDescriptor::Untelescope {
        thick: thick.to_string(),
        w1: data.w1,
        w2: data.w2,
        h1: data.h1.clone(),
        h2: data.h2.clone(),
        f: data.f.clone(),
    };
    finish(d, out, descriptor, Some(Rational::zero()), Some(0))
}
