use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::handle::{OneHandle, Site, ZeroHandle};
use crate::orbifold::{OrbSurface, Rational, SurfaceComponent, VertexTriple, Weight};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssemblyError {
    #[error("no 0-handles")]
    NoHandles,
    #[error("0-handle {handle} is a cone on {count} points (at most 3 allowed)")]
    TooManyCones { handle: usize, count: usize },
    #[error("0-handle {handle} carries an arc with unequal end weights {a} and {b}")]
    UnequalArc { handle: usize, a: Weight, b: Weight },
    #[error("0-handle {handle} has invalid vertex ({a},{b},{c})")]
    InvalidVertex { handle: usize, a: Weight, b: Weight, c: Weight },
    #[error("1-handle {one_handle} refers to missing 0-handle {handle}")]
    BadHandleIndex { one_handle: usize, handle: usize },
    #[error("weighted 1-handle {one_handle} has an end without a slot")]
    MissingSlot { one_handle: usize },
    #[error("unweighted 1-handle {one_handle} has an end on a puncture")]
    UnexpectedSlot { one_handle: usize },
    #[error("1-handle {one_handle} refers to missing slot {slot} of 0-handle {handle}")]
    BadSlot { one_handle: usize, handle: usize, slot: usize },
    #[error("1-handle {one_handle} of weight {expected} glued to a puncture of weight {found}")]
    MismatchedWeight { one_handle: usize, expected: Weight, found: Weight },
    #[error("slot {slot} of 0-handle {handle} is used by two 1-handle ends")]
    SlotReused { handle: usize, slot: usize },
    #[error("handle structure is disconnected")]
    Disconnected,
}

/// Endpoint of a graph edge inside a compressionbody.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum EdgeEnd {
    /// A puncture of `∂₊` at a free slot.
    Plus { handle: usize, slot: usize },
    /// A puncture of the `∂₋` copy of a product handle's base.
    Minus { handle: usize, slot: usize },
    /// The cone point of a ball with one or three cones.
    Vertex { handle: usize },
}

impl EdgeEnd {
    pub fn is_plus(&self) -> bool {
        matches!(self, EdgeEnd::Plus { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    Bridge,
    Vertical,
    Ghost,
    CoreLoop,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub class: EdgeClass,
    pub weight: Weight,
    /// `None` for core loops.
    pub ends: Option<[EdgeEnd; 2]>,
    /// Weighted 1-handles traversed, in walk order.
    pub one_handles: Vec<usize>,
    /// Slots traversed, in walk order.
    pub sites: Vec<Site>,
}

/// An assembled vp-compressionbody with its derived boundary and graph data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VpCompressionbody {
    zero_handles: Vec<ZeroHandle>,
    one_handles: Vec<OneHandle>,
    plus: SurfaceComponent,
    /// Bases of the product handles, in handle order.
    minus: Vec<SurfaceComponent>,
    free_sites: Vec<Site>,
    edges: Vec<Edge>,
}

/// Per-slot bookkeeping shared by assembly and edge walking.
pub(crate) struct SiteTable {
    pub offsets: Vec<usize>,
    pub sites: Vec<Site>,
    pub weights: Vec<Weight>,
    /// For each slot, the weighted 1-handle glued there and the slot at its other end.
    pub glued: Vec<Option<(usize, usize)>>,
}

impl SiteTable {
    pub fn index(&self, handle: usize, slot: usize) -> usize {
        self.offsets[handle] + slot
    }
}

pub(crate) fn check_zero_handle(index: usize, h: &ZeroHandle) -> Result<(), AssemblyError> {
    if let ZeroHandle::Ball { cone } = h {
        match cone.as_slice() {
            [] | [_] => {}
            [a, b] => {
                if a != b {
                    return Err(AssemblyError::UnequalArc { handle: index, a: *a, b: *b });
                }
            }
            [a, b, c] => {
                if !VertexTriple::new(*a, *b, *c).is_valid() {
                    return Err(AssemblyError::InvalidVertex {
                        handle: index,
                        a: *a,
                        b: *b,
                        c: *c,
                    });
                }
            }
            more => {
                return Err(AssemblyError::TooManyCones { handle: index, count: more.len() })
            }
        }
    }
    Ok(())
}

pub(crate) fn site_table(
    zero_handles: &[ZeroHandle],
    one_handles: &[OneHandle],
) -> Result<SiteTable, AssemblyError> {
    let mut offsets = Vec::with_capacity(zero_handles.len());
    let mut sites = Vec::new();
    let mut weights = Vec::new();
    for (h, zh) in zero_handles.iter().enumerate() {
        check_zero_handle(h, zh)?;
        offsets.push(sites.len());
        for (s, w) in zh.slots().iter().enumerate() {
            sites.push(Site::at(h, s));
            weights.push(*w);
        }
    }
    let mut glued = vec![None; sites.len()];
    let slot_of_end = |i: usize, site: &Site, weight: Option<Weight>| -> Result<Option<usize>, AssemblyError> {
        let zh = zero_handles
            .get(site.handle)
            .ok_or(AssemblyError::BadHandleIndex { one_handle: i, handle: site.handle })?;
        match (weight, site.slot) {
            (None, None) => Ok(None),
            (None, Some(_)) => Err(AssemblyError::UnexpectedSlot { one_handle: i }),
            (Some(_), None) => Err(AssemblyError::MissingSlot { one_handle: i }),
            (Some(w), Some(s)) => {
                let found = *zh.slots().get(s).ok_or(AssemblyError::BadSlot {
                    one_handle: i,
                    handle: site.handle,
                    slot: s,
                })?;
                if found != w {
                    return Err(AssemblyError::MismatchedWeight { one_handle: i, expected: w, found });
                }
                Ok(Some(offsets[site.handle] + s))
            }
        }
    };
    for (i, oh) in one_handles.iter().enumerate() {
        let a = slot_of_end(i, &oh.ends[0], oh.weight)?;
        let b = slot_of_end(i, &oh.ends[1], oh.weight)?;
        if let (Some(a), Some(b)) = (a, b) {
            for (x, y) in [(a, b), (b, a)] {
                if glued[x].is_some() || a == b {
                    let site = sites[x];
                    return Err(AssemblyError::SlotReused {
                        handle: site.handle,
                        slot: site.slot.unwrap_or(0),
                    });
                }
                glued[x] = Some((i, y));
            }
        }
    }
    Ok(SiteTable { offsets, sites, weights, glued })
}

pub fn assemble(
    zero_handles: Vec<ZeroHandle>,
    one_handles: Vec<OneHandle>,
) -> Result<VpCompressionbody, AssemblyError> {
    if zero_handles.is_empty() {
        return Err(AssemblyError::NoHandles);
    }
    let table = site_table(&zero_handles, &one_handles)?;

    let mut uf = UnionFind::<usize>::new(zero_handles.len());
    for oh in &one_handles {
        uf.union(oh.ends[0].handle, oh.ends[1].handle);
    }
    let root = uf.find(0);
    if (1..zero_handles.len()).any(|h| uf.find(h) != root) {
        return Err(AssemblyError::Disconnected);
    }

    let euler: i64 =
        zero_handles.iter().map(ZeroHandle::euler).sum::<i64>() - 2 * one_handles.len() as i64;
    debug_assert!(euler <= 2 && euler % 2 == 0);
    let genus = ((2 - euler) / 2) as u32;

    let free_sites: Vec<Site> = table
        .sites
        .iter()
        .enumerate()
        .filter(|(i, _)| table.glued[*i].is_none())
        .map(|(_, s)| *s)
        .collect();
    let plus = SurfaceComponent::new(
        genus,
        free_sites.iter().map(|s| zero_handles[s.handle].slots()[s.slot.unwrap()]).collect(),
    );
    let minus = zero_handles
        .iter()
        .filter_map(|h| match h {
            ZeroHandle::Product { base } => Some(base.clone()),
            ZeroHandle::Ball { .. } => None,
        })
        .collect();
    let edges = walk_edges(&zero_handles, &table);

    Ok(VpCompressionbody { zero_handles, one_handles, plus, minus, free_sites, edges })
}

enum Inner {
    Partner(usize),
    Term(EdgeEnd),
}

fn walk_edges(zero_handles: &[ZeroHandle], table: &SiteTable) -> Vec<Edge> {
    let n = table.sites.len();
    let inner: Vec<Inner> = table
        .sites
        .iter()
        .map(|site| {
            let h = site.handle;
            let s = site.slot.unwrap();
            match &zero_handles[h] {
                ZeroHandle::Product { .. } => Inner::Term(EdgeEnd::Minus { handle: h, slot: s }),
                ZeroHandle::Ball { cone } if cone.len() == 2 => {
                    Inner::Partner(table.index(h, 1 - s))
                }
                ZeroHandle::Ball { .. } => Inner::Term(EdgeEnd::Vertex { handle: h }),
            }
        })
        .collect();
    let plus_end = |i: usize| {
        let site = table.sites[i];
        EdgeEnd::Plus { handle: site.handle, slot: site.slot.unwrap() }
    };

    let mut visited = vec![false; n];
    let mut edges = Vec::new();

    let walk = |start: usize, outward: bool, visited: &mut Vec<bool>| -> Edge {
        let first = if outward {
            match inner[start] {
                Inner::Term(t) => t,
                Inner::Partner(_) => unreachable!("walk starts at a terminal"),
            }
        } else {
            plus_end(start)
        };
        let mut cur = start;
        let mut going_out = outward;
        let mut sites = Vec::new();
        let mut handles = Vec::new();
        let last = loop {
            if !visited[cur] {
                visited[cur] = true;
                sites.push(table.sites[cur]);
            }
            if going_out {
                match table.glued[cur] {
                    None => break plus_end(cur),
                    Some((oh, other)) => {
                        handles.push(oh);
                        cur = other;
                        going_out = false;
                    }
                }
            } else {
                match inner[cur] {
                    Inner::Term(t) => break t,
                    Inner::Partner(p) => {
                        cur = p;
                        going_out = true;
                    }
                }
            }
        };
        let plus_count = first.is_plus() as usize + last.is_plus() as usize;
        let class = match plus_count {
            2 => EdgeClass::Bridge,
            1 => EdgeClass::Vertical,
            _ => EdgeClass::Ghost,
        };
        Edge {
            class,
            weight: table.weights[start],
            ends: Some([first, last]),
            one_handles: handles,
            sites,
        }
    };

    // Minus terminals first, then cone points, then free punctures.
    let mut order: Vec<usize> = (0..n)
        .filter(|&i| matches!(inner[i], Inner::Term(EdgeEnd::Minus { .. })))
        .collect();
    order.extend((0..n).filter(|&i| matches!(inner[i], Inner::Term(EdgeEnd::Vertex { .. }))));
    for i in order {
        if !visited[i] {
            edges.push(walk(i, true, &mut visited));
        }
    }
    for i in 0..n {
        if !visited[i] && table.glued[i].is_none() {
            edges.push(walk(i, false, &mut visited));
        }
    }
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut cur = start;
        let mut sites = Vec::new();
        let mut handles = Vec::new();
        loop {
            visited[cur] = true;
            sites.push(table.sites[cur]);
            let (oh, other) = table.glued[cur].expect("loop sites are glued");
            handles.push(oh);
            visited[other] = true;
            sites.push(table.sites[other]);
            cur = match inner[other] {
                Inner::Partner(p) => p,
                Inner::Term(_) => unreachable!("loop sites have no terminal"),
            };
            if cur == start {
                break;
            }
        }
        edges.push(Edge {
            class: EdgeClass::CoreLoop,
            weight: table.weights[start],
            ends: None,
            one_handles: handles,
            sites,
        });
    }
    edges
}

impl VpCompressionbody {
    pub fn zero_handles(&self) -> &[ZeroHandle] {
        &self.zero_handles
    }

    pub fn one_handles(&self) -> &[OneHandle] {
        &self.one_handles
    }

    pub fn into_parts(self) -> (Vec<ZeroHandle>, Vec<OneHandle>) {
        (self.zero_handles, self.one_handles)
    }

    pub fn boundary_plus(&self) -> &SurfaceComponent {
        &self.plus
    }

    /// `∂₋` components, one per product handle in handle order.
    pub fn boundary_minus(&self) -> &[SurfaceComponent] {
        &self.minus
    }

    pub fn plus_surface(&self) -> OrbSurface {
        OrbSurface::from(self.plus.clone())
    }

    pub fn minus_surface(&self) -> OrbSurface {
        OrbSurface::new(self.minus.clone())
    }

    /// Indices of the product handles, aligned with `boundary_minus`.
    pub fn product_handles(&self) -> Vec<usize> {
        (0..self.zero_handles.len()).filter(|&h| self.zero_handles[h].is_product()).collect()
    }

    /// Slots not consumed by weighted 1-handles: the punctures of `∂₊`.
    pub fn free_sites(&self) -> &[Site] {
        &self.free_sites
    }

    pub fn slot_weight(&self, site: Site) -> Option<Weight> {
        let slot = site.slot?;
        self.zero_handles.get(site.handle)?.slots().get(slot).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_of(&self, class: EdgeClass) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.class == class)
    }

    pub fn ghost_arcs(&self) -> Vec<&Edge> {
        self.edges_of(EdgeClass::Ghost).collect()
    }

    pub fn n_value(&self) -> Rational {
        self.plus.orb_char() - self.minus_surface().orb_char()
    }
}

pub fn n_value(c: &VpCompressionbody) -> Rational {
    c.n_value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: u64) -> Weight {
        Weight::finite(k)
    }

    #[test]
    fn trivial_ball_with_arc() {
        for k in [w(2), w(3), w(7), Weight::INFINITY] {
            let c = assemble(vec![ZeroHandle::ball(vec![k, k])], vec![]).unwrap();
            assert_eq!(c.boundary_plus(), &SurfaceComponent::sphere(vec![k, k]));
            assert_eq!(c.edges().len(), 1);
            assert_eq!(c.edges()[0].class, EdgeClass::Bridge);
            assert_eq!(c.n_value(), Rational::from_int(-2) * k.reciprocal());
        }
    }

    #[test]
    fn pillow() {
        let c = assemble(
            vec![ZeroHandle::ball(vec![w(2), w(2)]), ZeroHandle::ball(vec![w(2), w(2)])],
            vec![OneHandle::unweighted(0, 1)],
        )
        .unwrap();
        assert_eq!(c.boundary_plus(), &SurfaceComponent::sphere(vec![w(2); 4]));
        assert_eq!(c.edges_of(EdgeClass::Bridge).count(), 2);
        assert_eq!(c.n_value(), Rational::zero());
    }

    #[test]
    fn solid_torus_with_core() {
        let k = w(5);
        let c = assemble(
            vec![ZeroHandle::ball(vec![k, k])],
            vec![OneHandle::weighted(k, (0, 0), (0, 1))],
        )
        .unwrap();
        assert_eq!(c.boundary_plus(), &SurfaceComponent::closed(1));
        assert_eq!(c.edges().len(), 1);
        assert_eq!(c.edges()[0].class, EdgeClass::CoreLoop);
        assert_eq!(c.n_value(), Rational::zero());
    }

    #[test]
    fn n_value_examples() {
        let c = assemble(vec![ZeroHandle::empty_ball()], vec![]).unwrap();
        assert_eq!(n_value(&c), Rational::from_int(-2));
        for g in 0..5 {
            let c = assemble(vec![ZeroHandle::empty_ball()], vec![OneHandle::unweighted(0, 0); g])
                .unwrap();
            assert_eq!(n_value(&c), Rational::from_int(2 * g as i64 - 2));
        }
        let c = assemble(vec![ZeroHandle::product(SurfaceComponent::closed(1))], vec![]).unwrap();
        assert_eq!(n_value(&c), Rational::zero());
    }

    #[test]
    fn assembly_errors() {
        let e = assemble(vec![ZeroHandle::ball(vec![w(3); 3])], vec![]).unwrap_err();
        assert!(matches!(e, AssemblyError::InvalidVertex { .. }));
        let e = assemble(vec![ZeroHandle::ball(vec![w(2); 4])], vec![]).unwrap_err();
        assert!(matches!(e, AssemblyError::TooManyCones { count: 4, .. }));
        let e = assemble(vec![ZeroHandle::empty_ball(), ZeroHandle::empty_ball()], vec![])
            .unwrap_err();
        assert_eq!(e, AssemblyError::Disconnected);
        let e = assemble(
            vec![ZeroHandle::ball(vec![w(2), w(2)]), ZeroHandle::ball(vec![w(3), w(3)])],
            vec![OneHandle::weighted(w(2), (0, 0), (1, 0))],
        )
        .unwrap_err();
        assert!(matches!(e, AssemblyError::MismatchedWeight { .. }));
        let e = assemble(
            vec![ZeroHandle::ball(vec![w(2), w(2)])],
            vec![OneHandle::weighted(w(2), (0, 0), (0, 0))],
        )
        .unwrap_err();
        assert!(matches!(e, AssemblyError::SlotReused { .. }));
    }
}
