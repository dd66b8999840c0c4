use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::assemble::{assemble, EdgeClass, EdgeEnd, VpCompressionbody};
use super::handle::{OneHandle, ZeroHandle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GhostVertex {
    /// A `∂₋` component, named by its product handle.
    Minus { handle: usize },
    /// An interior vertex of the graph, named by its ball handle.
    Vertex { handle: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GhostArcGraph {
    pub vertices: Vec<GhostVertex>,
    /// Ghost arcs as pairs of vertex indices.
    pub edges: Vec<(usize, usize)>,
    /// First Betti number of the graph.
    pub cycles: usize,
    /// Set when a sphere `∂₊` sees a cycle or a torus `∂₊` sees two.
    pub violation: bool,
}

pub fn ghost_arc_graph(c: &VpCompressionbody) -> GhostArcGraph {
    let vertices: Vec<GhostVertex> = c
        .zero_handles()
        .iter()
        .enumerate()
        .filter_map(|(h, zh)| {
            if zh.is_product() {
                Some(GhostVertex::Minus { handle: h })
            } else if zh.has_vertex() {
                Some(GhostVertex::Vertex { handle: h })
            } else {
                None
            }
        })
        .collect();
    let index_of = |end: &EdgeEnd| {
        let v = match *end {
            EdgeEnd::Minus { handle, .. } => GhostVertex::Minus { handle },
            EdgeEnd::Vertex { handle } => GhostVertex::Vertex { handle },
            EdgeEnd::Plus { .. } => unreachable!("ghost arcs avoid the outer boundary"),
        };
        vertices.iter().position(|x| *x == v).expect("ghost arc end is a graph vertex")
    };
    let edges: Vec<(usize, usize)> = c
        .edges_of(EdgeClass::Ghost)
        .map(|e| {
            let [a, b] = e.ends.expect("ghost arcs have ends");
            (index_of(&a), index_of(&b))
        })
        .collect();

    let mut uf = UnionFind::<usize>::new(vertices.len());
    let mut cycles = 0;
    for &(a, b) in &edges {
        if !uf.union(a, b) {
            cycles += 1;
        }
    }
    let plus = c.boundary_plus();
    let single_sphere = plus.genus() == 0;
    let torus = plus.genus() == 1 && plus.punctures().is_empty();
    let violation = (single_sphere && cycles > 0) || (torus && cycles >= 2);
    GhostArcGraph { vertices, edges, cycles, violation }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Triviality {
    TrivialBall,
    TrivialProduct,
    NotTrivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalClass {
    TrivialBall,
    EuclideanTrivialBall,
    EuclideanPillow,
    SolidTorusEmpty,
    SolidTorusCore,
    None,
}

impl ExceptionalClass {
    pub fn is_exceptional(self) -> bool {
        !matches!(self, ExceptionalClass::None)
    }
}

/// Cancels handle pairs that do not change the compressionbody:
///
/// * an empty leaf ball on a single unweighted 1-handle;
/// * a leaf ball carrying an arc, glued at one end by a weighted 1-handle;
/// * an empty ball between exactly two unweighted 1-handles (merged into one);
/// * an arc ball between exactly two weighted 1-handles (merged into one).
///
/// The input must assemble; the output assembles to the same `∂₊` and `∂₋`.
pub fn reduce(
    zero_handles: &[ZeroHandle],
    one_handles: &[OneHandle],
) -> (Vec<ZeroHandle>, Vec<OneHandle>) {
    let mut zh: Vec<ZeroHandle> = zero_handles.to_vec();
    let mut oh: Vec<OneHandle> = one_handles.to_vec();
    while let Some((ball, remove, add)) = find_reduction(&zh, &oh) {
        let mut drop = remove;
        drop.sort_unstable();
        for i in drop.into_iter().rev() {
            oh.remove(i);
        }
        oh.extend(add);
        zh.remove(ball);
        for h in &mut oh {
            for end in &mut h.ends {
                debug_assert_ne!(end.handle, ball);
                if end.handle > ball {
                    end.handle -= 1;
                }
            }
        }
    }
    (zh, oh)
}

type Reduction = (usize, Vec<usize>, Option<OneHandle>);

fn find_reduction(zh: &[ZeroHandle], oh: &[OneHandle]) -> Option<Reduction> {
    for (b, handle) in zh.iter().enumerate() {
        let ZeroHandle::Ball { cone } = handle else { continue };
        if !cone.is_empty() && cone.len() != 2 {
            continue;
        }
        // (1-handle index, end index) for every end glued to this ball.
        let incident: Vec<(usize, usize)> = oh
            .iter()
            .enumerate()
            .flat_map(|(i, h)| {
                h.ends.iter().enumerate().filter(move |(_, e)| e.handle == b).map(move |(j, _)| (i, j))
            })
            .collect();
        let far = |(i, j): (usize, usize)| oh[i].ends[1 - j];
        match (cone.len(), incident.as_slice()) {
            (0, &[x]) if oh[x.0].weight.is_none() => {
                return Some((b, vec![x.0], None));
            }
            (2, &[x]) if oh[x.0].weight.is_some() => {
                return Some((b, vec![x.0], None));
            }
            (0, &[x, y]) if x.0 != y.0 => {
                let (p, q) = (far(x), far(y));
                let merged = OneHandle { weight: None, ends: [p, q] };
                return Some((b, vec![x.0, y.0], Some(merged)));
            }
            (2, &[x, y]) if x.0 != y.0 && oh[x.0].weight.is_some() && oh[y.0].weight.is_some() => {
                let (p, q) = (far(x), far(y));
                let merged = OneHandle { weight: oh[x.0].weight, ends: [p, q] };
                return Some((b, vec![x.0, y.0], Some(merged)));
            }
            _ => {}
        }
    }
    None
}

fn reduced(c: &VpCompressionbody) -> VpCompressionbody {
    let (zh, oh) = reduce(c.zero_handles(), c.one_handles());
    assemble(zh, oh).expect("reduction preserves validity")
}

pub fn is_trivial(c: &VpCompressionbody) -> Triviality {
    let r = reduced(c);
    match (r.zero_handles(), r.one_handles().len()) {
        ([ZeroHandle::Ball { .. }], 0) => Triviality::TrivialBall,
        ([ZeroHandle::Product { .. }], 0) => Triviality::TrivialProduct,
        _ => Triviality::NotTrivial,
    }
}

pub fn classify_exceptional(c: &VpCompressionbody) -> ExceptionalClass {
    let n = c.n_value();
    if n.is_positive() {
        return ExceptionalClass::None;
    }
    let r = reduced(c);
    let euclidean = c.boundary_plus().orb_char().is_zero();
    match (r.zero_handles(), r.one_handles()) {
        ([ZeroHandle::Ball { .. }], []) => {
            if n.is_negative() {
                ExceptionalClass::TrivialBall
            } else {
                ExceptionalClass::EuclideanTrivialBall
            }
        }
        ([ZeroHandle::Ball { cone: a }, ZeroHandle::Ball { cone: b }], [h]) if euclidean => {
            let pillow = match h.weight {
                None => a.len() == 2 && b.len() == 2,
                Some(_) => a.len() == 3 && b.len() == 3,
            };
            if pillow {
                ExceptionalClass::EuclideanPillow
            } else {
                ExceptionalClass::None
            }
        }
        ([ZeroHandle::Ball { cone }], [h]) if h.is_self() => match (cone.len(), h.weight) {
            (0, None) => ExceptionalClass::SolidTorusEmpty,
            (2, Some(_)) => ExceptionalClass::SolidTorusCore,
            _ => ExceptionalClass::None,
        },
        _ => ExceptionalClass::None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::{Rational, SurfaceComponent, Weight};

    fn w(k: u64) -> Weight {
        Weight::finite(k)
    }

    #[test]
    fn ghost_graph_examples() {
        let c = assemble(vec![ZeroHandle::ball(vec![w(2), w(2)])], vec![]).unwrap();
        let g = ghost_arc_graph(&c);
        assert!(g.edges.is_empty() && g.vertices.is_empty());

        let base = SurfaceComponent::sphere(vec![w(3), w(3)]);
        let c = assemble(vec![ZeroHandle::product(base)], vec![]).unwrap();
        let g = ghost_arc_graph(&c);
        assert_eq!(g.vertices.len(), 1);
        assert!(g.edges.is_empty());

        let k = w(4);
        let base = SurfaceComponent::sphere(vec![k, k]);
        let c = assemble(
            vec![ZeroHandle::product(base.clone()), ZeroHandle::product(base)],
            vec![OneHandle::weighted(k, (0, 0), (1, 0))],
        )
        .unwrap();
        let g = ghost_arc_graph(&c);
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.edges, vec![(0, 1)]);
        assert_eq!(g.cycles, 0);
        assert!(!g.violation);
    }

    #[test]
    fn exceptional_examples() {
        let inf = Weight::INFINITY;
        let c = assemble(vec![ZeroHandle::ball(vec![inf, inf])], vec![]).unwrap();
        assert_eq!(c.n_value(), Rational::zero());
        assert_eq!(classify_exceptional(&c), ExceptionalClass::EuclideanTrivialBall);

        let c = assemble(vec![ZeroHandle::empty_ball()], vec![OneHandle::unweighted(0, 0)]).unwrap();
        assert_eq!(classify_exceptional(&c), ExceptionalClass::SolidTorusEmpty);

        for k in [w(2), w(3), w(5), w(11)] {
            let c = assemble(
                vec![ZeroHandle::ball(vec![w(2), w(2), k]), ZeroHandle::ball(vec![w(2), w(2), k])],
                vec![OneHandle::weighted(k, (0, 2), (1, 2))],
            )
            .unwrap();
            assert_eq!(c.boundary_plus(), &SurfaceComponent::sphere(vec![w(2); 4]));
            assert_eq!(classify_exceptional(&c), ExceptionalClass::EuclideanPillow);
        }

        let c = assemble(
            vec![ZeroHandle::ball(vec![w(3), w(3)])],
            vec![OneHandle::weighted(w(3), (0, 0), (0, 1))],
        )
        .unwrap();
        assert_eq!(classify_exceptional(&c), ExceptionalClass::SolidTorusCore);
    }

    #[test]
    fn triviality_examples() {
        let c = assemble(vec![ZeroHandle::ball(vec![w(2), w(3), w(5)])], vec![]).unwrap();
        assert_eq!(is_trivial(&c), Triviality::TrivialBall);
        let c = assemble(vec![ZeroHandle::product(SurfaceComponent::closed(1))], vec![]).unwrap();
        assert_eq!(is_trivial(&c), Triviality::TrivialProduct);
        let c = assemble(
            vec![ZeroHandle::ball(vec![w(2), w(2)]), ZeroHandle::ball(vec![w(2), w(2)])],
            vec![OneHandle::unweighted(0, 1)],
        )
        .unwrap();
        assert_eq!(is_trivial(&c), Triviality::NotTrivial);
    }

    #[test]
    fn reduction_cancels_leaf_balls() {
        let c = assemble(
            vec![ZeroHandle::ball(vec![w(3), w(3)]), ZeroHandle::empty_ball()],
            vec![OneHandle::unweighted(0, 1)],
        )
        .unwrap();
        assert_eq!(is_trivial(&c), Triviality::TrivialBall);

        let k = w(2);
        let c = assemble(
            vec![ZeroHandle::product(SurfaceComponent::sphere(vec![k, k])), ZeroHandle::ball(vec![k, k])],
            vec![OneHandle::weighted(k, (0, 1), (1, 0))],
        )
        .unwrap();
        assert_eq!(is_trivial(&c), Triviality::TrivialProduct);
    }
}
