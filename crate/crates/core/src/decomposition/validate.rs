use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use petgraph::algo::toposort;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::{Decomposition, PieceId, Role, SurfaceId};
use crate::compressionbody::ZeroHandle;
use crate::orbifold::{Geometry, SurfaceComponent};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    #[error("decomposition has no pieces")]
    Empty,
    #[error("piece {piece}: {error}")]
    Assembly { piece: PieceId, error: String },
    #[error("piece {piece} names unknown surface {surface}")]
    UnknownSurface { piece: PieceId, surface: SurfaceId },
    #[error("piece {piece} uses {surface} ({role:?}) in the wrong position")]
    WrongRole { piece: PieceId, surface: SurfaceId, role: Role },
    #[error("piece {piece} lists {declared} lower surfaces but has {products} product handles")]
    MinusCount { piece: PieceId, declared: usize, products: usize },
    #[error("surface {surface} ({role:?}) bounds {found} pieces, expected {expected}")]
    Incidence { surface: SurfaceId, role: Role, expected: usize, found: usize },
    #[error("piece {piece} derives {derived} where {surface} is declared as {declared}")]
    SurfaceMismatch {
        piece: PieceId,
        surface: SurfaceId,
        declared: String,
        derived: String,
    },
    #[error("surface {surface} has no orientation")]
    MissingOrientation { surface: SurfaceId },
    #[error("surface {surface} is oriented toward {toward}, which it does not bound")]
    BadOrientation { surface: SurfaceId, toward: PieceId },
    #[error("boundary surface {surface} carries an orientation")]
    OrientedBoundary { surface: SurfaceId },
    #[error("piece {piece}: upper and lower orientations do not form a cobordism")]
    InconsistentOrientation { piece: PieceId },
    #[error("dual digraph has a cycle through piece {piece}")]
    Cycle { piece: PieceId },
    #[error("piece {piece}, 0-handle {handle}: ball with a single cone point")]
    OneConeBall { piece: PieceId, handle: usize },
    #[error("boundary surface {surface} ({component}) violates niceness condition 1")]
    NiceBoundary { surface: SurfaceId, component: String },
    #[error("surface {surface} ({component}) is bad or a once-punctured sphere of weight inf")]
    NiceSurface { surface: SurfaceId, component: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NiceReport {
    pub condition_1: bool,
    pub condition_2: bool,
    /// Taken from the metadata; never computed.
    pub condition_3_asserted: bool,
    pub thin_c_essential_asserted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub nice: NiceReport,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                s.push_str("; ");
            }
            let _ = write!(s, "{v}");
        }
        s
    }
}

fn nice_boundary(c: &SurfaceComponent) -> bool {
    !c.orb_char().is_negative() && (!c.is_sphere() || c.punctures().len() >= 3)
}

fn nice_surface(c: &SurfaceComponent) -> bool {
    let class = c.classify();
    class.geometry != Geometry::Bad && !class.inf_once_punctured
}

pub fn validate(d: &Decomposition) -> ValidationReport {
    let mut v = Vec::new();
    if d.pieces.is_empty() {
        v.push(Violation::Empty);
    }

    let mut plus_count: BTreeMap<&str, usize> = BTreeMap::new();
    let mut minus_count: BTreeMap<&str, usize> = BTreeMap::new();
    let mut neighbours: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();

    for (pid, piece) in &d.pieces {
        for (h, zh) in piece.zero_handles.iter().enumerate() {
            if matches!(zh, ZeroHandle::Ball { cone } if cone.len() == 1) {
                v.push(Violation::OneConeBall { piece: pid.clone(), handle: h });
            }
        }
        let assembled = piece.assemble();
        if let Err(e) = &assembled {
            v.push(Violation::Assembly { piece: pid.clone(), error: e.to_string() });
        }

        match d.surfaces.get(&piece.plus) {
            None => v.push(Violation::UnknownSurface { piece: pid.clone(), surface: piece.plus.clone() }),
            Some(s) if s.role != Role::Thick => v.push(Violation::WrongRole {
                piece: pid.clone(),
                surface: piece.plus.clone(),
                role: s.role,
            }),
            Some(_) => {}
        }
        *plus_count.entry(&piece.plus).or_default() += 1;
        neighbours.entry(&piece.plus).or_default().insert(pid);
        for m in &piece.minus {
            match d.surfaces.get(m) {
                None => v.push(Violation::UnknownSurface { piece: pid.clone(), surface: m.clone() }),
                Some(s) if s.role == Role::Thick => v.push(Violation::WrongRole {
                    piece: pid.clone(),
                    surface: m.clone(),
                    role: s.role,
                }),
                Some(_) => {}
            }
            *minus_count.entry(m).or_default() += 1;
            neighbours.entry(m).or_default().insert(pid);
        }

        let Ok(c) = assembled else { continue };
        if c.boundary_minus().len() != piece.minus.len() {
            v.push(Violation::MinusCount {
                piece: pid.clone(),
                declared: piece.minus.len(),
                products: c.boundary_minus().len(),
            });
            continue;
        }
        let declared = std::iter::once((&piece.plus, c.boundary_plus()))
            .chain(piece.minus.iter().zip(c.boundary_minus()));
        for (sid, derived) in declared {
            if let Some(s) = d.surfaces.get(sid) {
                if &s.component != derived {
                    v.push(Violation::SurfaceMismatch {
                        piece: pid.clone(),
                        surface: sid.clone(),
                        declared: s.component.to_string(),
                        derived: derived.to_string(),
                    });
                }
            }
        }
    }

    let mut nice = NiceReport {
        condition_1: true,
        condition_2: true,
        condition_3_asserted: d.metadata.no_negative_nonseparating_spheres,
        thin_c_essential_asserted: d.metadata.thin_c_essential,
    };

    for (sid, s) in &d.surfaces {
        let plus = plus_count.get(sid.as_str()).copied().unwrap_or(0);
        let minus = minus_count.get(sid.as_str()).copied().unwrap_or(0);
        let (expected, found) = match s.role {
            Role::Thick => (2, plus + minus),
            Role::Thin => (2, plus + minus),
            Role::Boundary => (1, plus + minus),
        };
        let distinct = neighbours.get(sid.as_str()).map_or(0, |n| n.len());
        if found != expected || distinct != expected {
            v.push(Violation::Incidence { surface: sid.clone(), role: s.role, expected, found });
        }

        match (s.role, &s.toward) {
            (Role::Boundary, Some(_)) => v.push(Violation::OrientedBoundary { surface: sid.clone() }),
            (Role::Boundary, None) => {}
            (_, None) => v.push(Violation::MissingOrientation { surface: sid.clone() }),
            (_, Some(t)) => {
                if !neighbours.get(sid.as_str()).is_some_and(|n| n.contains(t.as_str())) {
                    v.push(Violation::BadOrientation { surface: sid.clone(), toward: t.clone() });
                }
            }
        }

        if s.role == Role::Boundary && !nice_boundary(&s.component) {
            nice.condition_1 = false;
            v.push(Violation::NiceBoundary {
                surface: sid.clone(),
                component: s.component.to_string(),
            });
        }
        if !nice_surface(&s.component) {
            nice.condition_2 = false;
            v.push(Violation::NiceSurface { surface: sid.clone(), component: s.component.to_string() });
        }
    }

    // Each piece is a cobordism: flow enters through every ∂₋ arc and leaves
    // through ∂₊, or the reverse.
    let points_in = |sid: &str, pid: &str| -> Option<bool> {
        let s = d.surfaces.get(sid)?;
        if s.role == Role::Boundary {
            return None;
        }
        s.toward.as_deref().map(|t| t == pid)
    };
    for (pid, piece) in &d.pieces {
        let Some(plus_in) = points_in(&piece.plus, pid) else { continue };
        if piece.minus.iter().any(|m| points_in(m, pid) == Some(plus_in)) {
            v.push(Violation::InconsistentOrientation { piece: pid.clone() });
        }
    }

    let mut graph = DiGraph::<&str, &str>::new();
    let nodes: BTreeMap<&str, _> =
        d.pieces.keys().map(|p| (p.as_str(), graph.add_node(p.as_str()))).collect();
    for (sid, s) in &d.surfaces {
        let (Some(to), Some(ends)) = (&s.toward, neighbours.get(sid.as_str())) else { continue };
        if ends.len() != 2 || !ends.contains(to.as_str()) {
            continue;
        }
        let from = ends.iter().find(|p| **p != to.as_str()).unwrap();
        graph.add_edge(nodes[from], nodes[to.as_str()], sid);
    }
    if let Err(cycle) = toposort(&graph, None) {
        v.push(Violation::Cycle { piece: graph[cycle.node_id()].to_string() });
    }

    ValidationReport { violations: v, nice }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::heegaard;
    use super::*;

    #[test]
    fn heegaard_passes() {
        let r = validate(&heegaard(2));
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn two_cycle_fails() {
        // Two genus-2 surfaces between the same pair of pieces, oriented opposite ways.
        let mut d = heegaard(2);
        let h = d.surfaces["H"].clone();
        let mut h2 = h.clone();
        h2.toward = Some("A".into());
        d.surfaces.insert("H2".into(), h2);
        for id in ["A", "B"] {
            let p = d.pieces.get_mut(id).unwrap();
            p.zero_handles.push(crate::compressionbody::ZeroHandle::product(h.component.clone()));
            p.minus.push("H2".into());
        }
        d.surfaces.get_mut("H2").unwrap().role = Role::Thin;
        let r = validate(&d);
        assert!(r.violations.iter().any(|x| matches!(x, Violation::Cycle { .. })), "{}", r.summary());
    }

    #[test]
    fn empty_fails() {
        assert!(!validate(&Decomposition::default()).passed());
    }
}
