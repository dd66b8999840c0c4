//! Hand-built decompositions used by the named examples and the CLI fixtures.

use crate::compressionbody::{OneHandle, ZeroHandle};
use crate::decomposition::{Decomposition, Metadata, Piece, Role, Surface};
use crate::moves::MoveDescriptor;
use crate::orbifold::{SurfaceComponent, Weight};

pub(crate) fn surface(role: Role, component: SurfaceComponent, toward: Option<&str>) -> Surface {
    Surface { role, component, toward: toward.map(str::to_string) }
}

pub(crate) fn piece(zero_handles: Vec<ZeroHandle>, one_handles: Vec<OneHandle>, plus: &str, minus: &[&str]) -> Piece {
    Piece { zero_handles, one_handles, plus: plus.into(), minus: minus.iter().map(|s| s.to_string()).collect() }
}

/// Genus-`g` Heegaard splitting of a closed manifold: two handlebodies on `H`.
pub fn heegaard(genus: u32) -> Decomposition {
    let mut d = Decomposition::default();
    d.surfaces.insert("H".into(), surface(Role::Thick, SurfaceComponent::closed(genus), Some("B")));
    for id in ["A", "B"] {
        let oh = vec![OneHandle::unweighted(0, 0); genus as usize];
        d.pieces.insert(id.into(), piece(vec![ZeroHandle::empty_ball()], oh, "H", &[]));
    }
    d
}

/// Two genus-`t+1` thick surfaces `H1`, `H2` separated by a twice-punctured
/// thin sphere `S` of weight `w`. Each inner piece carries a ghost arc of
/// weight `w` through a weighted self-handle; the outer pieces are
/// handlebodies.
pub fn two_thick(t: u32, w: Weight) -> Decomposition {
    let mut d = Decomposition {
        metadata: Metadata {
            no_negative_nonseparating_spheres: true,
            thin_c_essential: true,
            label: Some(format!("two-thick t={t} w={w}")),
        },
        ..Default::default()
    };
    let genus = SurfaceComponent::closed(t + 1);
    let sphere = SurfaceComponent::sphere(vec![w, w]);
    d.surfaces.insert("H1".into(), surface(Role::Thick, genus.clone(), Some("I1")));
    d.surfaces.insert("H2".into(), surface(Role::Thick, genus, Some("O2")));
    d.surfaces.insert("S".into(), surface(Role::Thin, sphere.clone(), Some("I2")));
    for (outer, inner, h) in [("O1", "I1", "H1"), ("O2", "I2", "H2")] {
        let oh = vec![OneHandle::unweighted(0, 0); t as usize + 1];
        d.pieces.insert(outer.into(), piece(vec![ZeroHandle::empty_ball()], oh, h, &[]));
        let mut oh = vec![OneHandle::weighted(w, (0, 0), (0, 1))];
        oh.extend(vec![OneHandle::unweighted(0, 0); t as usize]);
        d.pieces.insert(inner.into(), piece(vec![ZeroHandle::product(sphere.clone())], oh, h, &["S"]));
    }
    d
}

/// Makes the arc in `I1` removable, then amalgamates across `S`.
pub fn two_thick_script() -> Vec<MoveDescriptor> {
    vec![
        MoveDescriptor::CreateRemovable { piece: "I1".into(), ghost_arc: 0 },
        MoveDescriptor::Amalgamate { thick1: "H1".into(), thick2: "H2".into(), thin: "S".into() },
    ]
}

/// Two thick spheres `[2,2,2,3]` on either side of a thin sphere `[2,3,a]`.
/// Outer pieces join the vertices `(2,2,4)` and `(2,3,4)` along a weight-4
/// edge; inner pieces tube a `(2,2,a)` vertex onto the thin sphere. Needs
/// `a` finite, since `(2,2,∞)` is not a vertex.
pub fn sixth_sharp(a: Weight) -> Option<Decomposition> {
    a.value()?;
    let w = Weight::finite;
    let mut d = Decomposition {
        metadata: Metadata { label: Some(format!("sixth-sharp a={a}")), ..Default::default() },
        ..Default::default()
    };
    let thin = SurfaceComponent::sphere(vec![w(2), w(3), a]);
    let thick = SurfaceComponent::sphere(vec![w(2), w(2), w(2), w(3)]);
    d.surfaces.insert("H1".into(), surface(Role::Thick, thick.clone(), Some("Q1")));
    d.surfaces.insert("H2".into(), surface(Role::Thick, thick, Some("P2")));
    d.surfaces.insert("S".into(), surface(Role::Thin, thin.clone(), Some("Q2")));
    for (outer, inner, h) in [("P1", "Q1", "H1"), ("P2", "Q2", "H2")] {
        let four = w(4);
        let p = piece(
            vec![ZeroHandle::ball(vec![w(2), w(2), four]), ZeroHandle::ball(vec![w(2), w(3), four])],
            vec![OneHandle::weighted(four, (0, 2), (1, 2))],
            h,
            &[],
        );
        d.pieces.insert(outer.into(), p);
        let slot = thin.punctures().iter().position(|x| *x == a).unwrap();
        let cone = ZeroHandle::ball(vec![w(2), w(2), a]);
        let cone_slot = cone.slots().iter().position(|x| *x == a).unwrap();
        let q = piece(
            vec![ZeroHandle::product(thin.clone()), cone],
            vec![OneHandle::weighted(a, (0, slot), (1, cone_slot))],
            h,
            &["S"],
        );
        d.pieces.insert(inner.into(), q);
    }
    Some(d)
}
