use super::*;
use crate::compressionbody::{OneHandle, ZeroHandle};
use crate::decomposition::{net_iota, net_x, Piece, Role};
use crate::harness::builders::{heegaard, piece, surface, two_thick, two_thick_script};
use crate::orbifold::{DiscWeight, Rational, SurfaceComponent, Weight};

fn w(k: u64) -> Weight {
    Weight::finite(k)
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// A thick surface bounded by the two given pieces, oriented toward `B`.
fn on_thick(component: SurfaceComponent, a: Piece, b: Piece) -> Decomposition {
    let mut d = Decomposition::default();
    d.surfaces.insert("H".into(), surface(Role::Thick, component, Some("B")));
    d.pieces.insert("A".into(), a);
    d.pieces.insert("B".into(), b);
    d.ensure_valid().unwrap();
    d
}

fn pillow_side(k: Weight) -> Piece {
    piece(
        vec![ZeroHandle::ball(vec![k, k]), ZeroHandle::ball(vec![k, k])],
        vec![OneHandle::unweighted(0, 1)],
        "H",
        &[],
    )
}

fn thick_component(d: &Decomposition) -> SurfaceComponent {
    let thick: Vec<_> = d.surfaces_with(Role::Thick).collect();
    assert_eq!(thick.len(), 1);
    thick[0].1.component.clone()
}

#[test]
fn destabilize_genus_two() {
    let d = heegaard(2);
    let (out, rec) = apply_type1(&d, "H", DiscWeight::Unpunctured, None).unwrap();
    assert_eq!(rec.delta_net_x, Rational::from_int(-2));
    assert_eq!(rec.delta_net_iota, 0);
    assert_eq!(thick_component(&out), SurfaceComponent::closed(1));
}

#[test]
fn cut_disc_on_punctured_torus() {
    for k in [w(2), w(3), w(7), Weight::INFINITY] {
        let core = piece(
            vec![ZeroHandle::ball(vec![k, k]), ZeroHandle::ball(vec![k, k])],
            vec![OneHandle::weighted(k, (0, 0), (0, 1)), OneHandle::unweighted(0, 1)],
            "H",
            &[],
        );
        let plain = piece(vec![ZeroHandle::ball(vec![k, k])], vec![OneHandle::unweighted(0, 0)], "H", &[]);
        let d = on_thick(SurfaceComponent::new(1, vec![k, k]), core, plain);
        let (out, rec) = apply_type1(&d, "H", DiscWeight::Punctured(k), None).unwrap();
        assert_eq!(rec.delta_net_x, -k.reciprocal() * 2);
        assert_eq!(rec.delta_net_iota, 2);
        assert_eq!(thick_component(&out), SurfaceComponent::sphere(vec![k; 4]));
    }
}

#[test]
fn cut_disc_needs_a_weighted_handle_somewhere() {
    let d = heegaard(2);
    let err = apply_type1(&d, "H", DiscWeight::Punctured(w(3)), None).unwrap_err();
    assert!(matches!(err, MoveError::NoWitness(_)), "{err}");
}

fn genus_two_split() -> Piece {
    piece(
        vec![ZeroHandle::empty_ball(), ZeroHandle::empty_ball()],
        vec![OneHandle::unweighted(0, 1), OneHandle::unweighted(0, 0), OneHandle::unweighted(1, 1)],
        "H",
        &[],
    )
}

#[test]
fn separating_discard_torus() {
    let d = on_thick(SurfaceComponent::closed(2), genus_two_split(), genus_two_split());
    let torus = SurfaceComponent::closed(1);
    let (out, rec) = apply_type1(&d, "H", DiscWeight::Unpunctured, Some(&torus)).unwrap();
    // −2/1 − x(T²)
    assert_eq!(rec.delta_net_x, Rational::from_int(-2));
    assert_eq!(thick_component(&out), torus);
}

#[test]
fn separating_with_positive_delta_is_refused() {
    let d = on_thick(SurfaceComponent::closed(2), genus_two_split(), genus_two_split());
    let k = SurfaceComponent::sphere(vec![w(2)]);
    let err = apply_type1(&d, "H", DiscWeight::Punctured(w(2)), Some(&k)).unwrap_err();
    assert_eq!(err, MoveError::WouldIncreaseNetX { delta: r(1, 2) });
}

#[test]
fn unperturb_four_punctured_sphere() {
    for (k, delta) in [(w(3), r(-4, 3)), (Weight::INFINITY, r(-2, 1)), (w(2), r(-1, 1))] {
        let d = on_thick(SurfaceComponent::sphere(vec![k; 4]), pillow_side(k), pillow_side(k));
        let (out, rec) = apply_type2(&d, "H", k).unwrap();
        assert_eq!(rec.delta_net_x, delta);
        assert_eq!(rec.delta_net_iota, -2);
        assert_eq!(thick_component(&out), SurfaceComponent::sphere(vec![k, k]));
    }
}

#[test]
fn unperturb_needs_punctures() {
    let err = apply_type2(&heegaard(2), "H", w(2)).unwrap_err();
    assert!(matches!(err, MoveError::MissingPunctures { .. }));
}

/// `A` on thick `H`, a product piece `P` between `H` and thin `F`, then `B`
/// from `F` to thick `H2` and `C` beyond. Flow: A → P → B → C.
fn collar(base: SurfaceComponent, a: Piece, p: Piece, b: Piece, c: Piece) -> Decomposition {
    let mut d = Decomposition::default();
    let h = a.assemble().unwrap().boundary_plus().clone();
    let h2 = c.assemble().unwrap().boundary_plus().clone();
    d.surfaces.insert("H".into(), surface(Role::Thick, h, Some("P")));
    d.surfaces.insert("F".into(), surface(Role::Thin, base, Some("B")));
    d.surfaces.insert("H2".into(), surface(Role::Thick, h2, Some("C")));
    d.pieces.insert("A".into(), Piece { plus: "H".into(), ..a });
    d.pieces.insert("P".into(), Piece { plus: "H".into(), minus: vec!["F".into()], ..p });
    d.pieces.insert("B".into(), Piece { plus: "H2".into(), minus: vec!["F".into()], ..b });
    d.pieces.insert("C".into(), Piece { plus: "H2".into(), ..c });
    d.ensure_valid().unwrap();
    d
}

fn genus_two_handlebody() -> Piece {
    piece(vec![ZeroHandle::empty_ball()], vec![OneHandle::unweighted(0, 0); 2], "", &[])
}

#[test]
fn consolidate_torus_collar() {
    let torus = SurfaceComponent::closed(1);
    let d = collar(
        torus.clone(),
        piece(vec![ZeroHandle::empty_ball()], vec![OneHandle::unweighted(0, 0)], "", &[]),
        piece(vec![ZeroHandle::product(torus.clone())], vec![], "", &[]),
        piece(
            vec![ZeroHandle::product(torus), ZeroHandle::empty_ball()],
            vec![OneHandle::unweighted(0, 1), OneHandle::unweighted(1, 1)],
            "",
            &[],
        ),
        genus_two_handlebody(),
    );
    let (out, rec) = consolidate(&d, "H", "F").unwrap();
    assert_eq!(rec.delta_net_x, Rational::zero());
    assert_eq!(out.pieces.len(), 2);
    assert_eq!(out.surfaces.len(), 1);
    assert_eq!(thick_component(&out), SurfaceComponent::closed(2));
    assert!(out.pieces["B"].minus.is_empty());
}

#[test]
fn consolidate_sphere_collar() {
    let k = w(5);
    let s = SurfaceComponent::sphere(vec![k, k]);
    let handle_torus = piece(vec![ZeroHandle::ball(vec![k, k])], vec![OneHandle::unweighted(0, 0)], "", &[]);
    let d = collar(
        s.clone(),
        piece(vec![ZeroHandle::ball(vec![k, k])], vec![], "", &[]),
        piece(vec![ZeroHandle::product(s.clone())], vec![], "", &[]),
        piece(vec![ZeroHandle::product(s)], vec![OneHandle::unweighted(0, 0)], "", &[]),
        handle_torus,
    );
    let (out, rec) = consolidate(&d, "H", "F").unwrap();
    assert_eq!(rec.delta_net_x, Rational::zero());
    assert_eq!(rec.delta_net_iota, 0);
    assert_eq!(thick_component(&out), SurfaceComponent::new(1, vec![k, k]));
}

#[test]
fn consolidate_refuses_bridge_arc() {
    let k = w(2);
    let torus = SurfaceComponent::closed(1);
    let d = collar(
        torus.clone(),
        piece(vec![ZeroHandle::ball(vec![k, k])], vec![OneHandle::unweighted(0, 0)], "", &[]),
        piece(
            vec![ZeroHandle::product(torus.clone()), ZeroHandle::ball(vec![k, k])],
            vec![OneHandle::unweighted(0, 1)],
            "",
            &[],
        ),
        piece(
            vec![ZeroHandle::product(torus), ZeroHandle::empty_ball()],
            vec![OneHandle::unweighted(0, 1), OneHandle::unweighted(1, 1)],
            "",
            &[],
        ),
        genus_two_handlebody(),
    );
    assert_eq!(consolidate(&d, "H", "F").unwrap_err(), MoveError::NotAProduct("P".into()));
}

fn untelescope_data(w1: DiscWeight, w2: DiscWeight, h: Option<SurfaceComponent>, f: Option<SurfaceComponent>) -> UntelescopeData {
    UntelescopeData { w1, w2, h1: h.clone(), h2: h, f }
}

#[test]
fn weak_reduction_of_genus_two() {
    let d = heegaard(2);
    let data = untelescope_data(
        DiscWeight::Unpunctured,
        DiscWeight::Unpunctured,
        Some(SurfaceComponent::closed(1)),
        Some(SurfaceComponent::sphere(vec![])),
    );
    let (out, rec) = untelescope(&d, "H", &data).unwrap();
    assert_eq!(rec.delta_net_x, Rational::zero());
    assert_eq!(out.pieces.len(), 4);
    assert_eq!(net_x(&out).unwrap(), Rational::from_int(2));
    assert_eq!(out.surfaces["H.f"].toward.as_deref(), Some("H.b"));
}

#[test]
fn weak_reduction_rejects_declared_mismatch() {
    let data = untelescope_data(
        DiscWeight::Unpunctured,
        DiscWeight::Unpunctured,
        Some(SurfaceComponent::closed(1)),
        None,
    );
    let err = untelescope(&heegaard(3), "H", &data).unwrap_err();
    assert!(matches!(err, MoveError::DescriptorMismatch { .. }), "{err}");
}

#[test]
fn four_punctured_sphere_identity_never_holds() {
    for k in [w(2), w(3), w(4), w(12), Weight::INFINITY] {
        let d = on_thick(SurfaceComponent::sphere(vec![k; 4]), pillow_side(k), pillow_side(k));
        let s = SurfaceComponent::sphere(vec![k, k]);
        let data = untelescope_data(DiscWeight::Punctured(k), DiscWeight::Punctured(k), Some(s.clone()), Some(s));
        let err = untelescope(&d, "H", &data).unwrap_err();
        let lhs = Rational::from_int(-2) + (Rational::one() - k.reciprocal()) * 4;
        assert!(matches!(err, MoveError::IdentityViolated { lhs: ref l, .. } if *l == lhs), "{err}");
    }
    let d = on_thick(SurfaceComponent::sphere(vec![w(2); 4]), pillow_side(w(2)), pillow_side(w(2)));
    let s = SurfaceComponent::sphere(vec![w(2), w(2)]);
    let data = untelescope_data(DiscWeight::Punctured(w(2)), DiscWeight::Punctured(w(2)), Some(s.clone()), Some(s));
    assert_eq!(
        untelescope(&d, "H", &data).unwrap_err(),
        MoveError::IdentityViolated { lhs: Rational::zero(), rhs: r(-1, 1) }
    );
}

#[test]
fn two_thick_invariants() {
    for (t, k) in [(1, 2), (1, 3), (2, 2), (3, 7)] {
        let d = two_thick(t, w(k));
        assert_eq!(net_x(&d).unwrap(), Rational::from_int(4 * t as i64) + r(2, k as i64));
        assert_eq!(net_iota(&d).unwrap(), -2);
    }
}

#[test]
fn removable_arc_deltas() {
    for (k, delta) in [(w(2), r(1, 1)), (w(5), r(8, 5)), (Weight::INFINITY, r(2, 1))] {
        let d = two_thick(1, k);
        let (out, rec) = create_removable_arc(&d, "I1", 0).unwrap();
        assert_eq!(rec.delta_net_x, delta);
        assert_eq!(rec.delta_net_iota, 2);
        assert_eq!(out.surfaces["H1"].component, SurfaceComponent::new(2, vec![k, k]));
    }
}

#[test]
fn removable_arc_needs_ghost() {
    let err = create_removable_arc(&heegaard(1), "A", 0).unwrap_err();
    assert!(matches!(err, MoveError::NotAGhostArc { .. }));
}

#[test]
fn amalgamation_script() {
    for (t, k) in [(1u32, 2u64), (1, 3), (2, 2), (3, 5)] {
        let d = two_thick(t, w(k));
        let seq = ThinningSequence::run(d.clone(), &two_thick_script()).unwrap();
        let x = thick_component(&seq.final_).orb_char();
        assert_eq!(x, Rational::from_int(4 * t as i64 + 2));
        assert_eq!(seq.final_.surfaces.len(), 1);
        assert_eq!(seq.records[1].delta_net_x, Rational::zero());
        assert_eq!(replay(&seq).unwrap(), seq.final_);
        assert_eq!(seq.total_delta_net_x(), net_x(&seq.final_).unwrap() - net_x(&d).unwrap());
    }
}

#[test]
fn ghost_arcs_on_both_sides_block_amalgamation() {
    let err = amalgamate(&two_thick(1, w(2)), "H1", "H2", "S").unwrap_err();
    assert!(matches!(err, MoveError::NotAmalgable { point: 0, .. }), "{err}");
}

#[test]
fn classical_amalgamation() {
    // Two genus-1 splittings summed along an unpunctured thin sphere.
    let mut d = Decomposition::default();
    let torus = SurfaceComponent::closed(1);
    let s = SurfaceComponent::sphere(vec![]);
    d.surfaces.insert("H1".into(), surface(Role::Thick, torus.clone(), Some("O1")));
    d.surfaces.insert("H2".into(), surface(Role::Thick, torus, Some("I2")));
    d.surfaces.insert("S".into(), surface(Role::Thin, s.clone(), Some("I1")));
    for (o, i, h) in [("O1", "I1", "H1"), ("O2", "I2", "H2")] {
        d.pieces.insert(o.into(), piece(vec![ZeroHandle::empty_ball()], vec![OneHandle::unweighted(0, 0)], h, &[]));
        let inner = piece(
            vec![ZeroHandle::product(s.clone()), ZeroHandle::empty_ball()],
            vec![OneHandle::unweighted(0, 1), OneHandle::unweighted(1, 1)],
            h,
            &["S"],
        );
        d.pieces.insert(i.into(), inner);
    }
    d.ensure_valid().unwrap();
    let (out, rec) = amalgamate(&d, "H1", "H2", "S").unwrap();
    assert_eq!(rec.delta_net_x, Rational::zero());
    assert_eq!(thick_component(&out), SurfaceComponent::closed(2));
}

#[test]
fn not_adjacent() {
    let err = amalgamate(&two_thick(1, w(2)), "H1", "H1", "S").unwrap_err();
    assert!(matches!(err, MoveError::NotAdjacent { .. }));
}

#[test]
fn empty_replay() {
    let seq = ThinningSequence::run(heegaard(3), &[]).unwrap();
    assert_eq!(replay(&seq).unwrap(), heegaard(3));
}

#[test]
fn sequence_round_trips_through_json() {
    let seq = ThinningSequence::run(two_thick(1, w(3)), &two_thick_script()).unwrap();
    let text = serde_json::to_string_pretty(&seq).unwrap();
    let back: ThinningSequence = serde_json::from_str(&text).unwrap();
    assert_eq!(back, seq);
    assert_eq!(replay(&back).unwrap(), seq.final_);
}

#[test]
fn tampered_record_fails_replay() {
    let mut seq = ThinningSequence::run(two_thick(1, w(3)), &two_thick_script()).unwrap();
    seq.records[0].delta_net_x = Rational::zero();
    assert!(matches!(replay(&seq), Err(MoveError::ReplayMismatch { step: 0, .. })));
}
