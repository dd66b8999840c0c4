use orbcalc::compressionbody::{assemble, is_trivial, OneHandle, Triviality, ZeroHandle};
use orbcalc::decomposition::{fundamental_identity, validate, Decomposition};
use orbcalc::harness::campaign::{check_record, move_candidates};
use orbcalc::harness::enumerate::enumerate_small_compressionbodies;
use orbcalc::harness::generator::{generate_case, FuzzConfig};
use orbcalc::harness::oracle::{count_cells, independent_n, listed_spherical};
use orbcalc::moves::apply;
use orbcalc::orbifold::VertexTriple;
use orbcalc::{OrbSurface, Rational, SurfaceComponent, Weight};
use proptest::prelude::*;

fn weight() -> impl Strategy<Value = Weight> {
    prop_oneof![9 => (2u64..=30).prop_map(Weight::finite), 1 => Just(Weight::INFINITY)]
}

fn component() -> impl Strategy<Value = SurfaceComponent> {
    (0u32..4, prop::collection::vec(weight(), 0..6)).prop_map(|(g, p)| SurfaceComponent::new(g, p))
}

fn config() -> impl Strategy<Value = FuzzConfig> {
    (any::<u64>(), 1usize..=3, 0u32..=2, 2u64..=12, 0.0f64..0.5, 1usize..=3).prop_map(
        |(seed, max_handles, max_genus, max_weight, inf_probability, max_thick)| FuzzConfig {
            seed,
            count: 1,
            max_handles,
            max_genus,
            max_weight,
            inf_probability,
            max_thick,
            finite_only: false,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn orb_char_is_additive(a in component(), b in component()) {
        let sum = OrbSurface::new(vec![a.clone(), b.clone()]).orb_char();
        prop_assert_eq!(sum, a.orb_char() + b.orb_char());
    }

    #[test]
    fn orb_char_matches_definition(c in component()) {
        let direct = Rational::from_int(2 * c.genus() as i64 - 2)
            + c.punctures().iter().map(|w| Rational::one() - w.reciprocal()).sum::<Rational>();
        prop_assert_eq!(c.orb_char(), direct);
    }

    #[test]
    fn vertex_validity_is_the_list(a in weight(), b in weight(), c in weight()) {
        prop_assert_eq!(VertexTriple::new(a, b, c).is_valid(), listed_spherical(a, b, c));
    }

    #[test]
    fn generated_cases_are_valid_and_balanced(cfg in config(), index in 0usize..1000) {
        let d = generate_case(&cfg, index).unwrap();
        prop_assert!(validate(&d).passed(), "{}", validate(&d).summary());
        prop_assert!(fundamental_identity(&d).unwrap().holds);
    }

    #[test]
    fn generation_is_deterministic(cfg in config(), index in 0usize..1000) {
        prop_assert_eq!(generate_case(&cfg, index).unwrap(), generate_case(&cfg, index).unwrap());
    }

    #[test]
    fn files_round_trip(cfg in config(), index in 0usize..1000) {
        let d = generate_case(&cfg, index).unwrap();
        let text = serde_json::to_string_pretty(&d).unwrap();
        let back: Decomposition = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    }

    #[test]
    fn renamed_fields_are_rejected(cfg in config(), index in 0usize..1000, pick in any::<prop::sample::Index>()) {
        let d = generate_case(&cfg, index).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        let keys: Vec<usize> = text.match_indices("\":").map(|(i, _)| i).collect();
        let at = keys[pick.index(keys.len())];
        let mut mutated = text.clone();
        mutated.insert(at, 'X');
        prop_assert!(serde_json::from_str::<Decomposition>(&mutated).is_err(), "{}", mutated);
    }

    #[test]
    fn legal_moves_keep_their_contracts(cfg in config(), index in 0usize..1000, pick in any::<prop::sample::Index>()) {
        let d = generate_case(&cfg, index).unwrap();
        let cands = move_candidates(&d);
        prop_assume!(!cands.is_empty());
        let m = &cands[pick.index(cands.len())];
        if let Ok((after, rec)) = apply(&d, m) {
            prop_assert!(check_record(&d, &after, &rec).is_ok(), "{:?}", check_record(&d, &after, &rec));
            prop_assert!(fundamental_identity(&after).unwrap().holds);
        }
    }

    #[test]
    fn arc_balls_on_a_hub_are_counted(genus in 0usize..5, w in weight(), arcs in 0usize..3) {
        // An empty hub with `genus` self-handles and `arcs` arc balls tubed on.
        let mut zero = vec![ZeroHandle::empty_ball()];
        let mut one = vec![OneHandle::unweighted(0, 0); genus];
        for i in 0..arcs {
            zero.push(ZeroHandle::ball(vec![w, w]));
            one.push(OneHandle::unweighted(0, i + 1));
        }
        let c = assemble(zero.clone(), one.clone()).unwrap();
        let cells = count_cells(&zero, &one);
        prop_assert_eq!(c.boundary_plus().euler(), cells.plus_euler);
        prop_assert_eq!(c.boundary_plus().punctures().len(), 2 * arcs);
        prop_assert_eq!(c.n_value(), independent_n(&zero, &one));
    }
}

#[test]
fn euler_bookkeeping_on_four_handles() {
    let ws = [Weight::TWO, Weight::finite(3), Weight::INFINITY];
    for c in enumerate_small_compressionbodies(4, &ws) {
        let cells = count_cells(c.zero_handles(), c.one_handles());
        assert_eq!(c.boundary_plus().euler(), cells.plus_euler);
        let mut p = cells.plus_punctures.clone();
        p.sort();
        assert_eq!(c.boundary_plus().punctures(), p.as_slice());
    }
}

#[test]
fn negative_n_is_a_trivial_ball() {
    let ws = [Weight::TWO, Weight::finite(3), Weight::finite(5), Weight::finite(7), Weight::INFINITY];
    for c in enumerate_small_compressionbodies(3, &ws) {
        if c.n_value().is_negative() {
            assert_eq!(is_trivial(&c), Triviality::TrivialBall, "{:?}", c.zero_handles());
        }
    }
}
