use linkoid::bracket::{bracket, normalized_bracket, normalized_ordered_bracket, ordered_bracket};
use linkoid::corpus::Corpus;
use linkoid::diagram::{Direction, MoveKind, OrderingMode, ScrambleOptions};
use linkoid::kbsm::{normalized_skein, normalized_skein_on_sphere, reduce_to_skein, specialize, ArcWeights};
use linkoid::laurent::{Monomial, Variable};
use linkoid::oracle::{oracle_bracket, oracle_ordered_bracket};
use linkoid::tcol::t_col;
use linkoid::{Diagram, LaurentPoly};
use proptest::prelude::*;
use std::sync::OnceLock;

fn corpus() -> &'static Corpus {
    static C: OnceLock<Corpus> = OnceLock::new();
    C.get_or_init(|| Corpus::bundled().unwrap())
}

fn linkoids() -> &'static [(String, Diagram)] {
    static L: OnceLock<Vec<(String, Diagram)>> = OnceLock::new();
    L.get_or_init(|| {
        let c = corpus();
        c.linkoids().map(|e| (e.name.clone(), c.diagram(&e.name).unwrap())).collect()
    })
}

fn scrambled(i: usize, seed: u64, steps: usize, framed: bool) -> (&'static Diagram, Diagram) {
    let d = &linkoids()[i % linkoids().len()].1;
    let (s, _) = d.scramble(&ScrambleOptions { steps, seed, framed, max_crossings: None });
    (d, s)
}

fn variable() -> impl Strategy<Value = Variable> {
    prop_oneof![
        Just(Variable::A),
        Just(Variable::Lambda),
        (1u32..4).prop_map(|i| Variable::pair(i, i + 1)),
    ]
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-5i64..=5, prop::collection::vec((variable(), -4i32..=4), 0..3)), 0..5).prop_map(|ts| {
        let mut p = LaurentPoly::zero();
        for (c, fs) in ts {
            let mut t = LaurentPoly::constant(c);
            for (v, e) in fs {
                t = &t * &LaurentPoly::term(1.into(), Monomial::var(v, e));
            }
            p += t;
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_text_round_trip(p in poly()) {
        let back: LaurentPoly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn poly_ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p - &p, LaurentPoly::zero());
    }

    #[test]
    fn mirror_and_forget_are_ring_maps(p in poly(), q in poly()) {
        prop_assert_eq!((&p * &q).mirror(), &p.mirror() * &q.mirror());
        prop_assert_eq!(p.mirror().mirror(), p.clone());
        prop_assert_eq!((&p * &q).forget_pairs(), &p.forget_pairs() * &q.forget_pairs());
    }

    #[test]
    fn scrambles_stay_valid_and_round_trip(i in 0usize..64, seed in any::<u64>(), steps in 1usize..40) {
        let (_, s) = scrambled(i, seed, steps, false);
        prop_assert!(s.validate().is_empty());
        let back = Diagram::parse(&s.to_text()).unwrap();
        prop_assert!(back.is_isomorphic(&s));
        prop_assert_eq!(back.writhe(), s.writhe());
    }

    #[test]
    fn normalized_values_are_invariant(i in 0usize..64, seed in any::<u64>(), steps in 1usize..40) {
        let (d, s) = scrambled(i, seed, steps, false);
        prop_assert_eq!(normalized_bracket(&s).unwrap(), normalized_bracket(d).unwrap());
        prop_assert_eq!(normalized_skein(&s).unwrap(), normalized_skein(d).unwrap());
        if d.ordering() != OrderingMode::Unlabeled && d.open_count() > 0 {
            prop_assert_eq!(normalized_ordered_bracket(&s).unwrap(), normalized_ordered_bracket(d).unwrap());
        }
    }

    #[test]
    fn framed_moves_fix_unnormalized_values(i in 0usize..64, seed in any::<u64>(), steps in 1usize..40) {
        let (d, s) = scrambled(i, seed, steps, true);
        prop_assert_eq!(s.writhe(), d.writhe());
        prop_assert_eq!(bracket(&s).unwrap(), bracket(d).unwrap());
        prop_assert_eq!(reduce_to_skein(&s).unwrap(), reduce_to_skein(d).unwrap());
    }

    #[test]
    fn state_sum_matches_oracle(i in 0usize..64, seed in any::<u64>(), steps in 1usize..20) {
        let (_, s) = scrambled(i, seed, steps, false);
        prop_assume!(s.crossing_count() <= 14);
        let b = bracket(&s).unwrap();
        prop_assert_eq!(&b, &oracle_bracket(&s).unwrap());
        let k = reduce_to_skein(&s).unwrap();
        prop_assert_eq!(&b, &specialize(&k, ArcWeights::Plain));
        if s.ordering() != OrderingMode::Unlabeled && s.open_count() > 0 {
            let o = ordered_bracket(&s).unwrap();
            prop_assert_eq!(&o, &oracle_ordered_bracket(&s).unwrap());
            prop_assert_eq!(&o, &specialize(&k, ArcWeights::Ordered));
            prop_assert_eq!(o.forget_pairs(), b);
        }
    }

    #[test]
    fn mirror_conjugates_values(i in 0usize..64, seed in any::<u64>(), steps in 0usize..20) {
        let (_, s) = scrambled(i, seed, steps, false);
        let m = s.mirror();
        prop_assert_eq!(m.writhe(), -s.writhe());
        prop_assert_eq!(normalized_bracket(&m).unwrap(), normalized_bracket(&s).unwrap().mirror());
        prop_assert_eq!(normalized_skein(&m).unwrap(), normalized_skein(&s).unwrap().mirror());
    }

    #[test]
    fn sphere_value_forgets_infinity(i in 0usize..64, seed in any::<u64>(), steps in 0usize..20) {
        let (_, s) = scrambled(i, seed, steps, false);
        prop_assert_eq!(normalized_skein_on_sphere(&s).unwrap(), normalized_skein(&s.to_sphere()).unwrap());
    }

    #[test]
    fn kink_multiplies_by_framing_factor(i in 0usize..64, seed in any::<u64>(), steps in 0usize..20, pick in any::<usize>()) {
        let (_, s) = scrambled(i, seed, steps, false);
        for (kind, k) in [(MoveKind::R1Pos, 3), (MoveKind::R1Neg, -3)] {
            let sites = s.find_move_sites(kind, Direction::Apply);
            prop_assume!(!sites.is_empty());
            let t = s.apply_move(&sites[pick % sites.len()]).unwrap();
            prop_assert_eq!(bracket(&t).unwrap(), &bracket(&s).unwrap() * &LaurentPoly::a_term(-1, k));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn graph_moves_fix_t_col(seed in any::<u64>(), steps in 1usize..30) {
        for name in ["theta_trefoil", "theta_trefoil_a", "theta_trefoil_c"] {
            let g = corpus().diagram(name).unwrap();
            let (s, _) = g.scramble(&ScrambleOptions { steps, seed, framed: false, max_crossings: None });
            prop_assert_eq!(t_col(&s).unwrap(), t_col(&g).unwrap());
        }
    }
}
