mod common;

use common::*;
use kodaira::poly::{Place, Valuation};
use kodaira::{classify_all, tate_classify, CoordChange, Fe, KodairaType, ReductionKind};
use proptest::prelude::*;

/// Small forced valuations at t = 0, so that additive fibres are common.
fn shifts() -> impl Strategy<Value = [usize; 5]> {
    (0usize..=2, 0usize..=3, 0usize..=4, 0usize..=5, 0usize..=7).prop_map(|(a, b, c, d, e)| [a, b, c, d, e])
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn multiplicative_fibres_match_discriminant_valuation(
        f in field_from(SMALL), raw in raw_k3(), v in shifts(), x in any::<u32>(),
    ) {
        let m = model_divisible(&f, &raw, v).translate_parameter(elem(&f, x));
        let place = Place::finite(&f, elem(&f, x));
        let Ok(r) = tate_classify(&m, &place) else { return Ok(()) };
        if let KodairaType::I(n) = r.kodaira {
            prop_assert_eq!(r.components, n.max(1));
            prop_assert_eq!(r.v_delta, n);
            prop_assert_eq!(r.wild_defect, 0);
            // Independent oracle: the poly module's valuation of Δ.
            let Valuation::Finite(vd) = m.discriminant().valuation(&place, None).unwrap() else {
                unreachable!("Δ ≠ 0 when classification succeeds")
            };
            prop_assert_eq!(vd, n + 12 * r.minimality_reductions);
        }
    }

    #[test]
    fn tame_additive_fibres_satisfy_ogg(f in field_from(&[(5, 1), (7, 1), (5, 2)]), raw in raw_k3(), v in shifts()) {
        let v = v.map(|x| x.max(1));
        let m = model_divisible(&f, &raw, v);
        let Ok(r) = tate_classify(&m, &Place::zero(&f)) else { return Ok(()) };
        if !r.kodaira.is_additive() {
            // t | a_i for all i: only a minimality reduction can leave I_n.
            prop_assert!(r.minimality_reductions > 0);
            return Ok(());
        }
        prop_assert_eq!(r.v_delta, r.components + 1, "{}", r.kodaira);
        prop_assert_eq!(r.wild_defect, 0);
    }

    #[test]
    fn wild_defect_is_nonnegative(f in field_from(&[(2, 1), (2, 2), (3, 1), (3, 2)]), raw in raw_k3(), v in shifts()) {
        let m = model_divisible(&f, &raw, v);
        let Ok(r) = tate_classify(&m, &Place::zero(&f)) else { return Ok(()) };
        prop_assert!(r.wild_defect >= 0, "{} vΔ {} m {}", r.kodaira, r.v_delta, r.components);
    }

    #[test]
    fn classification_is_invariant_under_coordinate_change(
        f in field_from(SMALL), raw in raw_k3(), v in shifts(),
        u in any::<u32>(),
        r in prop::collection::vec(any::<u32>(), 0..=3),
        s in prop::collection::vec(any::<u32>(), 0..=2),
        w in prop::collection::vec(any::<u32>(), 0..=4),
    ) {
        let m = model_divisible(&f, &raw, v);
        let c = CoordChange::new(&f, Fe(1 + u % (f.order() - 1)), poly(&f, &r), poly(&f, &s), poly(&f, &w));
        let moved = m.apply_change(&c).unwrap();
        let place = Place::zero(&f);
        match (tate_classify(&m, &place), tate_classify(&moved, &place)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.kodaira, b.kodaira);
                prop_assert_eq!(a.components, b.components);
                prop_assert_eq!(a.v_delta, b.v_delta);
                prop_assert_eq!(a.wild_defect, b.wild_defect);
            }
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn reduction_kind_agrees_with_type(f in field_from(SMALL), raw in raw_k3(), v in shifts()) {
        let m = model_divisible(&f, &raw, v);
        let place = Place::zero(&f);
        let Ok(r) = tate_classify(&m, &place) else { return Ok(()) };
        // The coarse type reads the given equation, so agreement needs a minimal input.
        prop_assume!(r.minimality_reductions == 0);
        let kind = kodaira::reduction_kind(&m, &place).unwrap();
        let expected = match r.kodaira {
            KodairaType::I(0) => ReductionKind::Good,
            KodairaType::I(_) => ReductionKind::Multiplicative,
            _ => ReductionKind::Additive,
        };
        prop_assert_eq!(kind, expected);
    }
}

proptest! {
    #![proptest_config(proptest::test_runner::Config { cases: 2_000, ..config() })]

    /// Σ vΔ = 12 N for complete reports of models without minimality reductions.
    #[test]
    fn euler_number_of_complete_reports(f in field_from(&[(2, 1), (3, 1), (5, 1)]), raw in raw_k3()) {
        let m = model(&f, &raw);
        let Ok(r) = classify_all(&m, 4) else { return Ok(()) };
        if r.complete() && r.minimality_reductions == 0 {
            prop_assert_eq!(r.total_v_delta as usize, 12 * r.infinity_weight);
            prop_assert!(r.euler_check());
        }
    }
}
