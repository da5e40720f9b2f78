mod common;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use common::*;
use kodaira::field::{Fe, Field};
use kodaira::poly::Place;
use kodaira::symbolic::{
    apply_assignments, eliminate, impose_valuation, sym_specialize, symbolic_discriminant, ConstraintSystem,
    ElimVerdict, Family, FamilyKind, SymPlace, SymPoly, Symbols, DEFAULT_BUDGET,
};
use kodaira::weierstrass::WeierstrassModel;
use proptest::prelude::*;

struct Prepared {
    family: Family,
    delta: SymPoly,
}

fn prepared(kind: FamilyKind) -> &'static Prepared {
    static II: OnceLock<Prepared> = OnceLock::new();
    static III: OnceLock<Prepared> = OnceLock::new();
    let cell = match kind {
        FamilyKind::CaseII => &II,
        FamilyKind::CaseIII => &III,
        FamilyKind::GeneralChar2 => unreachable!(),
    };
    cell.get_or_init(|| {
        let (family, delta) = symbolic_discriminant(kind);
        Prepared { family, delta }
    })
}

/// Systems whose eliminations are checked for soundness.
const SYSTEMS: [(FamilyKind, SymPlace, u32); 7] = [
    (FamilyKind::CaseII, SymPlace::Zero, 5),
    (FamilyKind::CaseII, SymPlace::Zero, 20),
    (FamilyKind::CaseII, SymPlace::Infinity, 19),
    (FamilyKind::CaseIII, SymPlace::Zero, 4),
    (FamilyKind::CaseIII, SymPlace::Zero, 20),
    (FamilyKind::CaseIII, SymPlace::One, 19),
    (FamilyKind::CaseIII, SymPlace::One, 20),
];

fn eliminated(i: usize) -> &'static (ConstraintSystem, ElimVerdict) {
    static CELLS: [OnceLock<(ConstraintSystem, ElimVerdict)>; 7] = [const { OnceLock::new() }; 7];
    CELLS[i].get_or_init(|| {
        let (kind, place, n) = SYSTEMS[i];
        let sys = impose_valuation(&prepared(kind).delta, place, n).unwrap();
        let v = eliminate(&sys, DEFAULT_BUDGET);
        (sys, v)
    })
}

fn values(family: &Family, field: &Field, raw: &[u32]) -> BTreeMap<String, Fe> {
    family
        .params()
        .into_iter()
        .zip(raw.iter().cycle())
        .map(|(name, &r)| (name, elem(field, r)))
        .collect()
}

fn constant(f: &SymPoly, field: &Field, vals: &BTreeMap<String, Fe>) -> Fe {
    sym_specialize(f, field, vals).unwrap().coeff(0)
}

fn concrete_model(family: &Family, field: &Field, vals: &BTreeMap<String, Fe>) -> WeierstrassModel {
    WeierstrassModel::from_array(family.a.clone().map(|a| sym_specialize(&a, field, vals).unwrap())).unwrap()
}

fn sym_place(field: &Field, place: SymPlace) -> Place {
    match place {
        SymPlace::Zero => Place::zero(field),
        SymPlace::One => Place::finite(field, Fe::ONE),
        SymPlace::Infinity => Place::Infinity,
    }
}

fn delta_at_least(m: &WeierstrassModel, place: &Place, n: u32) -> bool {
    m.discriminant().valuation(place, Some(24)).unwrap().at_least(n)
}

fn random_sympoly(syms: &Arc<Symbols>, monos: &[Vec<u8>]) -> SymPoly {
    monos.iter().fold(SymPoly::zero(syms), |acc, m| {
        let mono = m
            .iter()
            .enumerate()
            .fold(SymPoly::one(syms), |p, (i, &e)| p.mul(&SymPoly::var(syms, i).pow(e as u32)));
        acc.add(&mono)
    })
}

fn monomials() -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(0u8..4, 4), 0..8)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn frobenius_is_linear(f in monomials(), g in monomials()) {
        let syms = Symbols::new(["a", "b", "c"]);
        let (f, g) = (random_sympoly(&syms, &f), random_sympoly(&syms, &g));
        prop_assert_eq!(f.add(&g).square(), f.square().add(&g.square()));
        prop_assert_eq!(f.square(), f.mul(&f));
    }

    #[test]
    fn specialized_discriminant_matches_concrete(
        field in field_from(CHAR2),
        iii in any::<bool>(),
        raw in prop::collection::vec(any::<u32>(), 22),
    ) {
        let kind = if iii { FamilyKind::CaseIII } else { FamilyKind::CaseII };
        let p = prepared(kind);
        let vals = values(&p.family, &field, &raw);
        let m = concrete_model(&p.family, &field, &vals);
        prop_assert_eq!(sym_specialize(&p.delta, &field, &vals).unwrap(), m.discriminant());
    }

    /// Concrete tuples solving the valuation system have the valuation, and
    /// conversely.
    #[test]
    fn valuation_systems_are_exact(
        field in field_from(&[(2, 1), (2, 2)]),
        sys in 0usize..SYSTEMS.len(),
        raw in prop::collection::vec(any::<u32>(), 22),
    ) {
        let (kind, place, n) = SYSTEMS[sys];
        let p = prepared(kind);
        let vals = values(&p.family, &field, &raw);
        let (system, _) = eliminated(sys);
        let solves = system.equations.iter().all(|e| constant(&e.poly, &field, &vals).is_zero());
        let m = concrete_model(&p.family, &field, &vals);
        prop_assert_eq!(solves, delta_at_least(&m, &sym_place(&field, place), n));
    }

    /// Every tuple solving the input system lies on a solved leaf whose
    /// assignments and nonvanishing conditions it satisfies.
    #[test]
    fn elimination_covers_every_solution(
        field in field_from(&[(2, 1), (2, 2)]),
        sys in 0usize..SYSTEMS.len(),
        raw in prop::collection::vec(any::<u32>(), 22),
    ) {
        let (kind, _, _) = SYSTEMS[sys];
        let p = prepared(kind);
        let vals = values(&p.family, &field, &raw);
        let (system, verdict) = eliminated(sys);
        let solves = system.equations.iter().all(|e| constant(&e.poly, &field, &vals).is_zero());
        if solves {
            let covered = verdict.solved().any(|leaf| {
                leaf.nonvanishing.iter().all(|&i| !vals[leaf.syms.name(i)].is_zero())
                    && leaf.assignments.iter().all(|(i, q)| vals[leaf.syms.name(*i)] == constant(q, &field, &vals))
            });
            prop_assert!(covered, "uncovered solution {:?}", vals);
        }
    }

    /// Every point parametrized by a solved leaf solves the input system.
    #[test]
    fn solved_leaves_parametrize_solutions(
        field in field_from(CHAR2),
        sys in 0usize..SYSTEMS.len(),
        leaf_pick in any::<usize>(),
        raw in prop::collection::vec(any::<u32>(), 22),
    ) {
        let (kind, place, n) = SYSTEMS[sys];
        let p = prepared(kind);
        let (_, verdict) = eliminated(sys);
        let leaves: Vec<&ConstraintSystem> = verdict.solved().collect();
        prop_assert!(!leaves.is_empty());
        let leaf = leaves[leaf_pick % leaves.len()];
        let mut vals = values(&p.family, &field, &raw);
        for &i in &leaf.nonvanishing {
            let name = leaf.syms.name(i).to_string();
            if vals[&name].is_zero() {
                vals.insert(name, Fe::ONE);
            }
        }
        // Survivors keep their random values; assigned parameters follow.
        let assigned: Vec<(String, Fe)> = leaf
            .assignments
            .iter()
            .map(|(i, _)| {
                let full = apply_assignments(&SymPoly::var(&leaf.syms, *i), &leaf.assignments);
                (leaf.syms.name(*i).to_string(), constant(&full, &field, &vals))
            })
            .collect();
        vals.extend(assigned);
        prop_assert!(leaf.nonvanishing.iter().all(|&i| !vals[leaf.syms.name(i)].is_zero()));
        let m = concrete_model(&p.family, &field, &vals);
        prop_assert!(delta_at_least(&m, &sym_place(&field, place), n));
    }
}

#[test]
fn valuation_samples_are_not_vacuous() {
    let field = gf(2, 1);
    for (sys, &(kind, _, n)) in SYSTEMS.iter().enumerate() {
        if n > 5 {
            continue;
        }
        let p = prepared(kind);
        let (system, _) = eliminated(sys);
        let hits = (0u32..4096)
            .filter(|&s| {
                let raw: Vec<u32> = (0..22).map(|j| (s.wrapping_mul(2654435761) >> j) & 1).collect();
                let vals = values(&p.family, &field, &raw);
                system.equations.iter().all(|e| constant(&e.poly, &field, &vals).is_zero())
            })
            .count();
        assert!(hits > 0, "system {sys} never solved by samples");
    }
}

#[test]
fn general_family_discriminant_matches_concrete() {
    let (family, delta) = symbolic_discriminant(FamilyKind::GeneralChar2);
    let field = gf(2, 2);
    for s in 0u32..200 {
        let raw: Vec<u32> = (0..30).map(|j| s.wrapping_mul(40503).rotate_left(j) % 4).collect();
        let vals = values(&family, &field, &raw);
        let m = concrete_model(&family, &field, &vals);
        assert_eq!(sym_specialize(&delta, &field, &vals).unwrap(), m.discriminant());
    }
}
