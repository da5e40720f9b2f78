#![allow(dead_code)]

use kodaira::field::{Fe, Field};
use kodaira::poly::UniPoly;
use kodaira::weierstrass::WeierstrassModel;
use proptest::prelude::*;
use proptest::test_runner::Config;

/// Randomized cases per property.
pub const CASES: u32 = 10_000;

pub fn config() -> Config {
    Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn gf(p: u32, k: u32) -> Field {
    Field::new(p, k).expect("valid field")
}

/// GF(p^k) from a list of (p, k).
pub fn field_from(choices: &'static [(u32, u32)]) -> impl Strategy<Value = Field> {
    prop::sample::select(choices).prop_map(|(p, k)| gf(p, k))
}

pub const CHAR2: &[(u32, u32)] = &[(2, 1), (2, 2), (2, 3), (2, 4)];
pub const SMALL: &[(u32, u32)] = &[(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1), (11, 1)];

pub fn elem(field: &Field, raw: u32) -> Fe {
    Fe(raw % field.order())
}

pub fn poly(field: &Field, raw: &[u32]) -> UniPoly {
    UniPoly::new(field, raw.iter().map(|&r| elem(field, r)).collect())
}

/// Raw coefficient vectors within the K3 degree bounds deg a_i <= 2i.
pub fn raw_k3() -> impl Strategy<Value = [Vec<u32>; 5]> {
    (
        prop::collection::vec(any::<u32>(), 0..=3),
        prop::collection::vec(any::<u32>(), 0..=5),
        prop::collection::vec(any::<u32>(), 0..=7),
        prop::collection::vec(any::<u32>(), 0..=9),
        prop::collection::vec(any::<u32>(), 0..=13),
    )
        .prop_map(|(a, b, c, d, e)| [a, b, c, d, e])
}

pub fn model(field: &Field, raw: &[Vec<u32>; 5]) -> WeierstrassModel {
    WeierstrassModel::from_array(raw.clone().map(|r| poly(field, &r))).expect("same field")
}

/// Force t^{v_i} | a_i by shifting.
pub fn model_divisible(field: &Field, raw: &[Vec<u32>; 5], v: [usize; 5]) -> WeierstrassModel {
    let mut i = 0;
    let a = raw.clone().map(|r| {
        let p = poly(field, &r).shift(v[i]);
        i += 1;
        p
    });
    WeierstrassModel::from_array(a).expect("same field")
}
