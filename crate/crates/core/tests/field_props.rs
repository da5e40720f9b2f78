mod common;

use common::*;
use kodaira::field::{rational, Fe};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

const FIELDS: &[(u32, u32)] = &[
    (2, 1), (2, 3), (2, 4), (2, 8), (3, 1), (3, 3), (5, 2), (7, 1), (11, 2), (13, 1), (101, 1),
];

proptest! {
    #![proptest_config(config())]

    #[test]
    fn fermat(f in field_from(FIELDS), x in any::<u32>()) {
        let x = Fe(1 + x % (f.order() - 1));
        prop_assert_eq!(f.pow(x, (f.order() - 1) as u64), f.one());
    }

    #[test]
    fn pth_root_inverts_frobenius(f in field_from(FIELDS), x in any::<u32>()) {
        let x = elem(&f, x);
        let p = f.characteristic() as u64;
        prop_assert_eq!(f.pth_root(f.pow(x, p)), x);
        prop_assert_eq!(f.pow(f.pth_root(x), p), x);
    }

    #[test]
    fn frobenius_is_additive(f in field_from(FIELDS), x in any::<u32>(), y in any::<u32>()) {
        let (x, y) = (elem(&f, x), elem(&f, y));
        let p = f.characteristic() as u64;
        prop_assert_eq!(f.pow(f.add(x, y), p), f.add(f.pow(x, p), f.pow(y, p)));
    }

    #[test]
    fn field_axioms(f in field_from(FIELDS), x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let (x, y, z) = (elem(&f, x), elem(&f, y), elem(&f, z));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.add(x, f.neg(x)), Fe::ZERO);
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        }
    }

    #[test]
    fn rational_sum_is_reduced_cross_product(
        a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000,
    ) {
        let s = rational(a, b) + rational(c, d);
        // s = (ad + bc) / bd, checked by cross-multiplication.
        let lhs = s.numer() * BigInt::from(b * d);
        let rhs = BigInt::from(a * d + b * c) * s.denom();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(s.numer().gcd(s.denom()).is_one());
        prop_assert!(s.denom() > &BigInt::from(0));
    }
}
