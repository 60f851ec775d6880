//! Exact reals of the form `q0 + Σ qi·si` over declared irrational symbols.

mod circle;
pub mod linalg;
mod parse;
mod symbols;
mod value;

pub use circle::{reduce_mod, CircleValue};
pub use linalg::{q_rank, rank};
pub use parse::{parse_rational, parse_scalar};
pub use symbols::{Symbol, SymbolTable};
pub use value::Scalar;

pub(crate) use symbols::is_identifier;
pub(crate) use value::fmt_rational;

use num_rational::BigRational;

/// Shorthand for the rational `n/d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use std::cmp::Ordering;

    use proptest::prelude::*;

    use super::*;

    const ALPHA: &str = "0.54030230586813971740093660744297660373231042061792";
    const BETA: &str = "0.41421356237309504880168872420969807856967187537694";

    fn table() -> SymbolTable {
        static TABLE: std::sync::OnceLock<SymbolTable> = std::sync::OnceLock::new();
        TABLE
            .get_or_init(|| {
                SymbolTable::new()
                    .register("alpha", ALPHA)
                    .unwrap()
                    .register("beta", BETA)
                    .unwrap()
            })
            .clone()
    }

    #[test]
    fn ring_examples() {
        let t = table();
        let a = Scalar::named(&t, "alpha").unwrap();
        assert!((&a + &-&a).is_zero());
        let s = parse_scalar("1/4 + alpha", &t).unwrap();
        assert_eq!(&s - &a, Scalar::from_ratio(1, 4));
        let u = parse_scalar("1/6 + 1/3*alpha", &t).unwrap();
        assert_eq!(u.scale_int(3), parse_scalar("1/2 + alpha", &t).unwrap());
    }

    #[test]
    fn compare_examples() {
        let t = table();
        let a = Scalar::named(&t, "alpha").unwrap();
        assert_eq!(
            Scalar::from_ratio(1, 2).compare(&Scalar::from_ratio(1, 3)).unwrap(),
            Ordering::Greater
        );
        assert_eq!(a.compare(&a).unwrap(), Ordering::Equal);
        assert_eq!(a.compare(&Scalar::from_ratio(1, 2)).unwrap(), Ordering::Greater);
    }

    #[test]
    fn insufficient_precision() {
        let t = SymbolTable::new().register("x", "0.5000").unwrap();
        let x = Scalar::named(&t, "x").unwrap();
        assert!(matches!(
            x.compare(&Scalar::from_ratio(1, 2)),
            Err(crate::Error::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn reduce_examples() {
        let t = table();
        let a = Scalar::named(&t, "alpha").unwrap();
        assert_eq!(
            reduce_mod(&Scalar::from_ratio(5, 4), &ratio(1, 1)).unwrap().representative(),
            &Scalar::from_ratio(1, 4)
        );
        // alpha ≈ 0.54 > 1/2, so use alpha - 1/2 as the small angle.
        let small = &a - &Scalar::from_ratio(1, 2);
        let r = reduce_mod(&-&small, &ratio(1, 2)).unwrap();
        assert_eq!(r.representative(), &(&Scalar::from_ratio(1, 2) - &small));
        assert!(reduce_mod(&Scalar::zero(), &ratio(1, 4)).unwrap().is_zero());
    }

    #[test]
    fn mixed_tables_rejected() {
        let t1 = SymbolTable::new().register("a", ALPHA).unwrap();
        let t2 = SymbolTable::new().register("a", ALPHA).unwrap();
        let x = Scalar::named(&t1, "a").unwrap();
        let y = Scalar::named(&t2, "a").unwrap();
        assert_eq!(x.checked_add(&y).unwrap_err(), crate::Error::MixedSymbolTables);
    }

    #[test]
    fn halves_of_circle_value() {
        let m = ratio(1, 2);
        let c = CircleValue::new(&Scalar::from_ratio(1, 4), &m).unwrap();
        let [h0, h1] = c.halves().unwrap();
        assert_eq!(h0.representative(), &Scalar::from_ratio(1, 8));
        assert_eq!(h1.representative(), &Scalar::from_ratio(3, 8));
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..12, -6i64..6, 1i64..6, -6i64..6, 1i64..6).prop_map(|(a, b, c, d, e, f)| {
            let t = table();
            Scalar::from_parts(Some(&t), ratio(a, b), [(0, ratio(c, d)), (1, ratio(e, f))])
        })
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn order_consistent_with_add(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            let ab = a.compare(&b).unwrap();
            prop_assert_eq!((&a + &c).compare(&(&b + &c)).unwrap(), ab);
            prop_assert_eq!(b.compare(&a).unwrap(), ab.reverse());
        }

        #[test]
        fn reduce_idempotent(a in arb_scalar(), n in 1i64..9) {
            let m = ratio(1, n);
            let r = reduce_mod(&a, &m).unwrap();
            prop_assert!(r.representative().compare(&Scalar::zero()).unwrap() != Ordering::Less);
            prop_assert!(r.representative().lt(&Scalar::from_rational(m.clone())).unwrap());
            prop_assert_eq!(reduce_mod(r.representative(), &m).unwrap(), r.clone());
            let k = (&a - r.representative()).scale(&(ratio(1, 1) / &m));
            prop_assert!(k.as_rational().map(|q| q.is_integer()).unwrap_or(false));
        }

        #[test]
        fn q_rank_invariant_under_recombination(a in arb_scalar(), b in arb_scalar(), k in -5i64..5) {
            let base = q_rank(&[a.clone(), b.clone()]);
            let mixed = q_rank(&[&a + &b.scale_int(k), b.clone()]);
            prop_assert_eq!(base, mixed);
        }

        #[test]
        fn print_parse_round_trip(a in arb_scalar()) {
            let t = table();
            prop_assert_eq!(parse_scalar(&a.to_string(), &t).unwrap(), a);
        }
    }
}
