use std::collections::BTreeMap;

use hua_core::params::{ratio, ParamPoly, ParamRing, Rat};
use proptest::prelude::*;

fn ring() -> ParamRing {
    ParamRing::new(["a", "b", "c"]).unwrap()
}

/// Random polynomial from (coefficient, exponents) triples.
fn poly() -> impl Strategy<Value = Vec<(i64, i64, [u32; 3])>> {
    prop::collection::vec((-5i64..=5, 1i64..=4, [0u32..3, 0u32..3, 0u32..3]), 0..5)
}

fn build(r: &ParamRing, spec: &[(i64, i64, [u32; 3])]) -> ParamPoly {
    let vars = ["a", "b", "c"].map(|v| r.var(v).unwrap());
    let mut out = r.zero();
    for (num, den, e) in spec {
        let mut t = r.constant(ratio(*num, *den));
        for (v, k) in vars.iter().zip(e) {
            t = &t * &v.pow(*k);
        }
        out = &out + &t;
    }
    out
}

fn point() -> impl Strategy<Value = [(i64, i64); 3]> {
    [(-6i64..=6, 1i64..=3), (-6i64..=6, 1i64..=3), (-6i64..=6, 1i64..=3)]
}

fn assignment(p: &[(i64, i64); 3]) -> BTreeMap<String, Rat> {
    ["a", "b", "c"].iter().zip(p).map(|(k, (n, d))| (k.to_string(), ratio(*n, *d))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_laws(x in poly(), y in poly(), z in poly()) {
        let r = ring();
        let (x, y, z) = (build(&r, &x), build(&r, &y), build(&r, &z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn render_parse_round_trip(x in poly()) {
        let r = ring();
        let x = build(&r, &x);
        prop_assert_eq!(r.parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn evaluation_is_a_homomorphism(x in poly(), y in poly(), pt in point()) {
        let r = ring();
        let (x, y) = (build(&r, &x), build(&r, &y));
        let a = assignment(&pt);
        let (vx, vy) = (x.eval(&a).unwrap(), y.eval(&a).unwrap());
        prop_assert_eq!((&x * &y).eval(&a).unwrap(), &vx * &vy);
        prop_assert_eq!((&x + &y).eval(&a).unwrap(), vx + vy);
    }

    #[test]
    fn substitution_then_eval(x in poly(), pt in point()) {
        // x(a, b, c) with a ↦ b + c, evaluated, equals x at (b + c, b, c)
        let r = ring();
        let x = build(&r, &x);
        let mut map = BTreeMap::new();
        map.insert("a".to_string(), &r.var("b").unwrap() + &r.var("c").unwrap());
        let sx = x.substitute(&map, &r).unwrap();
        let mut a = assignment(&pt);
        let shifted = &a["b"] + &a["c"];
        let lhs = sx.eval(&a).unwrap();
        a.insert("a".into(), shifted);
        prop_assert_eq!(lhs, x.eval(&a).unwrap());
    }
}

#[test]
fn embed_into_larger_ring() {
    let small = ParamRing::new(["b"]).unwrap();
    let x = small.parse("b^2 - 1/3").unwrap();
    let big = ring();
    let y = x.embed(&big).unwrap();
    assert_eq!(y, big.parse("b^2 - 1/3").unwrap());
    assert!(big.parse("a").unwrap().embed(&small).is_err());
}
