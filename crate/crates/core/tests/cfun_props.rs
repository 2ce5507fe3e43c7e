mod common;

use common::*;
use hua_core::cfun::{c_product_line_bundle, e_product_line_bundle, CFunction};
use hua_core::liedata::{realform, RealForm};
use hua_core::params::{rat, ratio};
use proptest::prelude::*;

#[test]
fn normalized_at_rho() {
    for form in catalog() {
        c_normalized(form).unwrap();
    }
}

#[test]
fn exact_zero_certificates() {
    for form in catalog() {
        assert!(zero_certificates(form).unwrap() > 0);
    }
}

#[test]
fn finite_on_dominant_grid() {
    for form in catalog() {
        assert!(dominant_finite(form).unwrap() > 0, "{form}");
    }
}

#[test]
fn line_bundle_even_in_ell() {
    let rs = &realform(RealForm::Upq { p: 1, q: 1 }).unwrap().roots;
    for g in [e_product_line_bundle(rs).unwrap(), c_product_line_bundle(rs).unwrap()] {
        let flipped = g.flip_ell().unwrap();
        let key = |g: &hua_core::cfun::GammaProduct| {
            let mut v: Vec<String> = g.factors.iter().map(|f| format!("{:?} {}", f.side, f.arg)).collect();
            v.sort();
            v
        };
        assert_eq!(key(&g), key(&flipped));
        assert_eq!(g.two_exponent, flipped.two_exponent);
    }
}

#[test]
fn three_length_classes_rejected() {
    let rs = &realform(RealForm::Upq { p: 3, q: 2 }).unwrap().roots;
    assert!(c_product_line_bundle(rs).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn line_bundle_even_in_ell_numerically(a in 1i64..40, d in 1i64..6, l in -3i64..=3) {
        let rs = &realform(RealForm::Upq { p: 1, q: 1 }).unwrap().roots;
        let c = CFunction::new(c_product_line_bundle(rs).unwrap(), rs.rho()).unwrap();
        let lambda = [ratio(a, d) + ratio(1, 7)];
        let (x, y) = (c.at(&lambda, &rat(l)).unwrap(), c.at(&lambda, &rat(-l)).unwrap());
        prop_assert_eq!(x.defined, y.defined);
        if let (Some(x), Some(y)) = (x.value, y.value) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }
}
