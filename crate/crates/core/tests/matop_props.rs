mod common;

use common::*;
use hua_core::liedata::AlgebraKind;
use hua_core::matop::{mat_eval_factored, mat_eval_poly, mat_eval_power_sum};
use hua_core::minpoly::MinPoly;
use hua_core::params::ratio;
use proptest::prelude::*;

#[test]
fn traces_are_central_gl() {
    for n in 1..=3 {
        central(AlgebraKind::Gl, n, &[1, 2, 3]).unwrap();
    }
}

#[test]
fn traces_are_central_sp() {
    central(AlgebraKind::Sp, 1, &[2, 4, 6]).unwrap();
    central(AlgebraKind::Sp, 2, &[2, 4, 6]).unwrap();
}

#[test]
fn traces_are_central_orthogonal() {
    central(AlgebraKind::OEven, 2, &[2, 4, 6]).unwrap();
    central(AlgebraKind::OOdd, 2, &[2, 4, 6]).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn covariance_gl(rs in roots(3), n in 2usize..=3) {
        prop_assert_eq!(covariance(AlgebraKind::Gl, n, &rs), Ok(()));
    }

    #[test]
    fn covariance_sp(rs in roots(3), n in 1usize..=3) {
        prop_assert_eq!(covariance(AlgebraKind::Sp, n, &rs), Ok(()));
    }

    #[test]
    fn covariance_orthogonal(rs in roots(3), odd in any::<bool>(), n in 2usize..=3) {
        let kind = if odd { AlgebraKind::OOdd } else { AlgebraKind::OEven };
        prop_assert_eq!(covariance(kind, n, &rs), Ok(()));
    }

    #[test]
    fn horner_power_sum_factored_agree(rs in roots(3)) {
        let (f, _) = f_matrix(AlgebraKind::Gl, 2);
        let r = f.ring().clone();
        let q = MinPoly::from_roots(&r, rs.iter().map(|&(a, b)| r.constant(ratio(a, b))).collect()).unwrap();
        let h = mat_eval_poly(&q, &f).unwrap();
        prop_assert_eq!(&h, &mat_eval_power_sum(&q, &f).unwrap());
        prop_assert_eq!(&h, &mat_eval_factored(&q, &f, |e| e).unwrap());
    }
}
